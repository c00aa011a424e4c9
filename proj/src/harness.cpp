#include "augdl/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "augdl/errors.hpp"
#include "augdl/parallel.hpp"
#include "augdl/rng.hpp"
#include "augdl/stats.hpp"

namespace augdl {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// per-trial stream tags
constexpr std::uint64_t kSplitStream = 0x01;
constexpr std::uint64_t kSubsampleStream = 0x02;
constexpr std::uint64_t kTeacherStream = 0x03;
constexpr std::uint64_t kStudentStream = 0x04;
constexpr std::uint64_t kAugmentStream = 0x05;

bool strategy_uses_volume(Strategy s) {
    return s == Strategy::teacher_noise || s == Strategy::naive_noise || s == Strategy::mixup ||
           s == Strategy::cmixup;
}

bool strategy_uses_eta(Strategy s) { return s == Strategy::teacher_noise || s == Strategy::naive_noise; }

struct CellKey {
    Strategy strategy = Strategy::none;
    std::size_t volume = 0;
    double eta = 0.0;
};

/// Effective cells: one per distinct computation. Strategies that ignore a
/// grid axis collapse it, so nothing is retrained on identical inputs.
std::vector<CellKey> enumerate_cells(const ExperimentPlan& plan, const std::vector<double>& etas) {
    std::vector<CellKey> cells;
    auto push_unique = [&cells](const CellKey& key) {
        for (const CellKey& existing : cells) {
            if (existing.strategy == key.strategy && existing.volume == key.volume && existing.eta == key.eta) return;
        }
        cells.push_back(key);
    };
    for (Strategy s : plan.strategies) {
        if (!strategy_uses_volume(s)) {
            push_unique({s, 0, 0.0});
            continue;
        }
        for (std::size_t v : plan.volumes) {
            if (!strategy_uses_eta(s)) {
                push_unique({s, v, 0.0});
                continue;
            }
            for (double eta : etas) push_unique({s, v, eta});
        }
    }
    return cells;
}

/// Train/test pool sizes are data-determined, so feasibility of a requested
/// train size is the same for every trial.
std::size_t pool_rows(const ExperimentPlan& plan, std::size_t n_rows) {
    std::size_t n_test =
        static_cast<std::size_t>(std::floor(plan.test_fraction * static_cast<double>(n_rows) + 0.5));
    n_test = std::clamp<std::size_t>(n_test, 1, n_rows - 1);
    return n_rows - n_test;
}

struct TrialContext {
    std::uint64_t trial_seed = 0;
    std::size_t resolved_size = 0;
    Dataset train;
    Dataset test;
    ColumnStats stats;
    TrainedTeacher teacher;
    double teacher_rmse = 0.0;
    TrainedStudent baseline;
    double p_baseline = 0.0;
    double test_std = 0.0;
    double split_ms = 0.0;
    double teacher_ms = 0.0;
    double baseline_ms = 0.0;
};

TrialContext build_context(const ExperimentPlan& plan, const Dataset& full, const TrainSize& size,
                           int trial_index) {
    TrialContext ctx;
    ctx.trial_seed = plan.base_seed + static_cast<std::uint64_t>(trial_index);

    auto t0 = Clock::now();
    auto [pool, test] = split(full, {plan.test_fraction, derive_seed(ctx.trial_seed, kSplitStream)});
    ctx.resolved_size = size.resolve(pool.n_rows());
    if (ctx.resolved_size < 1 || ctx.resolved_size > pool.n_rows()) {
        throw data_error("train size " + size.label() + " is infeasible for a pool of " +
                         std::to_string(pool.n_rows()) + " rows");
    }
    ctx.train = ctx.resolved_size == pool.n_rows()
                    ? std::move(pool)
                    : subsample(pool, ctx.resolved_size, derive_seed(ctx.trial_seed, kSubsampleStream, ctx.resolved_size));
    ctx.test = std::move(test);
    ctx.stats = compute_column_stats(ctx.train);
    ctx.test_std = stats::sample_std(ctx.test.target);
    ctx.split_ms = elapsed_ms(t0);

    t0 = Clock::now();
    TeacherSpec teacher_spec = plan.teacher;
    teacher_spec.seed = derive_seed(ctx.trial_seed, kTeacherStream, ctx.resolved_size);
    ctx.teacher = fit_teacher(ctx.train, teacher_spec);
    ctx.teacher_rmse = rmse(teacher_predict(ctx.teacher, ctx.test.features), ctx.test.target);
    ctx.teacher_ms = elapsed_ms(t0);

    t0 = Clock::now();
    StudentSpec student_spec = plan.student;
    student_spec.seed = derive_seed(ctx.trial_seed, kStudentStream, ctx.resolved_size);
    ctx.baseline = fit_student(ctx.train, student_spec);
    ctx.p_baseline = rmse(student_predict(ctx.baseline, ctx.test.features), ctx.test.target);
    ctx.baseline_ms = elapsed_ms(t0);
    return ctx;
}

TrialResult run_cell(const ExperimentPlan& plan, const TrialContext& ctx, const TrainSize& size,
                     const CellKey& cell, int trial_index) {
    TrialResult result;
    result.seed = ctx.trial_seed;
    result.trial_index = trial_index;
    result.train_size_label = size.label();
    result.train_size = ctx.resolved_size;
    result.strategy = cell.strategy;
    result.volume = cell.volume;
    result.eta = cell.eta;
    result.p_baseline = ctx.p_baseline;
    result.teacher_rmse = ctx.teacher_rmse;
    result.test_target_std = ctx.test_std;
    result.teacher_summary =
        teacher_candidate_name(ctx.teacher.chosen) + "(" + ctx.teacher.hyperparams + ")";
    result.durations.split_ms = ctx.split_ms;
    result.durations.teacher_ms = ctx.teacher_ms;
    result.durations.baseline_ms = ctx.baseline_ms;
    if (plan.dump_student_history) result.baseline_history = ctx.baseline.history;

    StudentSpec student_spec = plan.student;
    student_spec.seed = derive_seed(ctx.trial_seed, kStudentStream, ctx.resolved_size);

    if (cell.strategy == Strategy::none) {
        result.p_aug = ctx.p_baseline;
    } else if (cell.strategy == Strategy::distill_only) {
        auto t0 = Clock::now();
        Dataset relabeled = ctx.train;
        relabeled.target = teacher_predict(ctx.teacher, ctx.train.features);
        result.durations.generate_ms = elapsed_ms(t0);

        t0 = Clock::now();
        const TrainedStudent distilled = fit_student(relabeled, student_spec);
        result.p_aug = rmse(student_predict(distilled, ctx.test.features), ctx.test.target);
        result.durations.augmented_ms = elapsed_ms(t0);
        if (plan.dump_student_history) result.augmented_history = distilled.history;
    } else {
        AugmentationConfig config;
        config.strategy = cell.strategy;
        config.volume = cell.volume;
        config.noise_fraction = cell.eta;
        config.noise_center_mode = plan.noise_center_mode;
        config.mixup_alpha = plan.mixup_alpha;
        config.cmixup_bandwidth = plan.cmixup_bandwidth;
        config.seed = derive_seed(ctx.trial_seed, kAugmentStream, ctx.resolved_size,
                                  static_cast<std::uint64_t>(cell.strategy), cell.volume, bits_of(cell.eta));

        auto t0 = Clock::now();
        SyntheticSet synth;
        switch (cell.strategy) {
            case Strategy::teacher_noise:
                synth = generate_teacher_noise(ctx.train, ctx.stats, config, ctx.teacher);
                break;
            case Strategy::naive_noise:
                synth = generate_naive_noise(ctx.train, ctx.stats, config);
                break;
            case Strategy::mixup:
                synth = generate_mixup(ctx.train, config);
                break;
            case Strategy::cmixup:
                synth = generate_cmixup(ctx.train, config);
                break;
            default:
                throw std::logic_error("run_cell: unexpected strategy");
        }
        const Dataset combined = combine(ctx.train, synth);
        result.durations.generate_ms = elapsed_ms(t0);

        t0 = Clock::now();
        const TrainedStudent augmented = fit_student(combined, student_spec);
        result.p_aug = rmse(student_predict(augmented, ctx.test.features), ctx.test.target);
        result.durations.augmented_ms = elapsed_ms(t0);
        if (plan.dump_student_history) result.augmented_history = augmented.history;
    }

    result.improvement_pct = improvement_pct(result.p_baseline, result.p_aug);
    return result;
}

struct RunOutput {
    std::vector<TrialResult> trials;
    std::vector<SkippedCell> skipped;
};

/// Executes all (size, trial, cell) combinations. Trials parallelize; every
/// result lands in a preassigned slot so output order never depends on
/// scheduling.
RunOutput run_cells(const ExperimentPlan& plan, const Dataset& full, const std::vector<CellKey>& cells) {
    RunOutput output;
    const std::size_t trials = static_cast<std::size_t>(plan.trials);
    const std::size_t pool = pool_rows(plan, full.n_rows());

    for (const TrainSize& size : plan.train_sizes) {
        const std::size_t resolved = size.resolve(pool);
        if (resolved < 1 || resolved > pool) {
            for (const CellKey& cell : cells) {
                output.skipped.push_back({size.label(), cell.strategy, cell.volume, cell.eta,
                                          "train size " + size.label() + " exceeds the available pool of " +
                                              std::to_string(pool) + " rows"});
            }
            continue;
        }

        std::vector<TrialResult> block(trials * cells.size());
        parallel::parallel_for(trials, [&](std::size_t t) {
            const TrialContext ctx = build_context(plan, full, size, static_cast<int>(t));
            for (std::size_t c = 0; c < cells.size(); ++c) {
                block[t * cells.size() + c] = run_cell(plan, ctx, size, cells[c], static_cast<int>(t));
            }
        });
        output.trials.insert(output.trials.end(), block.begin(), block.end());
    }
    return output;
}

std::vector<double> collect(const std::vector<const TrialResult*>& trials, double TrialResult::* field) {
    std::vector<double> values;
    values.reserve(trials.size());
    for (const TrialResult* t : trials) values.push_back(t->*field);
    return values;
}

double ci_or_zero(const std::vector<double>& values) {
    return values.size() >= 2 ? stats::confidence_half_width(values) : 0.0;
}

std::string eta_text(double eta) { return format_double(eta); }

}  // namespace

std::string PhaseDurations::encode() const {
    char buffer[160];
    std::snprintf(buffer, sizeof(buffer), "split=%.3f;teacher=%.3f;baseline=%.3f;generate=%.3f;augmented=%.3f",
                  split_ms, teacher_ms, baseline_ms, generate_ms, augmented_ms);
    return buffer;
}

std::string ConfigAggregate::label() const {
    return "strategy=" + strategy_name(strategy) + "|train_size=" + train_size_label +
           "|volume=" + std::to_string(volume) + "|eta=" + eta_text(eta);
}

std::string report_mode_name(ReportMode mode) {
    switch (mode) {
        case ReportMode::benchmark: return "benchmark";
        case ReportMode::grid: return "grid";
        case ReportMode::curve: return "curve";
        case ReportMode::distill: return "distill";
    }
    return "unknown";
}

std::string format_double(double value) {
    char buffer[40];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc()) return "nan";
    return std::string(buffer, ptr);
}

TrialResult run_trial(const ExperimentPlan& plan, const Dataset& full_data, const TrialCellSpec& cell,
                      int trial_index) {
    const TrialContext ctx = build_context(plan, full_data, cell.train_size, trial_index);
    return run_cell(plan, ctx, cell.train_size, {cell.strategy, cell.volume, cell.eta}, trial_index);
}

std::vector<ConfigAggregate> aggregate_trials(const std::vector<TrialResult>& trials) {
    // group by configuration, preserving first-appearance order
    std::vector<std::tuple<Strategy, std::string, std::size_t, double>> order;
    std::map<std::tuple<int, std::string, std::size_t, std::uint64_t>, std::vector<const TrialResult*>> groups;
    for (const TrialResult& t : trials) {
        const auto key = std::make_tuple(static_cast<int>(t.strategy), t.train_size_label, t.volume, bits_of(t.eta));
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) order.emplace_back(t.strategy, t.train_size_label, t.volume, t.eta);
        it->second.push_back(&t);
    }

    std::vector<ConfigAggregate> aggregates;
    for (const auto& [strategy, size_label, volume, eta] : order) {
        const auto key = std::make_tuple(static_cast<int>(strategy), size_label, volume, bits_of(eta));
        const auto& members = groups.at(key);
        ConfigAggregate agg;
        agg.strategy = strategy;
        agg.train_size_label = size_label;
        agg.train_size = members.front()->train_size;
        agg.volume = volume;
        agg.eta = eta;
        agg.n_trials = members.size();

        const std::vector<double> improvements = collect(members, &TrialResult::improvement_pct);
        const std::vector<double> baselines = collect(members, &TrialResult::p_baseline);
        const std::vector<double> augs = collect(members, &TrialResult::p_aug);
        const std::vector<double> teachers = collect(members, &TrialResult::teacher_rmse);

        agg.mean_improvement = stats::mean(improvements);
        agg.median_improvement = stats::median(improvements);
        agg.std_improvement = stats::sample_std(improvements);
        agg.ci_improvement = ci_or_zero(improvements);
        agg.mean_p_baseline = stats::mean(baselines);
        agg.median_p_baseline = stats::median(baselines);
        agg.std_p_baseline = stats::sample_std(baselines);
        agg.ci_p_baseline = ci_or_zero(baselines);
        agg.mean_p_aug = stats::mean(augs);
        agg.median_p_aug = stats::median(augs);
        agg.std_p_aug = stats::sample_std(augs);
        agg.ci_p_aug = ci_or_zero(augs);
        agg.mean_teacher_rmse = stats::mean(teachers);
        for (const TrialResult* member : members) {
            bool counted = false;
            for (auto& [choice, count] : agg.teacher_choices) {
                if (choice == member->teacher_summary) {
                    ++count;
                    counted = true;
                }
            }
            if (!counted) agg.teacher_choices.emplace_back(member->teacher_summary, 1);
        }
        aggregates.push_back(std::move(agg));
    }
    return aggregates;
}

namespace {

std::vector<const TrialResult*> config_trials(const std::vector<TrialResult>& trials, Strategy strategy,
                                              const std::string& size_label, std::size_t volume, double eta) {
    std::vector<const TrialResult*> out;
    for (const TrialResult& t : trials) {
        if (t.strategy == strategy && t.train_size_label == size_label && t.volume == volume && t.eta == eta) {
            out.push_back(&t);
        }
    }
    return out;
}

CellKey effective_key(Strategy strategy, std::size_t volume, double eta) {
    if (!strategy_uses_volume(strategy)) return {strategy, 0, 0.0};
    if (!strategy_uses_eta(strategy)) return {strategy, volume, 0.0};
    return {strategy, volume, eta};
}

std::vector<BenchmarkGroup> build_groups(const ExperimentPlan& plan, const std::vector<TrialResult>& trials) {
    const bool any_volume = std::any_of(plan.strategies.begin(), plan.strategies.end(), strategy_uses_volume);
    const bool any_eta = std::any_of(plan.strategies.begin(), plan.strategies.end(), strategy_uses_eta);
    const std::vector<std::size_t> volumes = any_volume ? plan.volumes : std::vector<std::size_t>{0};
    const std::vector<double> etas = any_eta ? plan.etas : std::vector<double>{0.0};

    std::vector<BenchmarkGroup> groups;
    for (const TrainSize& size : plan.train_sizes) {
        for (std::size_t volume : volumes) {
            for (double eta : etas) {
                BenchmarkGroup group;
                group.train_size_label = size.label();
                group.volume = volume;
                group.eta = eta;

                std::vector<std::vector<double>> per_strategy_p_aug;
                for (Strategy s : plan.strategies) {
                    const CellKey key = effective_key(s, volume, eta);
                    const auto members = config_trials(trials, s, size.label(), key.volume, key.eta);
                    if (members.empty()) continue;
                    bool duplicate = false;
                    for (const auto& e : group.entries) duplicate = duplicate || e.strategy == s;
                    if (duplicate) continue;
                    BenchmarkGroup::Entry entry;
                    entry.strategy = s;
                    entry.mean_p_aug = stats::mean(collect(members, &TrialResult::p_aug));
                    group.entries.push_back(entry);
                    per_strategy_p_aug.push_back(collect(members, &TrialResult::p_aug));
                }
                if (group.entries.empty()) continue;

                std::size_t best = 0;
                for (std::size_t i = 1; i < group.entries.size(); ++i) {
                    if (group.entries[i].mean_p_aug < group.entries[best].mean_p_aug) best = i;
                }
                group.entries[best].best = true;
                group.entries[best].p_value_vs_best = 1.0;
                group.best_significant = group.entries.size() > 1;
                for (std::size_t i = 0; i < group.entries.size(); ++i) {
                    if (i == best) continue;
                    double p = 1.0;
                    if (per_strategy_p_aug[i].size() == per_strategy_p_aug[best].size() &&
                        per_strategy_p_aug[i].size() >= 2) {
                        p = stats::paired_t_test_pvalue(per_strategy_p_aug[best], per_strategy_p_aug[i]);
                    }
                    group.entries[i].p_value_vs_best = p;
                    if (!(p < 0.05)) group.best_significant = false;
                }
                groups.push_back(std::move(group));
            }
        }
    }
    return groups;
}

bool cell_was_skipped(const std::vector<SkippedCell>& skipped, const std::string& size_label) {
    for (const SkippedCell& s : skipped) {
        if (s.train_size_label == size_label) return true;
    }
    return false;
}

std::vector<GridTable> build_grid_tables(const ExperimentPlan& plan, const RunOutput& output, double eta) {
    std::vector<GridTable> tables;
    for (Strategy s : plan.strategies) {
        bool duplicate = false;
        for (const GridTable& t : tables) duplicate = duplicate || t.strategy == s;
        if (duplicate) continue;

        GridTable table;
        table.strategy = s;
        for (const TrainSize& size : plan.train_sizes) table.size_labels.push_back(size.label());
        table.volumes = strategy_uses_volume(s) ? plan.volumes : std::vector<std::size_t>{0};

        for (std::size_t volume : table.volumes) {
            for (const TrainSize& size : plan.train_sizes) {
                GridTable::Cell cell;
                const CellKey key = effective_key(s, volume, eta);
                const auto members = config_trials(output.trials, s, size.label(), key.volume, key.eta);
                if (members.empty()) {
                    cell.skipped = true;
                } else {
                    const std::vector<double> improvements = collect(members, &TrialResult::improvement_pct);
                    cell.mean_improvement = stats::mean(improvements);
                    cell.median_improvement = stats::median(improvements);
                    cell.n_trials = members.size();
                }
                table.cells.push_back(cell);
            }
        }
        tables.push_back(std::move(table));
    }
    return tables;
}

}  // namespace

Report run_benchmark(const ExperimentPlan& plan) {
    plan.validate();
    const Dataset full = load_plan_dataset(plan);
    const std::vector<CellKey> cells = enumerate_cells(plan, plan.etas);
    RunOutput output = run_cells(plan, full, cells);

    Report report;
    report.mode = ReportMode::benchmark;
    report.trials = std::move(output.trials);
    report.skipped = std::move(output.skipped);
    report.aggregates = aggregate_trials(report.trials);
    report.groups = build_groups(plan, report.trials);
    return report;
}

Report run_grid(const ExperimentPlan& plan) {
    plan.validate();
    const Dataset full = load_plan_dataset(plan);
    const double eta = plan.etas.front();
    const std::vector<CellKey> cells = enumerate_cells(plan, {eta});
    RunOutput output = run_cells(plan, full, cells);

    Report report;
    report.mode = ReportMode::grid;
    report.grid = build_grid_tables(plan, output, eta);
    report.trials = std::move(output.trials);
    report.skipped = std::move(output.skipped);
    report.aggregates = aggregate_trials(report.trials);
    return report;
}

Report run_learning_curve(const ExperimentPlan& plan) {
    plan.validate();
    if (plan.train_sizes.size() < 2) throw plan_error("learning curve needs at least 2 train sizes");
    ExperimentPlan curve_plan = plan;
    curve_plan.strategies = {Strategy::none};

    const Dataset full = load_plan_dataset(curve_plan);
    const std::vector<CellKey> cells = enumerate_cells(curve_plan, curve_plan.etas);
    RunOutput output = run_cells(curve_plan, full, cells);

    Report report;
    report.mode = ReportMode::curve;
    report.trials = std::move(output.trials);
    report.skipped = std::move(output.skipped);
    report.aggregates = aggregate_trials(report.trials);
    for (const TrainSize& size : curve_plan.train_sizes) {
        if (cell_was_skipped(report.skipped, size.label())) continue;
        const auto members = config_trials(report.trials, Strategy::none, size.label(), 0, 0.0);
        if (members.empty()) continue;
        CurvePoint point;
        point.train_size_label = size.label();
        point.train_size = members.front()->train_size;
        double sum = 0.0;
        for (const TrialResult* t : members) sum += t->p_baseline / t->test_target_std;
        point.mean_nrmse = sum / static_cast<double>(members.size());
        point.n_trials = members.size();
        report.curve.push_back(point);
    }
    return report;
}

Report run_distillation_analysis(const ExperimentPlan& plan) {
    plan.validate();
    bool has_teacher_noise = false;
    for (Strategy s : plan.strategies) has_teacher_noise = has_teacher_noise || s == Strategy::teacher_noise;
    if (!has_teacher_noise) throw plan_error("distillation analysis requires the teacher_noise strategy");

    ExperimentPlan distill_plan = plan;
    distill_plan.strategies = {Strategy::teacher_noise, Strategy::distill_only};
    distill_plan.train_sizes = {plan.train_sizes.front()};
    distill_plan.volumes = {plan.volumes.front()};
    distill_plan.etas = {plan.etas.front()};

    const Dataset full = load_plan_dataset(distill_plan);
    const std::vector<CellKey> cells = enumerate_cells(distill_plan, distill_plan.etas);
    RunOutput output = run_cells(distill_plan, full, cells);

    Report report;
    report.mode = ReportMode::distill;
    report.trials = std::move(output.trials);
    report.skipped = std::move(output.skipped);
    report.aggregates = aggregate_trials(report.trials);

    const auto members = config_trials(report.trials, Strategy::teacher_noise,
                                       distill_plan.train_sizes.front().label(), distill_plan.volumes.front(),
                                       distill_plan.etas.front());
    if (!members.empty()) {
        DistillPoint point;
        double advantage = 0.0;
        double improvement = 0.0;
        for (const TrialResult* t : members) {
            advantage += improvement_pct(t->p_baseline, t->teacher_rmse);
            improvement += t->improvement_pct;
        }
        point.teacher_advantage_pct = advantage / static_cast<double>(members.size());
        point.augmentation_improvement_pct = improvement / static_cast<double>(members.size());
        report.distill.push_back(point);
    }
    return report;
}

namespace {

void write_file_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string trials_csv_text(const Report& report, bool emit_timings) {
    std::ostringstream out;
    out << "seed,train_size,strategy,volume,eta,p_baseline,p_aug,teacher_rmse,improvement_pct,phase_durations_ms\n";
    for (const TrialResult& t : report.trials) {
        out << t.seed << ',' << t.train_size << ',' << strategy_name(t.strategy) << ',' << t.volume << ','
            << format_double(t.eta) << ',' << format_double(t.p_baseline) << ',' << format_double(t.p_aug) << ','
            << format_double(t.teacher_rmse) << ',' << format_double(t.improvement_pct) << ','
            << (emit_timings ? t.durations.encode() : std::string()) << '\n';
    }
    return out.str();
}

nlohmann::ordered_json aggregate_json(const ConfigAggregate& agg) {
    nlohmann::ordered_json j;
    j["strategy"] = strategy_name(agg.strategy);
    j["train_size_label"] = agg.train_size_label;
    j["train_size"] = agg.train_size;
    j["volume"] = agg.volume;
    j["eta"] = agg.eta;
    j["n_trials"] = agg.n_trials;
    j["mean_improvement_pct"] = agg.mean_improvement;
    j["median_improvement_pct"] = agg.median_improvement;
    j["std_improvement_pct"] = agg.std_improvement;
    j["ci95_improvement_pct"] = agg.ci_improvement;
    j["mean_p_baseline"] = agg.mean_p_baseline;
    j["median_p_baseline"] = agg.median_p_baseline;
    j["std_p_baseline"] = agg.std_p_baseline;
    j["ci95_p_baseline"] = agg.ci_p_baseline;
    j["mean_p_aug"] = agg.mean_p_aug;
    j["median_p_aug"] = agg.median_p_aug;
    j["std_p_aug"] = agg.std_p_aug;
    j["ci95_p_aug"] = agg.ci_p_aug;
    j["mean_teacher_rmse"] = agg.mean_teacher_rmse;
    nlohmann::ordered_json choices = nlohmann::ordered_json::object();
    for (const auto& [choice, count] : agg.teacher_choices) choices[choice] = count;
    j["teacher_choices"] = choices;
    return j;
}

std::string summary_json_text(const Report& report) {
    nlohmann::ordered_json j;
    j["mode"] = report_mode_name(report.mode);
    j["n_trials"] = report.trials.size();

    nlohmann::ordered_json configs = nlohmann::ordered_json::object();
    for (const ConfigAggregate& agg : report.aggregates) configs[agg.label()] = aggregate_json(agg);
    j["configs"] = configs;

    if (report.mode == ReportMode::benchmark) {
        nlohmann::ordered_json groups = nlohmann::ordered_json::array();
        for (const BenchmarkGroup& group : report.groups) {
            nlohmann::ordered_json g;
            g["train_size"] = group.train_size_label;
            g["volume"] = group.volume;
            g["eta"] = group.eta;
            g["best_significant"] = group.best_significant;
            nlohmann::ordered_json entries = nlohmann::ordered_json::array();
            for (const auto& entry : group.entries) {
                nlohmann::ordered_json e;
                e["strategy"] = strategy_name(entry.strategy);
                e["mean_p_aug"] = entry.mean_p_aug;
                e["best"] = entry.best;
                e["p_value_vs_best"] = entry.p_value_vs_best;
                entries.push_back(e);
            }
            g["strategies"] = entries;
            groups.push_back(g);
        }
        j["groups"] = groups;
    }

    if (report.mode == ReportMode::grid) {
        nlohmann::ordered_json tables = nlohmann::ordered_json::array();
        for (const GridTable& table : report.grid) {
            nlohmann::ordered_json t;
            t["strategy"] = strategy_name(table.strategy);
            t["train_sizes"] = table.size_labels;
            t["volumes"] = table.volumes;
            nlohmann::ordered_json rows = nlohmann::ordered_json::array();
            for (std::size_t v = 0; v < table.volumes.size(); ++v) {
                nlohmann::ordered_json row = nlohmann::ordered_json::array();
                for (std::size_t s = 0; s < table.size_labels.size(); ++s) {
                    const GridTable::Cell& cell = table.cells[v * table.size_labels.size() + s];
                    nlohmann::ordered_json c;
                    if (cell.skipped) {
                        c["skipped"] = true;
                    } else {
                        c["mean_improvement_pct"] = cell.mean_improvement;
                        c["median_improvement_pct"] = cell.median_improvement;
                        c["n_trials"] = cell.n_trials;
                    }
                    row.push_back(c);
                }
                rows.push_back(row);
            }
            t["cells"] = rows;
            tables.push_back(t);
        }
        j["grid"] = tables;
    }

    if (report.mode == ReportMode::curve) {
        nlohmann::ordered_json points = nlohmann::ordered_json::array();
        for (const CurvePoint& point : report.curve) {
            nlohmann::ordered_json p;
            p["train_size"] = point.train_size_label;
            p["resolved_rows"] = point.train_size;
            p["mean_nrmse"] = point.mean_nrmse;
            p["n_trials"] = point.n_trials;
            points.push_back(p);
        }
        j["curve"] = points;
    }

    if (report.mode == ReportMode::distill) {
        nlohmann::ordered_json points = nlohmann::ordered_json::array();
        for (const DistillPoint& point : report.distill) {
            nlohmann::ordered_json p;
            p["teacher_advantage_pct"] = point.teacher_advantage_pct;
            p["augmentation_improvement_pct"] = point.augmentation_improvement_pct;
            points.push_back(p);
        }
        j["distill"] = points;
    }

    nlohmann::ordered_json skipped = nlohmann::ordered_json::array();
    for (const SkippedCell& s : report.skipped) {
        nlohmann::ordered_json e;
        e["train_size"] = s.train_size_label;
        e["strategy"] = strategy_name(s.strategy);
        e["volume"] = s.volume;
        e["eta"] = s.eta;
        e["reason"] = s.reason;
        skipped.push_back(e);
    }
    j["skipped"] = skipped;

    return j.dump(2) + "\n";
}

std::string pct(double value) {
    char buffer[48];
    std::snprintf(buffer, sizeof(buffer), "%.2f%%", value);
    return buffer;
}

std::string fixed(double value) {
    char buffer[48];
    std::snprintf(buffer, sizeof(buffer), "%.4g", value);
    return buffer;
}

std::string tables_md_text(const Report& report) {
    std::ostringstream md;
    md << "# Experiment report (" << report_mode_name(report.mode) << ")\n\n";

    if (!report.trials.empty()) {
        double total = 0.0;
        for (const TrialResult& t : report.trials) total += t.improvement_pct;
        md << "Mean improvement over all trials (simple mean): " << pct(total / static_cast<double>(report.trials.size()))
           << "\n\n";
    }

    if (report.mode == ReportMode::benchmark) {
        for (const BenchmarkGroup& group : report.groups) {
            md << "## train_size=" << group.train_size_label << ", volume=" << group.volume
               << ", eta=" << format_double(group.eta) << "\n\n";
            md << "| strategy | mean RMSE (aug) | mean improvement | 95% CI (impr) | p vs best |\n";
            md << "|---|---|---|---|---|\n";
            for (const auto& entry : group.entries) {
                const ConfigAggregate* agg = nullptr;
                for (const ConfigAggregate& a : report.aggregates) {
                    const CellKey key = effective_key(entry.strategy, group.volume, group.eta);
                    if (a.strategy == entry.strategy && a.train_size_label == group.train_size_label &&
                        a.volume == key.volume && a.eta == key.eta) {
                        agg = &a;
                        break;
                    }
                }
                const std::string name = strategy_name(entry.strategy);
                md << "| " << (entry.best ? "**" + name + "**" : name) << " | " << fixed(entry.mean_p_aug) << " | ";
                if (agg) {
                    md << pct(agg->mean_improvement) << " | " << pct(agg->ci_improvement) << " | ";
                } else {
                    md << "- | - | ";
                }
                md << (entry.best ? std::string("-") : fixed(entry.p_value_vs_best)) << " |\n";
            }
            md << "\nBest strategy significant vs all alternatives (p < 0.05): "
               << (group.best_significant ? "yes" : "no") << "\n\n";
        }
    }

    if (report.mode == ReportMode::grid) {
        for (const GridTable& table : report.grid) {
            md << "## Improvement grid, strategy=" << strategy_name(table.strategy) << " (mean (median))\n\n";
            md << "| volume \\\\ train size |";
            for (const std::string& label : table.size_labels) md << ' ' << label << " |";
            md << "\n|---|";
            for (std::size_t i = 0; i < table.size_labels.size(); ++i) md << "---|";
            md << '\n';
            for (std::size_t v = 0; v < table.volumes.size(); ++v) {
                md << "| " << table.volumes[v] << " |";
                for (std::size_t s = 0; s < table.size_labels.size(); ++s) {
                    const GridTable::Cell& cell = table.cells[v * table.size_labels.size() + s];
                    if (cell.skipped) {
                        md << " skipped |";
                    } else {
                        md << ' ' << pct(cell.mean_improvement) << " (" << pct(cell.median_improvement) << ") |";
                    }
                }
                md << '\n';
            }
            md << '\n';
        }
    }

    if (report.mode == ReportMode::curve) {
        md << "## Baseline learning curve (NRMSE = RMSE / std(y_test))\n\n";
        md << "| train size | resolved rows | mean NRMSE | trials |\n|---|---|---|---|\n";
        for (const CurvePoint& point : report.curve) {
            md << "| " << point.train_size_label << " | " << point.train_size << " | " << fixed(point.mean_nrmse)
               << " | " << point.n_trials << " |\n";
        }
        md << '\n';
    }

    if (report.mode == ReportMode::distill) {
        md << "## Teacher advantage vs augmentation improvement\n\n";
        md << "| teacher advantage | augmentation improvement |\n|---|---|\n";
        for (const DistillPoint& point : report.distill) {
            md << "| " << pct(point.teacher_advantage_pct) << " | " << pct(point.augmentation_improvement_pct)
               << " |\n";
        }
        md << '\n';
    }

    md << "## Configurations\n\n";
    md << "| configuration | trials | improvement mean (median) | improvement 95% CI | baseline RMSE | augmented RMSE "
          "| teacher RMSE |\n";
    md << "|---|---|---|---|---|---|---|\n";
    for (const ConfigAggregate& agg : report.aggregates) {
        md << "| " << agg.label() << " | " << agg.n_trials << " | " << pct(agg.mean_improvement) << " ("
           << pct(agg.median_improvement) << ") | " << pct(agg.ci_improvement) << " | " << fixed(agg.mean_p_baseline)
           << " | " << fixed(agg.mean_p_aug) << " | " << fixed(agg.mean_teacher_rmse) << " |\n";
    }
    md << '\n';

    if (!report.skipped.empty()) {
        md << "## Skipped cells\n\n";
        for (const SkippedCell& s : report.skipped) {
            md << "- train_size=" << s.train_size_label << ", strategy=" << strategy_name(s.strategy)
               << ", volume=" << s.volume << ", eta=" << format_double(s.eta) << ": " << s.reason << '\n';
        }
        md << '\n';
    }
    return md.str();
}

}  // namespace

void emit_report(const Report& report, const std::filesystem::path& output_dir, bool emit_timings) {
    std::error_code ec;
    fs::create_directories(output_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + output_dir.string() + ": " + ec.message());
    write_file_atomic(output_dir / "trials.csv", trials_csv_text(report, emit_timings));
    write_file_atomic(output_dir / "summary.json", summary_json_text(report));
    write_file_atomic(output_dir / "tables.md", tables_md_text(report));

    bool any_history = false;
    for (const TrialResult& t : report.trials) {
        any_history = any_history || !t.baseline_history.empty() || !t.augmented_history.empty();
    }
    if (any_history) {
        const fs::path history_dir = output_dir / "history";
        fs::create_directories(history_dir, ec);
        if (ec) throw std::runtime_error("cannot create " + history_dir.string() + ": " + ec.message());
        for (const TrialResult& t : report.trials) {
            const std::string trial_tag = "size" + t.train_size_label + "_trial" + std::to_string(t.trial_index);
            if (!t.baseline_history.empty()) {
                // shared across cells of the same (size, trial); the name dedups
                write_file_atomic(history_dir / (trial_tag + "_baseline.csv"), history_csv(t.baseline_history));
            }
            if (!t.augmented_history.empty()) {
                const std::string cell_tag = strategy_name(t.strategy) + "_V" + std::to_string(t.volume) + "_eta" +
                                             format_double(t.eta) + "_" + trial_tag;
                write_file_atomic(history_dir / (cell_tag + "_augmented.csv"), history_csv(t.augmented_history));
            }
        }
    }
}

void write_augmented_csv(const std::filesystem::path& path, const Dataset& train, const SyntheticSet& synth) {
    std::ostringstream out;
    for (const std::string& name : train.feature_names) out << name << ',';
    out << train.target_name << ",provenance\n";
    for (std::size_t r = 0; r < train.n_rows(); ++r) {
        for (double v : train.features.row(r)) out << format_double(v) << ',';
        out << format_double(train.target[r]) << ",\n";
    }
    for (std::size_t r = 0; r < synth.n_rows(); ++r) {
        for (double v : synth.features.row(r)) out << format_double(v) << ',';
        out << format_double(synth.labels[r]) << ',';
        const SyntheticRowOrigin& origin = synth.provenance[r];
        out << origin.source;
        if (origin.is_pair()) out << ';' << origin.partner;
        out << '\n';
    }
    write_file_atomic(path, out.str());
}

}  // namespace augdl
