#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "augdl/errors.hpp"
#include "augdl/harness.hpp"
#include "augdl/parallel.hpp"
#include "augdl/stats.hpp"

using namespace augdl;
namespace fs = std::filesystem;

namespace {

ExperimentPlan tiny_plan() {
    ExperimentPlan plan;
    GeneratorSpec gen;
    gen.kind = GeneratorSpec::Kind::linear;
    gen.coefficients = {2.0, -1.0};
    gen.n_rows = 120;
    gen.noise_sd = 0.2;
    gen.seed = 77;
    plan.generator = gen;
    plan.strategies = {Strategy::none, Strategy::teacher_noise, Strategy::mixup};
    plan.train_sizes = {TrainSize::absolute(40)};
    plan.volumes = {25};
    plan.etas = {0.05};
    plan.trials = 2;
    plan.base_seed = 9;
    plan.teacher.candidates = {TeacherCandidate::ridge};
    plan.teacher.cv_folds = 3;
    plan.student.architectures = {{6}};
    plan.student.max_epochs = 6;
    plan.student.batch_size = 16;
    plan.student.patience = 3;
    return plan;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

bool same_result(const TrialResult& a, const TrialResult& b) {
    return a.seed == b.seed && a.train_size == b.train_size && a.strategy == b.strategy && a.volume == b.volume &&
           a.eta == b.eta && a.p_baseline == b.p_baseline && a.p_aug == b.p_aug && a.teacher_rmse == b.teacher_rmse &&
           a.improvement_pct == b.improvement_pct;
}

}  // namespace

TEST_CASE("plan JSON parsing") {
    const std::string text = R"({
        "dataset": {"generator": {"kind": "friedman1", "n_rows": 500, "noise_sd": 1.0, "seed": 3}},
        "strategies": ["teacher_noise", "naive_noise"],
        "volumes": [100, 200],
        "train_sizes": [50, "80%", "50000_or_80%"],
        "etas": [0.05, 0.1],
        "trials": 4,
        "base_seed": 42,
        "augmentation": {"noise_center_mode": "column_mean", "mixup_alpha": 0.4},
        "teacher": {"candidates": ["ridge", "knn"], "cv_folds": 3, "forest": {"n_trees": 10, "min_leaf": [2]}},
        "student": {"architectures": [[8], [4, 2]], "activation": "tanh", "max_epochs": 7},
        "output_dir": "results"
    })";
    const ExperimentPlan plan = parse_plan(text);
    CHECK(plan.generator.has_value());
    CHECK(plan.generator->n_rows == 500);
    CHECK(plan.strategies == std::vector<Strategy>{Strategy::teacher_noise, Strategy::naive_noise});
    CHECK(plan.volumes == std::vector<std::size_t>{100, 200});
    REQUIRE(plan.train_sizes.size() == 3);
    CHECK(plan.train_sizes[0].kind == TrainSize::Kind::absolute);
    CHECK(plan.train_sizes[0].count == 50);
    CHECK(plan.train_sizes[1].kind == TrainSize::Kind::pool);
    CHECK(plan.train_sizes[2].kind == TrainSize::Kind::capped_pool);
    CHECK(plan.etas == std::vector<double>{0.05, 0.1});
    CHECK(plan.trials == 4);
    CHECK(plan.base_seed == 42);
    CHECK(plan.noise_center_mode == NoiseCenterMode::column_mean);
    CHECK(plan.mixup_alpha == 0.4);
    CHECK(plan.teacher.candidates == std::vector<TeacherCandidate>{TeacherCandidate::ridge, TeacherCandidate::knn});
    CHECK(plan.teacher.cv_folds == 3);
    CHECK(plan.teacher.forest_n_trees == 10);
    CHECK(plan.student.activation == StudentSpec::Activation::tanh);
    CHECK(plan.student.max_epochs == 7);
    CHECK(plan.output_dir == "results");
}

TEST_CASE("plan parsing rejects malformed input") {
    CHECK_THROWS_AS(parse_plan("not json at all"), plan_error);
    CHECK_THROWS_AS(parse_plan("{}"), plan_error);  // dataset missing
    CHECK_THROWS_AS(parse_plan(R"({"dataset": {"generator": {"kind": "friedman1"}}, "strategies": []})"),
                    plan_error);
    CHECK_THROWS_AS(parse_plan(R"({"dataset": {"generator": {"kind": "friedman1"}},
                                   "strategies": ["teacher_noise"], "typo_key": 1})"),
                    plan_error);
    CHECK_THROWS_AS(parse_plan(R"({"dataset": {"generator": {"kind": "friedman1"}},
                                   "strategies": ["warp_drive"]})"),
                    plan_error);
    CHECK_THROWS_AS(parse_plan(R"({"dataset": {"generator": {"kind": "friedman1"}},
                                   "strategies": ["none"], "train_sizes": ["25%"]})"),
                    plan_error);
    // both csv_path and generator
    CHECK_THROWS_AS(parse_plan(R"({"dataset": {"csv_path": "x.csv", "target": "y",
                                   "generator": {"kind": "friedman1"}},
                                   "strategies": ["none"]})"),
                    plan_error);
}

TEST_CASE("the documented size/volume grids load from a plan unchanged") {
    const std::string text = R"({
        "dataset": {"generator": {"kind": "friedman1", "n_rows": 100000, "noise_sd": 1.0, "seed": 1}},
        "strategies": ["teacher_noise"],
        "volumes": [500, 1000, 5000, 10000, 50000],
        "train_sizes": [500, 1000, 5000, 10000, "50000_or_80%"],
        "etas": [0.01, 0.05, 0.1]
    })";
    const ExperimentPlan plan = parse_plan(text);
    CHECK(plan.volumes == std::vector<std::size_t>{500, 1000, 5000, 10000, 50000});
    REQUIRE(plan.train_sizes.size() == 5);
    CHECK(plan.train_sizes[3].count == 10000);
    CHECK(plan.train_sizes[4].kind == TrainSize::Kind::capped_pool);
    CHECK(plan.etas == std::vector<double>{0.01, 0.05, 0.1});
    CHECK(plan.trials == 10);                 // repetition default
    CHECK(plan.test_fraction == 0.2);         // split default
}

TEST_CASE("TrainSize resolution") {
    CHECK(TrainSize::absolute(500).resolve(4000) == 500);
    CHECK(TrainSize::pool().resolve(4000) == 4000);
    CHECK(TrainSize::capped_pool().resolve(4000) == 4000);
    CHECK(TrainSize::capped_pool().resolve(80000) == 50000);
    CHECK(TrainSize::absolute(500).label() == "500");
    CHECK(TrainSize::pool().label() == "80%");
    CHECK(TrainSize::capped_pool().label() == "50000_or_80%");
}

TEST_CASE("run_benchmark: tiny end-to-end run") {
    const ExperimentPlan plan = tiny_plan();
    const Report report = run_benchmark(plan);

    // 3 effective cells (none collapses volume/eta; mixup collapses eta) x 2 trials
    REQUIRE(report.trials.size() == 6);
    CHECK(report.skipped.empty());

    for (const TrialResult& t : report.trials) {
        CHECK(t.train_size == 40);
        CHECK(t.p_baseline > 0.0);
        CHECK(std::isfinite(t.teacher_rmse));
        // improvement self-consistency
        CHECK(std::abs(t.improvement_pct - improvement_pct(t.p_baseline, t.p_aug)) <= 1e-12);
        if (t.strategy == Strategy::none) {
            CHECK(t.p_aug == t.p_baseline);  // exact identity
            CHECK(t.improvement_pct == 0.0);
            CHECK(t.volume == 0);
            CHECK(t.eta == 0.0);
        }
    }

    // trial seeds follow base_seed + i
    CHECK(report.trials.front().seed == 9);

    // one comparison group holding all three strategies
    REQUIRE(report.groups.size() == 1);
    CHECK(report.groups[0].entries.size() == 3);
    int best_count = 0;
    for (const auto& entry : report.groups[0].entries) {
        best_count += entry.best ? 1 : 0;
        CHECK(entry.p_value_vs_best >= 0.0);
        CHECK(entry.p_value_vs_best <= 1.0);
    }
    CHECK(best_count == 1);

    CHECK(report.aggregates.size() == 3);
}

TEST_CASE("run_benchmark is deterministic and stable under added trials") {
    const ExperimentPlan plan = tiny_plan();
    const Report a = run_benchmark(plan);
    const Report b = run_benchmark(plan);
    REQUIRE(a.trials.size() == b.trials.size());
    for (std::size_t i = 0; i < a.trials.size(); ++i) CHECK(same_result(a.trials[i], b.trials[i]));

    ExperimentPlan more = plan;
    more.trials = 3;
    const Report c = run_benchmark(more);
    // earlier trials unchanged when the trial count grows
    for (const TrialResult& t : a.trials) {
        bool found = false;
        for (const TrialResult& u : c.trials) {
            if (u.trial_index == t.trial_index && u.strategy == t.strategy && u.volume == t.volume &&
                u.eta == t.eta) {
                found = true;
                CHECK(same_result(t, u));
            }
        }
        CHECK(found);
    }
}

TEST_CASE("benchmark with only the none strategy reduces to a baseline column") {
    ExperimentPlan plan = tiny_plan();
    plan.strategies = {Strategy::none};
    const Report report = run_benchmark(plan);
    REQUIRE(report.trials.size() == 2);  // one cell, two trials
    for (const TrialResult& t : report.trials) {
        CHECK(t.strategy == Strategy::none);
        CHECK(t.p_aug == t.p_baseline);
    }
    REQUIRE(report.groups.size() == 1);  // volume/eta axes collapse without dependent strategies
    REQUIRE(report.groups[0].entries.size() == 1);
    CHECK(report.groups[0].entries[0].strategy == Strategy::none);
    CHECK(report.groups[0].entries[0].best);
    CHECK_FALSE(report.groups[0].best_significant);
}

TEST_CASE("run_trial reproduces the benchmark row for the same cell") {
    const ExperimentPlan plan = tiny_plan();
    const Report report = run_benchmark(plan);
    const Dataset full = load_plan_dataset(plan);

    TrialCellSpec cell;
    cell.train_size = plan.train_sizes[0];
    cell.strategy = Strategy::teacher_noise;
    cell.volume = 25;
    cell.eta = 0.05;
    const TrialResult direct = run_trial(plan, full, cell, 1);

    bool matched = false;
    for (const TrialResult& t : report.trials) {
        if (t.strategy == Strategy::teacher_noise && t.trial_index == 1) {
            matched = true;
            CHECK(same_result(t, direct));
        }
    }
    CHECK(matched);
}

TEST_CASE("infeasible train sizes are recorded as skipped") {
    ExperimentPlan plan = tiny_plan();
    plan.train_sizes = {TrainSize::absolute(40), TrainSize::absolute(5000)};  // pool is 96
    const Report report = run_benchmark(plan);
    CHECK(report.trials.size() == 6);       // only the feasible size ran
    CHECK(report.skipped.size() == 3);      // one entry per cell of the infeasible size
    for (const SkippedCell& s : report.skipped) {
        CHECK(s.train_size_label == "5000");
        CHECK(s.reason.find("exceeds") != std::string::npos);
    }
}

TEST_CASE("aggregate_trials matches hand computation on a 3x2 trial table") {
    std::vector<TrialResult> trials(6);
    for (int i = 0; i < 6; ++i) {
        trials[i].seed = 100 + static_cast<std::uint64_t>(i % 3);
        trials[i].trial_index = i % 3;
        trials[i].train_size_label = "500";
        trials[i].train_size = 500;
        trials[i].strategy = i < 3 ? Strategy::teacher_noise : Strategy::naive_noise;
        trials[i].volume = 10;
        trials[i].eta = 0.05;
    }
    trials[0].improvement_pct = 10.0;
    trials[1].improvement_pct = 20.0;
    trials[2].improvement_pct = 60.0;
    trials[0].p_baseline = 2.0;
    trials[1].p_baseline = 4.0;
    trials[2].p_baseline = 6.0;
    trials[0].p_aug = 1.8;
    trials[1].p_aug = 3.2;
    trials[2].p_aug = 2.4;
    trials[0].teacher_rmse = 1.0;
    trials[1].teacher_rmse = 2.0;
    trials[2].teacher_rmse = 3.0;
    trials[3].improvement_pct = -5.0;
    trials[4].improvement_pct = 5.0;
    trials[5].improvement_pct = 3.0;

    const std::vector<ConfigAggregate> aggregates = aggregate_trials(trials);
    REQUIRE(aggregates.size() == 2);
    CHECK(aggregates[1].strategy == Strategy::naive_noise);
    CHECK(aggregates[1].n_trials == 3);
    CHECK(aggregates[1].mean_improvement == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(aggregates[1].median_improvement == 3.0);
    const ConfigAggregate& agg = aggregates.front();
    CHECK(agg.n_trials == 3);
    CHECK(agg.mean_improvement == doctest::Approx(30.0).epsilon(1e-14));
    CHECK(agg.median_improvement == 20.0);
    // sample std of {10,20,60} = sqrt(700)
    CHECK(agg.std_improvement == doctest::Approx(std::sqrt(700.0)).epsilon(1e-12));
    // CI with t_{0.975,2} = 4.302652729749464 (40-digit arithmetic)
    CHECK(agg.ci_improvement ==
          doctest::Approx(4.302652729749464 * std::sqrt(700.0) / std::sqrt(3.0)).epsilon(1e-12));
    CHECK(agg.mean_p_baseline == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(agg.median_p_baseline == 4.0);
    CHECK(agg.mean_p_aug == doctest::Approx((1.8 + 3.2 + 2.4) / 3.0).epsilon(1e-14));
    CHECK(agg.median_p_aug == 2.4);
    CHECK(agg.mean_teacher_rmse == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("emit_report: empty report produces valid header-only files") {
    const fs::path dir = fs::temp_directory_path() / "augdl_empty_report";
    fs::remove_all(dir);
    Report report;
    emit_report(report, dir);
    const std::string csv = read_file(dir / "trials.csv");
    CHECK(csv == "seed,train_size,strategy,volume,eta,p_baseline,p_aug,teacher_rmse,improvement_pct,phase_durations_ms\n");
    CHECK(fs::exists(dir / "summary.json"));
    CHECK(fs::exists(dir / "tables.md"));
    const auto parsed = nlohmann::json::parse(read_file(dir / "summary.json"));
    CHECK(parsed.at("n_trials") == 0);
    fs::remove_all(dir);
}

TEST_CASE("emit_report: byte-identical on rerun; summary agrees with an independent pass over trials.csv") {
    const ExperimentPlan plan = tiny_plan();
    const Report report = run_benchmark(plan);

    const fs::path dir = fs::temp_directory_path() / "augdl_report_a";
    const fs::path dir2 = fs::temp_directory_path() / "augdl_report_b";
    fs::remove_all(dir);
    fs::remove_all(dir2);
    emit_report(report, dir);
    emit_report(report, dir2);
    CHECK(read_file(dir / "trials.csv") == read_file(dir2 / "trials.csv"));
    CHECK(read_file(dir / "summary.json") == read_file(dir2 / "summary.json"));
    CHECK(read_file(dir / "tables.md") == read_file(dir2 / "tables.md"));

    // independent aggregation from the CSV text
    std::istringstream csv(read_file(dir / "trials.csv"));
    std::string line;
    std::getline(csv, line);  // header
    struct Row {
        std::string strategy;
        std::size_t volume;
        double eta, p_baseline, p_aug, improvement;
    };
    std::vector<Row> rows;
    while (std::getline(csv, line)) {
        std::stringstream ss(line);
        std::string field;
        Row row;
        std::getline(ss, field, ',');  // seed
        std::getline(ss, field, ',');  // train_size
        std::getline(ss, row.strategy, ',');
        std::getline(ss, field, ',');
        row.volume = std::stoull(field);
        std::getline(ss, field, ',');
        row.eta = std::stod(field);
        std::getline(ss, field, ',');
        row.p_baseline = std::stod(field);
        std::getline(ss, field, ',');
        row.p_aug = std::stod(field);
        std::getline(ss, field, ',');  // teacher_rmse
        std::getline(ss, field, ',');
        row.improvement = std::stod(field);
        rows.push_back(row);
    }
    REQUIRE(rows.size() == report.trials.size());

    const auto summary = nlohmann::json::parse(read_file(dir / "summary.json"));
    for (const auto& [label, agg] : summary.at("configs").items()) {
        const std::string strategy = agg.at("strategy").get<std::string>();
        const std::size_t volume = agg.at("volume").get<std::size_t>();
        const double eta = agg.at("eta").get<double>();
        double sum = 0.0;
        std::size_t n = 0;
        for (const Row& row : rows) {
            if (row.strategy == strategy && row.volume == volume && row.eta == eta) {
                sum += row.improvement;
                ++n;
            }
        }
        REQUIRE(n == agg.at("n_trials").get<std::size_t>());
        CHECK(std::abs(agg.at("mean_improvement_pct").get<double>() - sum / static_cast<double>(n)) <= 1e-10);
    }
    fs::remove_all(dir);
    fs::remove_all(dir2);
}

TEST_CASE("run_learning_curve") {
    ExperimentPlan plan = tiny_plan();
    plan.train_sizes = {TrainSize::absolute(30), TrainSize::absolute(60)};
    plan.strategies = {Strategy::teacher_noise};  // curve mode forces baseline-only internally
    const Report report = run_learning_curve(plan);
    REQUIRE(report.curve.size() == 2);
    CHECK(report.curve[0].train_size == 30);
    CHECK(report.curve[1].train_size == 60);

    for (const CurvePoint& point : report.curve) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const TrialResult& t : report.trials) {
            if (t.train_size == point.train_size) {
                CHECK(t.strategy == Strategy::none);
                sum += t.p_baseline / t.test_target_std;
                ++n;
            }
        }
        CHECK(point.n_trials == n);
        CHECK(point.mean_nrmse == doctest::Approx(sum / static_cast<double>(n)).epsilon(1e-14));
    }

    ExperimentPlan bad = plan;
    bad.train_sizes = {TrainSize::absolute(30)};
    CHECK_THROWS_AS(run_learning_curve(bad), plan_error);
}

TEST_CASE("run_grid: cells match the aggregates") {
    ExperimentPlan plan = tiny_plan();
    plan.strategies = {Strategy::teacher_noise};
    plan.volumes = {10, 40};
    const Report report = run_grid(plan);
    REQUIRE(report.grid.size() == 1);
    const GridTable& table = report.grid.front();
    CHECK(table.strategy == Strategy::teacher_noise);
    REQUIRE(table.volumes == std::vector<std::size_t>{10, 40});
    REQUIRE(table.size_labels == std::vector<std::string>{"40"});
    REQUIRE(table.cells.size() == 2);

    for (std::size_t v = 0; v < 2; ++v) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const TrialResult& t : report.trials) {
            if (t.volume == table.volumes[v]) {
                sum += t.improvement_pct;
                ++n;
            }
        }
        CHECK(table.cells[v].n_trials == n);
        CHECK(table.cells[v].mean_improvement == doctest::Approx(sum / static_cast<double>(n)).epsilon(1e-14));
    }
}

TEST_CASE("run_distillation_analysis") {
    ExperimentPlan plan = tiny_plan();
    plan.strategies = {Strategy::teacher_noise};
    const Report report = run_distillation_analysis(plan);

    // teacher_noise cells plus the distillation-only control column
    bool has_distill_only = false;
    for (const ConfigAggregate& agg : report.aggregates) {
        has_distill_only = has_distill_only || agg.strategy == Strategy::distill_only;
    }
    CHECK(has_distill_only);

    REQUIRE(report.distill.size() == 1);  // one dataset, one scatter point
    double advantage = 0.0, improvement = 0.0;
    std::size_t n = 0;
    for (const TrialResult& t : report.trials) {
        if (t.strategy != Strategy::teacher_noise) continue;
        advantage += improvement_pct(t.p_baseline, t.teacher_rmse);
        improvement += t.improvement_pct;
        ++n;
    }
    REQUIRE(n > 0);
    CHECK(report.distill[0].teacher_advantage_pct == doctest::Approx(advantage / n).epsilon(1e-12));
    CHECK(report.distill[0].augmentation_improvement_pct == doctest::Approx(improvement / n).epsilon(1e-12));

    ExperimentPlan bad = plan;
    bad.strategies = {Strategy::mixup};
    CHECK_THROWS_AS(run_distillation_analysis(bad), plan_error);
}

TEST_CASE("jobs invariance: serial and openmp trial execution agree") {
    const ExperimentPlan plan = tiny_plan();
    const auto saved = parallel::mode();
    parallel::set_mode(parallel::ExecMode::serial);
    const Report serial = run_benchmark(plan);
    parallel::set_mode(parallel::ExecMode::openmp);
    const Report omp = run_benchmark(plan);
    parallel::set_mode(saved);

    REQUIRE(serial.trials.size() == omp.trials.size());
    for (std::size_t i = 0; i < serial.trials.size(); ++i) CHECK(same_result(serial.trials[i], omp.trials[i]));
}

TEST_CASE("teacher choices are reported per configuration") {
    const ExperimentPlan plan = tiny_plan();
    const Report report = run_benchmark(plan);
    for (const TrialResult& t : report.trials) {
        CHECK(t.teacher_summary.find("ridge") == 0);  // only candidate in the tiny plan
    }
    for (const ConfigAggregate& agg : report.aggregates) {
        std::size_t total = 0;
        for (const auto& [choice, count] : agg.teacher_choices) total += count;
        CHECK(total == agg.n_trials);
    }
    const fs::path dir = fs::temp_directory_path() / "augdl_teacher_choice";
    fs::remove_all(dir);
    emit_report(report, dir);
    CHECK(read_file(dir / "summary.json").find("teacher_choices") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("dump_student_history writes per-trial training curves") {
    ExperimentPlan plan = tiny_plan();
    plan.dump_student_history = true;
    const Report report = run_benchmark(plan);

    const fs::path dir = fs::temp_directory_path() / "augdl_history_dump";
    fs::remove_all(dir);
    emit_report(report, dir);
    REQUIRE(fs::exists(dir / "history"));

    // baseline curve shared per (size, trial); augmented per cell
    const fs::path baseline = dir / "history" / "size40_trial0_baseline.csv";
    REQUIRE(fs::exists(baseline));
    std::istringstream csv(read_file(baseline));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "epoch,train_rmse,val_rmse");
    std::size_t rows = 0;
    while (std::getline(csv, line)) ++rows;
    bool found = false;
    for (const TrialResult& t : report.trials) {
        if (t.trial_index == 0 && !t.baseline_history.empty()) {
            CHECK(rows == t.baseline_history.size());
            found = true;
            break;
        }
    }
    CHECK(found);
    CHECK(fs::exists(dir / "history" / "teacher_noise_V25_eta0.05_size40_trial0_augmented.csv"));
    fs::remove_all(dir);

    // disabled by default: no history directory appears
    const Report plain = run_benchmark(tiny_plan());
    const fs::path dir2 = fs::temp_directory_path() / "augdl_history_off";
    fs::remove_all(dir2);
    emit_report(plain, dir2);
    CHECK_FALSE(fs::exists(dir2 / "history"));
    fs::remove_all(dir2);
}

TEST_CASE("write_augmented_csv formats provenance correctly") {
    Dataset train;
    train.features = Matrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    train.target = {5.0, 6.0};
    train.feature_names = {"a", "b"};
    train.target_name = "y";

    SyntheticSet synth;
    synth.features = Matrix::from_rows({{1.5, 2.5}});
    synth.labels = {5.5};
    synth.provenance = {{0, 1, 0.5}};

    const fs::path path = fs::temp_directory_path() / "augdl_aug.csv";
    write_augmented_csv(path, train, synth);
    std::istringstream csv(read_file(path));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "a,b,y,provenance");
    std::getline(csv, line);
    CHECK(line == "1,2,5,");
    std::getline(csv, line);
    CHECK(line == "3,4,6,");
    std::getline(csv, line);
    CHECK(line == "1.5,2.5,5.5,0;1");
    fs::remove(path);
}
