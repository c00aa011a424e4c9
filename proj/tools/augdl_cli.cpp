#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "augdl/augment.hpp"
#include "augdl/errors.hpp"
#include "augdl/harness.hpp"
#include "augdl/parallel.hpp"
#include "augdl/plan.hpp"
#include "augdl/rng.hpp"

namespace {

struct CliOptions {
    std::string plan_path;
    std::string out_override;
    std::uint64_t seed_override = 0;
    bool seed_set = false;
    int trials_override = 0;
    int jobs = 0;
    bool verbose = false;
};

void add_common_options(CLI::App* cmd, CliOptions& opts, bool trials_flag) {
    cmd->add_option("--plan", opts.plan_path, "experiment plan JSON file")->required();
    cmd->add_option("--out", opts.out_override, "output path override");
    cmd->add_option("--seed", opts.seed_override, "base seed override")->each([&opts](const std::string&) {
        opts.seed_set = true;
    });
    if (trials_flag) cmd->add_option("--trials", opts.trials_override, "trial count override");
    cmd->add_option("--jobs", opts.jobs, "worker thread cap (0 = hardware default)");
    cmd->add_flag("--verbose", opts.verbose, "log progress to stderr");
}

augdl::ExperimentPlan load_with_overrides(const CliOptions& opts) {
    augdl::ExperimentPlan plan = augdl::load_plan(opts.plan_path);
    if (opts.seed_set) plan.base_seed = opts.seed_override;
    if (opts.trials_override > 0) plan.trials = opts.trials_override;
    if (opts.jobs > 0) plan.jobs = opts.jobs;
    if (plan.jobs > 0) augdl::parallel::set_threads(plan.jobs);
    plan.validate();
    return plan;
}

int run_augment(const CliOptions& opts) {
    const augdl::ExperimentPlan plan = load_with_overrides(opts);
    const augdl::Strategy strategy = plan.strategies.front();
    if (strategy == augdl::Strategy::distill_only) {
        throw augdl::plan_error("augment subcommand does not support the distill_only strategy");
    }

    const augdl::Dataset data = augdl::load_plan_dataset(plan);
    if (opts.verbose) {
        std::cerr << "loaded " << data.n_rows() << " rows x " << data.n_features() << " features\n";
    }

    augdl::AugmentationConfig config;
    config.strategy = strategy;
    config.volume = plan.volumes.front();
    config.noise_fraction = plan.etas.front();
    config.noise_center_mode = plan.noise_center_mode;
    config.mixup_alpha = plan.mixup_alpha;
    config.cmixup_bandwidth = plan.cmixup_bandwidth;
    config.seed = augdl::derive_seed(plan.base_seed, 0xA6);

    augdl::SyntheticSet synth;
    switch (strategy) {
        case augdl::Strategy::teacher_noise: {
            augdl::TeacherSpec teacher_spec = plan.teacher;
            teacher_spec.seed = augdl::derive_seed(plan.base_seed, 0xA7);
            if (opts.verbose) std::cerr << "fitting teacher on the full dataset\n";
            const augdl::TrainedTeacher teacher = augdl::fit_teacher(data, teacher_spec);
            if (opts.verbose) {
                std::cerr << "teacher: " << augdl::teacher_candidate_name(teacher.chosen) << " ("
                          << teacher.hyperparams << "), cv_rmse=" << teacher.cv_rmse << "\n";
            }
            const augdl::ColumnStats stats = augdl::compute_column_stats(data);
            synth = augdl::generate_teacher_noise(data, stats, config, teacher);
            break;
        }
        case augdl::Strategy::naive_noise:
            synth = augdl::generate_naive_noise(data, augdl::compute_column_stats(data), config);
            break;
        case augdl::Strategy::mixup:
            synth = augdl::generate_mixup(data, config);
            break;
        case augdl::Strategy::cmixup:
            synth = augdl::generate_cmixup(data, config);
            break;
        case augdl::Strategy::none:
            synth.features = augdl::Matrix(0, data.n_features());
            break;
        default:
            throw augdl::plan_error("augment: unsupported strategy");
    }

    std::filesystem::path out = opts.out_override.empty()
                                    ? std::filesystem::path(plan.output_dir) / "augmented.csv"
                                    : std::filesystem::path(opts.out_override);
    if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
    augdl::write_augmented_csv(out, data, synth);
    std::cout << "wrote " << (data.n_rows() + synth.n_rows()) << " rows to " << out.string() << "\n";
    return 0;
}

int run_experiment(const CliOptions& opts, const std::string& mode) {
    augdl::ExperimentPlan plan = load_with_overrides(opts);
    if (!opts.out_override.empty()) plan.output_dir = opts.out_override;

    if (opts.verbose) {
        std::cerr << "running " << mode << " with " << plan.trials << " trials, base_seed=" << plan.base_seed << "\n";
    }
    augdl::Report report;
    if (mode == "benchmark") {
        report = augdl::run_benchmark(plan);
    } else if (mode == "grid") {
        report = augdl::run_grid(plan);
    } else if (mode == "curve") {
        report = augdl::run_learning_curve(plan);
    } else {
        report = augdl::run_distillation_analysis(plan);
    }
    augdl::emit_report(report, plan.output_dir, plan.emit_timings);
    std::cout << "wrote " << report.trials.size() << " trial results to " << plan.output_dir << "\n";
    if (opts.verbose) {
        for (const augdl::ConfigAggregate& agg : report.aggregates) {
            std::cerr << agg.label() << ": mean improvement " << agg.mean_improvement << "%\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Tabular regression data augmentation toolkit.\n"
        "Exit codes: 0 ok, 2 usage error, 3 plan error, 4 data error, 5 runtime error."};
    app.require_subcommand(1);

    CliOptions opts;
    CLI::App* augment = app.add_subcommand("augment", "emit an augmented copy of a dataset as CSV");
    add_common_options(augment, opts, false);
    CLI::App* benchmark = app.add_subcommand("benchmark", "compare augmentation strategies");
    add_common_options(benchmark, opts, true);
    CLI::App* grid = app.add_subcommand("grid", "improvement as a function of train size and volume");
    add_common_options(grid, opts, true);
    CLI::App* curve = app.add_subcommand("curve", "baseline learning curve over train sizes");
    add_common_options(curve, opts, true);
    CLI::App* distill = app.add_subcommand("distill", "augmentation vs knowledge-distillation analysis");
    add_common_options(distill, opts, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (augment->parsed()) return run_augment(opts);
        if (benchmark->parsed()) return run_experiment(opts, "benchmark");
        if (grid->parsed()) return run_experiment(opts, "grid");
        if (curve->parsed()) return run_experiment(opts, "curve");
        return run_experiment(opts, "distill");
    } catch (const augdl::plan_error& e) {
        std::cerr << "plan error: " << e.what() << "\n";
        return 3;
    } catch (const augdl::data_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    }
}
