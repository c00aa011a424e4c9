#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "augdl/plan.hpp"

namespace augdl {

struct PhaseDurations {
    double split_ms = 0.0;
    double teacher_ms = 0.0;
    double baseline_ms = 0.0;
    double generate_ms = 0.0;
    double augmented_ms = 0.0;
    std::string encode() const;
};

/// One execution of the full pipeline for one grid cell and one seed.
struct TrialResult {
    std::uint64_t seed = 0;  // base_seed + trial index
    int trial_index = 0;
    std::string train_size_label;
    std::size_t train_size = 0;  // resolved row count
    Strategy strategy = Strategy::none;
    std::size_t volume = 0;
    double eta = 0.0;
    double p_baseline = 0.0;
    double p_aug = 0.0;
    double teacher_rmse = 0.0;
    double improvement_pct = 0.0;
    double test_target_std = 0.0;       // normalizer for NRMSE; not part of trials.csv
    std::string teacher_summary;        // chosen candidate and hyperparameters
    PhaseDurations durations;
    // filled only when the plan sets dump_student_history
    std::vector<EpochStats> baseline_history;
    std::vector<EpochStats> augmented_history;
};

/// Per-configuration aggregate over trials.
struct ConfigAggregate {
    Strategy strategy = Strategy::none;
    std::string train_size_label;
    std::size_t train_size = 0;
    std::size_t volume = 0;
    double eta = 0.0;
    std::size_t n_trials = 0;
    double mean_improvement = 0.0, median_improvement = 0.0, std_improvement = 0.0, ci_improvement = 0.0;
    double mean_p_baseline = 0.0, median_p_baseline = 0.0, std_p_baseline = 0.0, ci_p_baseline = 0.0;
    double mean_p_aug = 0.0, median_p_aug = 0.0, std_p_aug = 0.0, ci_p_aug = 0.0;
    double mean_teacher_rmse = 0.0;
    /// chosen teacher summary -> how many of the trials picked it
    std::vector<std::pair<std::string, std::size_t>> teacher_choices;
    std::string label() const;
};

/// Benchmark-mode strategy comparison within one (train size, volume, eta)
/// setting: best strategy by mean augmented RMSE plus paired t-tests of the
/// best against every alternative.
struct BenchmarkGroup {
    std::string train_size_label;
    std::size_t volume = 0;
    double eta = 0.0;
    struct Entry {
        Strategy strategy = Strategy::none;
        double mean_p_aug = 0.0;
        double p_value_vs_best = 1.0;
        bool best = false;
    };
    std::vector<Entry> entries;
    bool best_significant = false;  // best beats every alternative at p < 0.05
};

struct GridTable {
    Strategy strategy = Strategy::none;
    std::vector<std::string> size_labels;    // columns
    std::vector<std::size_t> volumes;        // rows
    struct Cell {
        double mean_improvement = 0.0;
        double median_improvement = 0.0;
        std::size_t n_trials = 0;
        bool skipped = false;
    };
    std::vector<Cell> cells;  // row-major volumes x size_labels
};

struct CurvePoint {
    std::string train_size_label;
    std::size_t train_size = 0;
    double mean_nrmse = 0.0;
    std::size_t n_trials = 0;
};

struct DistillPoint {
    double teacher_advantage_pct = 0.0;       // improvement of teacher over baseline student
    double augmentation_improvement_pct = 0.0;  // mean teacher_noise improvement
};

struct SkippedCell {
    std::string train_size_label;
    Strategy strategy = Strategy::none;
    std::size_t volume = 0;
    double eta = 0.0;
    std::string reason;
};

enum class ReportMode { benchmark, grid, curve, distill };
std::string report_mode_name(ReportMode mode);

struct Report {
    ReportMode mode = ReportMode::benchmark;
    std::vector<TrialResult> trials;
    std::vector<ConfigAggregate> aggregates;
    std::vector<BenchmarkGroup> groups;     // benchmark mode
    std::vector<GridTable> grid;            // grid mode
    std::vector<CurvePoint> curve;          // curve mode
    std::vector<DistillPoint> distill;      // distill mode
    std::vector<SkippedCell> skipped;
};

/// One cell of the experiment grid.
struct TrialCellSpec {
    TrainSize train_size;
    Strategy strategy = Strategy::none;
    std::size_t volume = 0;
    double eta = 0.0;
};

/// Runs split -> subsample -> teacher -> baseline student -> augmentation ->
/// augmented student for a single cell and seed. Baseline and augmented
/// students share spec and seed, so the training data is the only difference.
TrialResult run_trial(const ExperimentPlan& plan, const Dataset& full_data, const TrialCellSpec& cell,
                      int trial_index);

Report run_benchmark(const ExperimentPlan& plan);
Report run_grid(const ExperimentPlan& plan);
Report run_learning_curve(const ExperimentPlan& plan);
Report run_distillation_analysis(const ExperimentPlan& plan);

/// Aggregates a trial table per configuration. Exposed for oracle tests.
std::vector<ConfigAggregate> aggregate_trials(const std::vector<TrialResult>& trials);

/// Writes trials.csv, summary.json, and tables.md (plus timings.csv when
/// requested) into output_dir. Files are written to a temp name and renamed,
/// so failures leave no partial outputs. Byte-identical for identical
/// reports.
void emit_report(const Report& report, const std::filesystem::path& output_dir, bool emit_timings = false);

/// Shortest round-trip decimal rendering used across all emitted files.
std::string format_double(double value);

/// Writes train + synthetic rows as CSV with a trailing provenance column
/// ("i" or "i;j" source row indices; empty for original rows).
void write_augmented_csv(const std::filesystem::path& path, const Dataset& train, const SyntheticSet& synth);

}  // namespace augdl
