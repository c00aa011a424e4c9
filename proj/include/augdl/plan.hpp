#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "augdl/augment.hpp"
#include "augdl/datagen.hpp"
#include "augdl/dataset.hpp"
#include "augdl/student.hpp"
#include "augdl/teacher.hpp"

namespace augdl {

/// A requested training-set size: an absolute row count, the full train pool
/// ("80%"), or the pool capped at 50000 rows ("50000_or_80%").
struct TrainSize {
    enum class Kind { absolute, pool, capped_pool };
    Kind kind = Kind::absolute;
    std::size_t count = 0;

    static TrainSize absolute(std::size_t n) { return {Kind::absolute, n}; }
    static TrainSize pool() { return {Kind::pool, 0}; }
    static TrainSize capped_pool() { return {Kind::capped_pool, 0}; }

    std::size_t resolve(std::size_t pool_rows) const;
    std::string label() const;
};

/// Everything a reproducible experiment run needs. Loaded from a JSON plan
/// file; CLI flags may override seed, trials, jobs, and output directory.
struct ExperimentPlan {
    // dataset source: exactly one of csv_path / generator
    std::optional<std::string> csv_path;
    std::string csv_target;
    MissingPolicy csv_missing = MissingPolicy::drop_row;
    std::optional<GeneratorSpec> generator;

    double test_fraction = 0.2;
    std::vector<Strategy> strategies;
    std::vector<double> etas{0.05};
    std::vector<std::size_t> volumes{10000};
    std::vector<TrainSize> train_sizes{TrainSize::pool()};
    int trials = 10;
    std::uint64_t base_seed = 0;

    NoiseCenterMode noise_center_mode = NoiseCenterMode::zero_mean;
    double mixup_alpha = 1.0;
    double cmixup_bandwidth = 0.0;

    TeacherSpec teacher;
    StudentSpec student;

    std::string output_dir = "augdl_out";
    bool emit_timings = false;
    bool dump_student_history = false;
    int jobs = 0;  // 0 = runtime default

    void validate() const;  // throws plan_error
};

ExperimentPlan load_plan(const std::filesystem::path& path);
ExperimentPlan parse_plan(const std::string& json_text);

/// Loads the plan's dataset (CSV file or synthetic generator).
Dataset load_plan_dataset(const ExperimentPlan& plan);

}  // namespace augdl
