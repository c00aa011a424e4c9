#include "augdl/plan.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "augdl/errors.hpp"

namespace augdl {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where, const std::set<std::string>& known) {
    for (const auto& item : obj.items()) {
        if (!known.contains(item.key())) {
            throw plan_error("plan: unknown key '" + item.key() + "' in " + where);
        }
    }
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw plan_error("plan: bad value for '" + key + "': " + e.what());
    }
}

TrainSize parse_train_size(const json& value) {
    if (value.is_number_unsigned() || value.is_number_integer()) {
        const long long n = value.get<long long>();
        if (n < 1) throw plan_error("plan: train size must be >= 1");
        return TrainSize::absolute(static_cast<std::size_t>(n));
    }
    if (value.is_string()) {
        const std::string s = value.get<std::string>();
        if (s == "80%") return TrainSize::pool();
        if (s == "50000_or_80%") return TrainSize::capped_pool();
        throw plan_error("plan: unknown train size '" + s + "' (use a number, \"80%\" or \"50000_or_80%\")");
    }
    throw plan_error("plan: train size entries must be numbers or strings");
}

GeneratorSpec parse_generator(const json& obj) {
    require_keys(obj, "dataset.generator",
                 {"kind", "n_rows", "noise_sd", "seed", "coefficients", "breakpoint", "slope_left", "slope_right"});
    GeneratorSpec spec;
    if (!obj.contains("kind")) throw plan_error("plan: dataset.generator.kind is required");
    try {
        spec.kind = generator_kind_from_name(obj.at("kind").get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw plan_error(std::string("plan: ") + e.what());
    }
    spec.n_rows = get_or<std::size_t>(obj, "n_rows", 1000);
    spec.noise_sd = get_or<double>(obj, "noise_sd", 0.0);
    spec.seed = get_or<std::uint64_t>(obj, "seed", 0);
    spec.coefficients = get_or<std::vector<double>>(obj, "coefficients", {});
    spec.breakpoint = get_or<double>(obj, "breakpoint", spec.breakpoint);
    spec.slope_left = get_or<double>(obj, "slope_left", spec.slope_left);
    spec.slope_right = get_or<double>(obj, "slope_right", spec.slope_right);
    return spec;
}

TeacherSpec parse_teacher(const json& obj) {
    require_keys(obj, "teacher", {"candidates", "cv_folds", "ridge_lambdas", "knn_ks", "forest"});
    TeacherSpec spec;
    if (obj.contains("candidates")) {
        spec.candidates.clear();
        for (const auto& name : obj.at("candidates")) {
            try {
                spec.candidates.push_back(teacher_candidate_from_name(name.get<std::string>()));
            } catch (const std::invalid_argument& e) {
                throw plan_error(std::string("plan: ") + e.what());
            }
        }
    }
    spec.cv_folds = get_or<int>(obj, "cv_folds", spec.cv_folds);
    spec.ridge_lambdas = get_or<std::vector<double>>(obj, "ridge_lambdas", spec.ridge_lambdas);
    spec.knn_ks = get_or<std::vector<int>>(obj, "knn_ks", spec.knn_ks);
    if (obj.contains("forest")) {
        const json& forest = obj.at("forest");
        require_keys(forest, "teacher.forest", {"n_trees", "max_depth", "min_leaf"});
        spec.forest_n_trees = get_or<int>(forest, "n_trees", spec.forest_n_trees);
        spec.forest_max_depth = get_or<int>(forest, "max_depth", spec.forest_max_depth);
        spec.forest_min_leaf = get_or<std::vector<int>>(forest, "min_leaf", spec.forest_min_leaf);
    }
    return spec;
}

StudentSpec parse_student(const json& obj) {
    require_keys(obj, "student",
                 {"architectures", "activation", "max_epochs", "batch_size", "learning_rate", "patience",
                  "validation_fraction"});
    StudentSpec spec;
    if (obj.contains("architectures")) {
        spec.architectures.clear();
        for (const auto& arch : obj.at("architectures")) {
            std::vector<std::size_t> widths;
            for (const auto& w : arch) widths.push_back(w.get<std::size_t>());
            spec.architectures.push_back(std::move(widths));
        }
    }
    if (obj.contains("activation")) {
        const std::string name = obj.at("activation").get<std::string>();
        if (name == "relu") {
            spec.activation = StudentSpec::Activation::relu;
        } else if (name == "tanh") {
            spec.activation = StudentSpec::Activation::tanh;
        } else {
            throw plan_error("plan: unknown activation '" + name + "'");
        }
    }
    spec.max_epochs = get_or<int>(obj, "max_epochs", spec.max_epochs);
    spec.batch_size = get_or<std::size_t>(obj, "batch_size", spec.batch_size);
    spec.learning_rate = get_or<double>(obj, "learning_rate", spec.learning_rate);
    spec.patience = get_or<int>(obj, "patience", spec.patience);
    spec.validation_fraction = get_or<double>(obj, "validation_fraction", spec.validation_fraction);
    return spec;
}

}  // namespace

std::size_t TrainSize::resolve(std::size_t pool_rows) const {
    switch (kind) {
        case Kind::absolute: return count;
        case Kind::pool: return pool_rows;
        case Kind::capped_pool: return std::min<std::size_t>(50000, pool_rows);
    }
    return 0;
}

std::string TrainSize::label() const {
    switch (kind) {
        case Kind::absolute: return std::to_string(count);
        case Kind::pool: return "80%";
        case Kind::capped_pool: return "50000_or_80%";
    }
    return "?";
}

void ExperimentPlan::validate() const {
    if (csv_path.has_value() == generator.has_value()) {
        throw plan_error("plan: dataset needs exactly one of csv_path or generator");
    }
    if (csv_path && csv_target.empty()) throw plan_error("plan: dataset.target is required with csv_path");
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw plan_error("plan: test_fraction must be in (0, 1)");
    if (strategies.empty()) throw plan_error("plan: at least one strategy is required");
    if (trials < 1) throw plan_error("plan: trials must be >= 1");
    if (etas.empty()) throw plan_error("plan: etas must not be empty");
    for (double eta : etas) {
        if (eta < 0.0) throw plan_error("plan: etas must be >= 0");
    }
    if (volumes.empty()) throw plan_error("plan: volumes must not be empty");
    if (train_sizes.empty()) throw plan_error("plan: train_sizes must not be empty");
    if (!(mixup_alpha > 0.0)) throw plan_error("plan: augmentation.mixup_alpha must be > 0");
    if (teacher.candidates.empty()) throw plan_error("plan: teacher.candidates must not be empty");
    if (teacher.cv_folds < 2) throw plan_error("plan: teacher.cv_folds must be >= 2");
    if (teacher.ridge_lambdas.empty() || teacher.knn_ks.empty() || teacher.forest_min_leaf.empty()) {
        throw plan_error("plan: teacher hyperparameter grids must not be empty");
    }
    for (double lambda : teacher.ridge_lambdas) {
        if (!(lambda > 0.0)) throw plan_error("plan: teacher.ridge_lambdas must be > 0");
    }
    if (student.architectures.empty()) throw plan_error("plan: student.architectures must not be empty");
    if (student.max_epochs < 1) throw plan_error("plan: student.max_epochs must be >= 1");
    if (!(student.validation_fraction > 0.0 && student.validation_fraction < 1.0)) {
        throw plan_error("plan: student.validation_fraction must be in (0, 1)");
    }
    if (student.batch_size < 1) throw plan_error("plan: student.batch_size must be >= 1");
    if (output_dir.empty()) throw plan_error("plan: output_dir must not be empty");
}

ExperimentPlan parse_plan(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw plan_error(std::string("plan: JSON parse failure: ") + e.what());
    }
    if (!root.is_object()) throw plan_error("plan: top level must be a JSON object");
    require_keys(root, "plan",
                 {"dataset", "test_fraction", "strategies", "etas", "volumes", "train_sizes", "trials", "base_seed",
                  "augmentation", "teacher", "student", "output_dir", "emit_timings", "dump_student_history",
                  "jobs"});

    ExperimentPlan plan;
    if (!root.contains("dataset")) throw plan_error("plan: dataset is required");
    {
        const json& ds = root.at("dataset");
        require_keys(ds, "dataset", {"csv_path", "target", "missing_policy", "generator"});
        if (ds.contains("csv_path")) {
            plan.csv_path = ds.at("csv_path").get<std::string>();
            plan.csv_target = get_or<std::string>(ds, "target", "");
            const std::string policy = get_or<std::string>(ds, "missing_policy", "drop_row");
            if (policy == "drop_row") {
                plan.csv_missing = MissingPolicy::drop_row;
            } else if (policy == "error") {
                plan.csv_missing = MissingPolicy::error;
            } else {
                throw plan_error("plan: unknown missing_policy '" + policy + "'");
            }
        }
        if (ds.contains("generator")) plan.generator = parse_generator(ds.at("generator"));
    }

    plan.test_fraction = get_or<double>(root, "test_fraction", plan.test_fraction);
    if (root.contains("strategies")) {
        for (const auto& name : root.at("strategies")) {
            try {
                plan.strategies.push_back(strategy_from_name(name.get<std::string>()));
            } catch (const std::invalid_argument& e) {
                throw plan_error(std::string("plan: ") + e.what());
            }
        }
    }
    plan.etas = get_or<std::vector<double>>(root, "etas", plan.etas);
    plan.volumes = get_or<std::vector<std::size_t>>(root, "volumes", plan.volumes);
    if (root.contains("train_sizes")) {
        plan.train_sizes.clear();
        for (const auto& value : root.at("train_sizes")) plan.train_sizes.push_back(parse_train_size(value));
    }
    plan.trials = get_or<int>(root, "trials", plan.trials);
    plan.base_seed = get_or<std::uint64_t>(root, "base_seed", plan.base_seed);

    if (root.contains("augmentation")) {
        const json& aug = root.at("augmentation");
        require_keys(aug, "augmentation", {"noise_center_mode", "mixup_alpha", "cmixup_bandwidth"});
        const std::string mode = get_or<std::string>(aug, "noise_center_mode", "zero_mean");
        if (mode == "zero_mean") {
            plan.noise_center_mode = NoiseCenterMode::zero_mean;
        } else if (mode == "column_mean") {
            plan.noise_center_mode = NoiseCenterMode::column_mean;
        } else {
            throw plan_error("plan: unknown noise_center_mode '" + mode + "'");
        }
        plan.mixup_alpha = get_or<double>(aug, "mixup_alpha", plan.mixup_alpha);
        plan.cmixup_bandwidth = get_or<double>(aug, "cmixup_bandwidth", plan.cmixup_bandwidth);
    }

    if (root.contains("teacher")) plan.teacher = parse_teacher(root.at("teacher"));
    if (root.contains("student")) plan.student = parse_student(root.at("student"));
    plan.output_dir = get_or<std::string>(root, "output_dir", plan.output_dir);
    plan.emit_timings = get_or<bool>(root, "emit_timings", plan.emit_timings);
    plan.dump_student_history = get_or<bool>(root, "dump_student_history", plan.dump_student_history);
    plan.jobs = get_or<int>(root, "jobs", plan.jobs);

    plan.validate();
    return plan;
}

ExperimentPlan load_plan(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw plan_error("cannot open plan file: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_plan(buffer.str());
}

Dataset load_plan_dataset(const ExperimentPlan& plan) {
    if (plan.csv_path) return load_csv(*plan.csv_path, plan.csv_target, plan.csv_missing);
    return generate(*plan.generator);
}

}  // namespace augdl
