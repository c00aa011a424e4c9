#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "augdl/dataset.hpp"
#include "augdl/forest.hpp"

namespace augdl {

enum class TeacherCandidate { ridge, knn, random_forest };

std::string teacher_candidate_name(TeacherCandidate c);
TeacherCandidate teacher_candidate_from_name(std::string_view name);

/// Search space for the teacher: a small grid over three classical families,
/// scored by k-fold cross-validated RMSE with seed-deterministic folds.
struct TeacherSpec {
    std::vector<TeacherCandidate> candidates{TeacherCandidate::ridge, TeacherCandidate::knn,
                                             TeacherCandidate::random_forest};
    int cv_folds = 5;
    std::uint64_t seed = 0;

    std::vector<double> ridge_lambdas{1e-4, 1e-2, 1.0};
    std::vector<int> knn_ks{3, 5, 10};
    int forest_n_trees = 100;
    int forest_max_depth = -1;
    std::vector<int> forest_min_leaf{1, 5};
};

/// Penalized least squares on standardized features, solved by Cholesky.
struct RidgeModel {
    Standardizer standardizer;
    std::vector<double> coefficients;
    double intercept = 0.0;
    double lambda = 0.0;
};

/// Mean target of the k nearest training rows under Euclidean distance on
/// standardized features.
struct KnnModel {
    Standardizer standardizer;
    Matrix train_features_std;
    std::vector<double> train_targets;
    int k = 0;
};

struct ForestTeacherModel {
    RegressionForest forest;
    ForestParams params;
};

struct TrainedTeacher {
    TeacherCandidate chosen = TeacherCandidate::ridge;
    std::string hyperparams;
    double cv_rmse = 0.0;
    double train_target_min = 0.0;
    double train_target_max = 0.0;
    std::variant<std::monostate, RidgeModel, KnnModel, ForestTeacherModel> model;

    bool fitted() const { return !std::holds_alternative<std::monostate>(model); }
};

/// Scores every (candidate, hyperparameter) combination by k-fold CV RMSE and
/// refits the minimizer on the full training set. Ties break by candidate
/// declaration order, then grid order.
TrainedTeacher fit_teacher(const Dataset& train, const TeacherSpec& spec);

std::vector<double> teacher_predict(const TrainedTeacher& teacher, const Matrix& features);

// Candidate fitters, exposed for direct testing.
RidgeModel ridge_fit(const Matrix& x, std::span<const double> y, double lambda);
std::vector<double> ridge_predict(const RidgeModel& model, const Matrix& x);
KnnModel knn_fit(const Matrix& x, std::span<const double> y, int k);
std::vector<double> knn_predict(const KnnModel& model, const Matrix& x);

}  // namespace augdl
