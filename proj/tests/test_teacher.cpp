#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "augdl/datagen.hpp"
#include "augdl/errors.hpp"
#include "augdl/stats.hpp"
#include "augdl/teacher.hpp"

using namespace augdl;

namespace {

Dataset linear_2x(std::size_t n, std::uint64_t seed) {
    GeneratorSpec spec;
    spec.kind = GeneratorSpec::Kind::linear;
    spec.coefficients = {2.0};
    spec.n_rows = n;
    spec.noise_sd = 0.0;
    spec.seed = seed;
    return generate(spec);
}

Dataset friedman(std::size_t n, double noise, std::uint64_t seed) {
    GeneratorSpec spec;
    spec.kind = GeneratorSpec::Kind::friedman1;
    spec.n_rows = n;
    spec.noise_sd = noise;
    spec.seed = seed;
    return generate(spec);
}

}  // namespace

TEST_CASE("fit_teacher selects ridge on an exactly linear target") {
    const Dataset train = linear_2x(200, 1);
    TeacherSpec spec;
    spec.candidates = {TeacherCandidate::ridge, TeacherCandidate::random_forest};
    spec.forest_n_trees = 25;
    spec.seed = 3;
    const TrainedTeacher teacher = fit_teacher(train, spec);
    CHECK(teacher.chosen == TeacherCandidate::ridge);

    const Dataset held_out = linear_2x(50, 2);
    const std::vector<double> pred = teacher_predict(teacher, held_out.features);
    for (std::size_t i = 0; i < pred.size(); ++i) {
        CHECK(std::abs(pred[i] - held_out.target[i]) < 1e-6);
    }
}

TEST_CASE("fit_teacher on a constant target reports zero CV error") {
    Dataset train = linear_2x(40, 4);
    std::fill(train.target.begin(), train.target.end(), 3.0);
    TeacherSpec spec;
    spec.seed = 5;
    spec.forest_n_trees = 10;
    const TrainedTeacher teacher = fit_teacher(train, spec);
    CHECK(teacher.cv_rmse == 0.0);
    const std::vector<double> pred = teacher_predict(teacher, train.features);
    for (double p : pred) CHECK(p == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("fit_teacher prefers the forest on a nonlinear target") {
    const Dataset train = friedman(1000, 1.0, 6);
    TeacherSpec spec;
    spec.candidates = {TeacherCandidate::ridge, TeacherCandidate::random_forest};
    spec.forest_n_trees = 50;
    spec.forest_min_leaf = {5};
    spec.seed = 7;
    const TrainedTeacher teacher = fit_teacher(train, spec);
    CHECK(teacher.chosen == TeacherCandidate::random_forest);
}

TEST_CASE("CV scores: the analytically perfect candidate wins on noiseless linear data") {
    const Dataset train = linear_2x(150, 8);
    TeacherSpec spec;
    spec.candidates = {TeacherCandidate::knn, TeacherCandidate::random_forest, TeacherCandidate::ridge};
    spec.forest_n_trees = 20;
    spec.seed = 9;
    const TrainedTeacher teacher = fit_teacher(train, spec);
    CHECK(teacher.chosen == TeacherCandidate::ridge);
    CHECK(teacher.cv_rmse < 1e-5);
}

TEST_CASE("fit_teacher is deterministic") {
    const Dataset train = friedman(300, 1.0, 10);
    TeacherSpec spec;
    spec.forest_n_trees = 20;
    spec.seed = 11;
    const TrainedTeacher a = fit_teacher(train, spec);
    const TrainedTeacher b = fit_teacher(train, spec);
    CHECK(a.chosen == b.chosen);
    CHECK(a.hyperparams == b.hyperparams);
    CHECK(a.cv_rmse == b.cv_rmse);
    const Dataset probe = friedman(64, 0.0, 12);
    CHECK(teacher_predict(a, probe.features) == teacher_predict(b, probe.features));
}

TEST_CASE("forest and knn predictions stay within the training target range") {
    for (std::uint64_t seed : {21u, 22u, 23u}) {
        const Dataset train = friedman(180, 2.0, seed);
        const Dataset probe = friedman(300, 0.0, seed + 100);
        const auto [mn, mx] = std::minmax_element(train.target.begin(), train.target.end());

        ForestTeacherModel forest;
        forest.params.n_trees = 15;
        forest.forest.fit(train.features, train.target, forest.params, seed);
        for (double p : forest.forest.predict(probe.features)) {
            CHECK(p >= *mn);
            CHECK(p <= *mx);
        }
        const KnnModel knn = knn_fit(train.features, train.target, 5);
        for (double p : knn_predict(knn, probe.features)) {
            CHECK(p >= *mn);
            CHECK(p <= *mx);
        }
    }
}

TEST_CASE("ridge: fitted coefficients zero the penalized least-squares gradient") {
    const Dataset train = friedman(120, 0.5, 30);
    const double lambda = 0.01;
    const RidgeModel model = ridge_fit(train.features, train.target, lambda);

    const Matrix xs = model.standardizer.transform(train.features);
    const std::size_t n = xs.rows();
    const std::size_t p = xs.cols();
    std::vector<double> residual(n);  // Xs w - yc
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t c = 0; c < p; ++c) acc += xs(i, c) * model.coefficients[c];
        residual[i] = acc - (train.target[i] - model.intercept);
    }
    double grad_norm = 0.0, ref_norm = 0.0;
    for (std::size_t c = 0; c < p; ++c) {
        double g = lambda * model.coefficients[c];
        for (std::size_t i = 0; i < n; ++i) g += xs(i, c) * residual[i];
        grad_norm += g * g;
        double b = 0.0;  // scale reference: Xs^T yc
        for (std::size_t i = 0; i < n; ++i) b += xs(i, c) * (train.target[i] - model.intercept);
        ref_norm += b * b;
    }
    CHECK(std::sqrt(grad_norm) <= 1e-8 * std::max(1.0, std::sqrt(ref_norm)));
}

TEST_CASE("ridge: huge lambda shrinks predictions to the target mean") {
    const Dataset train = friedman(100, 1.0, 31);
    const RidgeModel model = ridge_fit(train.features, train.target, 1e12);
    const double mean = stats::mean(train.target);
    for (double p : ridge_predict(model, train.features)) {
        CHECK(p == doctest::Approx(mean).epsilon(1e-6));
    }
    CHECK_THROWS_AS(ridge_fit(train.features, train.target, 0.0), std::invalid_argument);
}

TEST_CASE("knn: k=1 on a training row returns that row's target") {
    const Dataset train = friedman(60, 1.0, 32);
    const KnnModel model = knn_fit(train.features, train.target, 1);
    Matrix one(1, train.n_features());
    std::copy(train.features.row(17).begin(), train.features.row(17).end(), one.row(0).begin());
    CHECK(knn_predict(model, one)[0] == train.target[17]);
    CHECK_THROWS_AS(knn_fit(train.features, train.target, 61), std::invalid_argument);  // k > n
}

TEST_CASE("forest: max_depth=0 predicts the global mean everywhere") {
    const Dataset train = friedman(80, 1.0, 33);
    ForestParams params;
    params.n_trees = 5;
    params.max_depth = 0;
    params.bootstrap = false;
    RegressionForest forest;
    forest.fit(train.features, train.target, params, 1);
    const double mean = stats::mean(train.target);
    for (double p : forest.predict(train.features)) {
        CHECK(p == doctest::Approx(mean).epsilon(1e-12));
    }
}

TEST_CASE("forest: one unpruned tree without bootstrap memorizes distinct rows") {
    // 4 rows, distinct in every feature
    Dataset train;
    train.features = Matrix::from_rows({{0.0, 9.0}, {1.0, 3.0}, {2.0, 7.0}, {3.0, 1.0}});
    train.target = {10.0, -2.0, 4.0, 8.0};
    train.feature_names = {"a", "b"};
    train.target_name = "y";

    ForestParams params;
    params.n_trees = 1;
    params.bootstrap = false;
    params.min_leaf = 1;
    params.mtry = 2;
    RegressionForest forest;
    forest.fit(train.features, train.target, params, 3);
    const std::vector<double> pred = forest.predict(train.features);
    for (std::size_t i = 0; i < pred.size(); ++i) CHECK(pred[i] == doctest::Approx(train.target[i]).epsilon(1e-12));
}

TEST_CASE("fit_teacher error paths") {
    const Dataset tiny = linear_2x(3, 40);
    TeacherSpec spec;
    spec.cv_folds = 5;
    CHECK_THROWS_AS(fit_teacher(tiny, spec), data_error);  // fewer rows than folds

    const Dataset train = linear_2x(30, 41);
    TeacherSpec bad;
    bad.candidates = {};
    CHECK_THROWS_AS(fit_teacher(train, bad), std::invalid_argument);

    TeacherSpec knn_only;
    knn_only.candidates = {TeacherCandidate::knn};
    knn_only.knn_ks = {500};  // larger than any CV fold: every combo fails
    CHECK_THROWS_AS(fit_teacher(train, knn_only), data_error);

    const TrainedTeacher unfitted;
    Matrix probe(1, 1, 0.5);
    CHECK_THROWS_AS(teacher_predict(unfitted, probe), std::logic_error);
}

TEST_CASE("teacher candidate names round-trip") {
    CHECK(teacher_candidate_from_name("ridge") == TeacherCandidate::ridge);
    CHECK(teacher_candidate_name(TeacherCandidate::random_forest) == "random_forest");
    CHECK_THROWS_AS(teacher_candidate_from_name("gbm"), std::invalid_argument);
}
