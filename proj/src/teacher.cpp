#include "augdl/teacher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "augdl/errors.hpp"
#include "augdl/kernels.hpp"
#include "augdl/rng.hpp"
#include "augdl/stats.hpp"

namespace augdl {

namespace {

// Cholesky solve of the SPD system a * out = b (a is p x p, row-major).
std::vector<double> cholesky_solve(std::vector<double> a, std::vector<double> b, std::size_t p) {
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = a[i * p + j];
            for (std::size_t k = 0; k < j; ++k) sum -= a[i * p + k] * a[j * p + k];
            if (i == j) {
                if (sum <= 0.0) throw std::runtime_error("ridge system not positive definite (lambda must be > 0)");
                a[i * p + j] = std::sqrt(sum);
            } else {
                a[i * p + j] = sum / a[j * p + j];
            }
        }
    }
    // forward substitution L z = b
    for (std::size_t i = 0; i < p; ++i) {
        double sum = b[i];
        for (std::size_t k = 0; k < i; ++k) sum -= a[i * p + k] * b[k];
        b[i] = sum / a[i * p + i];
    }
    // back substitution L^T x = z
    for (std::size_t ii = p; ii-- > 0;) {
        double sum = b[ii];
        for (std::size_t k = ii + 1; k < p; ++k) sum -= a[k * p + ii] * b[k];
        b[ii] = sum / a[ii * p + ii];
    }
    return b;
}

struct Combo {
    TeacherCandidate candidate;
    double lambda = 0.0;
    int k = 0;
    int min_leaf = 0;
    std::string describe() const {
        switch (candidate) {
            case TeacherCandidate::ridge: return "lambda=" + std::to_string(lambda);
            case TeacherCandidate::knn: return "k=" + std::to_string(k);
            case TeacherCandidate::random_forest: return "min_leaf=" + std::to_string(min_leaf);
        }
        return "";
    }
};

std::vector<Combo> enumerate_combos(const TeacherSpec& spec) {
    std::vector<Combo> combos;
    for (TeacherCandidate c : spec.candidates) {
        switch (c) {
            case TeacherCandidate::ridge:
                for (double lambda : spec.ridge_lambdas) combos.push_back({c, lambda, 0, 0});
                break;
            case TeacherCandidate::knn:
                for (int k : spec.knn_ks) combos.push_back({c, 0.0, k, 0});
                break;
            case TeacherCandidate::random_forest:
                for (int min_leaf : spec.forest_min_leaf) combos.push_back({c, 0.0, 0, min_leaf});
                break;
        }
    }
    return combos;
}

Matrix gather_rows(const Matrix& x, std::span<const std::size_t> idx) {
    Matrix out(idx.size(), x.cols());
    for (std::size_t r = 0; r < idx.size(); ++r) {
        auto src = x.row(idx[r]);
        std::copy(src.begin(), src.end(), out.row(r).begin());
    }
    return out;
}

std::vector<double> gather(std::span<const double> y, std::span<const std::size_t> idx) {
    std::vector<double> out(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) out[r] = y[idx[r]];
    return out;
}

ForestParams forest_params_for(const TeacherSpec& spec, int min_leaf) {
    ForestParams params;
    params.n_trees = spec.forest_n_trees;
    params.max_depth = spec.forest_max_depth;
    params.min_leaf = min_leaf;
    return params;
}

std::vector<double> combo_predict(const Combo& combo, const TeacherSpec& spec, const Matrix& x_train,
                                  std::span<const double> y_train, const Matrix& x_eval, std::uint64_t seed) {
    switch (combo.candidate) {
        case TeacherCandidate::ridge:
            return ridge_predict(ridge_fit(x_train, y_train, combo.lambda), x_eval);
        case TeacherCandidate::knn:
            return knn_predict(knn_fit(x_train, y_train, combo.k), x_eval);
        case TeacherCandidate::random_forest: {
            RegressionForest forest;
            forest.fit(x_train, y_train, forest_params_for(spec, combo.min_leaf), seed);
            return forest.predict(x_eval);
        }
    }
    throw std::logic_error("combo_predict: unknown candidate");
}

}  // namespace

std::string teacher_candidate_name(TeacherCandidate c) {
    switch (c) {
        case TeacherCandidate::ridge: return "ridge";
        case TeacherCandidate::knn: return "knn";
        case TeacherCandidate::random_forest: return "random_forest";
    }
    return "unknown";
}

TeacherCandidate teacher_candidate_from_name(std::string_view name) {
    if (name == "ridge") return TeacherCandidate::ridge;
    if (name == "knn") return TeacherCandidate::knn;
    if (name == "random_forest") return TeacherCandidate::random_forest;
    throw std::invalid_argument("unknown teacher candidate: " + std::string(name));
}

RidgeModel ridge_fit(const Matrix& x, std::span<const double> y, double lambda) {
    if (x.rows() == 0 || x.rows() != y.size()) throw std::invalid_argument("ridge_fit: bad training data");
    if (!(lambda > 0.0)) throw std::invalid_argument("ridge_fit: lambda must be > 0");

    RidgeModel model;
    model.lambda = lambda;
    model.standardizer.fit(x);
    const Matrix xs = model.standardizer.transform(x);
    const std::size_t n = xs.rows();
    const std::size_t p = xs.cols();

    model.intercept = stats::mean(y);
    std::vector<double> yc(n);
    for (std::size_t i = 0; i < n; ++i) yc[i] = y[i] - model.intercept;

    // normal equations: (Xs^T Xs + lambda I) w = Xs^T yc
    std::vector<double> gram(p * p, 0.0);
    kernels::matmul_at_b(xs.data(), xs.data(), gram.data(), p, n, p);
    for (std::size_t j = 0; j < p; ++j) gram[j * p + j] += lambda;

    std::vector<double> rhs(p, 0.0);
    kernels::matmul_at_b(xs.data(), yc.data(), rhs.data(), p, n, 1);

    model.coefficients = cholesky_solve(std::move(gram), std::move(rhs), p);
    return model;
}

std::vector<double> ridge_predict(const RidgeModel& model, const Matrix& x) {
    if (x.cols() != model.coefficients.size()) throw std::invalid_argument("ridge_predict: feature count mismatch");
    const Matrix xs = model.standardizer.transform(x);
    std::vector<double> out(x.rows(), 0.0);
    kernels::matmul(xs.data(), model.coefficients.data(), out.data(), xs.rows(), xs.cols(), 1);
    for (double& v : out) v += model.intercept;
    return out;
}

KnnModel knn_fit(const Matrix& x, std::span<const double> y, int k) {
    if (x.rows() == 0 || x.rows() != y.size()) throw std::invalid_argument("knn_fit: bad training data");
    if (k < 1) throw std::invalid_argument("knn_fit: k must be >= 1");
    if (static_cast<std::size_t>(k) > x.rows()) throw std::invalid_argument("knn_fit: k exceeds training rows");

    KnnModel model;
    model.k = k;
    model.standardizer.fit(x);
    model.train_features_std = model.standardizer.transform(x);
    model.train_targets.assign(y.begin(), y.end());
    return model;
}

std::vector<double> knn_predict(const KnnModel& model, const Matrix& x) {
    if (x.cols() != model.train_features_std.cols()) throw std::invalid_argument("knn_predict: feature count mismatch");
    const Matrix xs = model.standardizer.transform(x);
    const std::size_t n_train = model.train_features_std.rows();
    const std::size_t k = static_cast<std::size_t>(model.k);

    std::vector<double> dists(x.rows() * n_train);
    kernels::pairwise_sqdist(xs.data(), xs.rows(), model.train_features_std.data(), n_train, xs.cols(), dists.data());

    std::vector<double> out(x.rows());
    parallel::parallel_for_grain(x.rows(), 128, [&](std::size_t q) {
        // ties in distance break by training row index
        std::vector<std::pair<double, std::size_t>> order(n_train);
        const double* dq = dists.data() + q * n_train;
        for (std::size_t i = 0; i < n_train; ++i) order[i] = {dq[i], i};
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end());
        double sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) sum += model.train_targets[order[i].second];
        out[q] = sum / static_cast<double>(k);
    });
    return out;
}

TrainedTeacher fit_teacher(const Dataset& train, const TeacherSpec& spec) {
    const std::size_t n = train.n_rows();
    if (spec.candidates.empty()) throw std::invalid_argument("fit_teacher: no candidates");
    if (spec.cv_folds < 2) throw std::invalid_argument("fit_teacher: cv_folds must be >= 2");
    if (n < static_cast<std::size_t>(spec.cv_folds)) {
        throw data_error("fit_teacher: fewer rows than CV folds");
    }
    if (spec.ridge_lambdas.empty() || spec.knn_ks.empty() || spec.forest_min_leaf.empty()) {
        throw std::invalid_argument("fit_teacher: empty hyperparameter grid");
    }

    // seeded permutation chunked into near-equal folds
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rng fold_rng = make_rng(derive_seed(spec.seed, 0x10));
    std::shuffle(perm.begin(), perm.end(), fold_rng);

    const std::size_t folds = static_cast<std::size_t>(spec.cv_folds);
    std::vector<std::size_t> fold_begin(folds + 1, 0);
    for (std::size_t f = 0; f < folds; ++f) {
        const std::size_t size = n / folds + (f < n % folds ? 1 : 0);
        fold_begin[f + 1] = fold_begin[f] + size;
    }

    const std::vector<Combo> combos = enumerate_combos(spec);
    std::vector<double> scores(combos.size(), std::numeric_limits<double>::infinity());

    for (std::size_t ci = 0; ci < combos.size(); ++ci) {
        double total_sse = 0.0;
        bool failed = false;
        for (std::size_t f = 0; f < folds && !failed; ++f) {
            std::vector<std::size_t> val_idx(perm.begin() + static_cast<std::ptrdiff_t>(fold_begin[f]),
                                             perm.begin() + static_cast<std::ptrdiff_t>(fold_begin[f + 1]));
            std::vector<std::size_t> fit_idx;
            fit_idx.reserve(n - val_idx.size());
            fit_idx.insert(fit_idx.end(), perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(fold_begin[f]));
            fit_idx.insert(fit_idx.end(), perm.begin() + static_cast<std::ptrdiff_t>(fold_begin[f + 1]), perm.end());

            const Matrix x_fit = gather_rows(train.features, fit_idx);
            const std::vector<double> y_fit = gather(train.target, fit_idx);
            const Matrix x_val = gather_rows(train.features, val_idx);
            const std::vector<double> y_val = gather(train.target, val_idx);
            try {
                const std::vector<double> pred =
                    combo_predict(combos[ci], spec, x_fit, y_fit, x_val, derive_seed(spec.seed, 0x20, ci, f));
                for (std::size_t i = 0; i < pred.size(); ++i) {
                    const double d = pred[i] - y_val[i];
                    total_sse += d * d;
                }
            } catch (const std::exception&) {
                failed = true;  // combo infeasible on this data, e.g. k > fold size
            }
        }
        if (!failed) scores[ci] = std::sqrt(total_sse / static_cast<double>(n));
    }

    std::size_t best = combos.size();
    for (std::size_t ci = 0; ci < combos.size(); ++ci) {
        if (best == combos.size() || scores[ci] < scores[best]) best = ci;
    }
    if (best == combos.size() || !std::isfinite(scores[best])) {
        throw data_error("fit_teacher: all candidates failed to fit");
    }

    TrainedTeacher teacher;
    teacher.chosen = combos[best].candidate;
    teacher.hyperparams = combos[best].describe();
    teacher.cv_rmse = scores[best];
    const auto [mn, mx] = std::minmax_element(train.target.begin(), train.target.end());
    teacher.train_target_min = *mn;
    teacher.train_target_max = *mx;

    switch (combos[best].candidate) {
        case TeacherCandidate::ridge:
            teacher.model = ridge_fit(train.features, train.target, combos[best].lambda);
            break;
        case TeacherCandidate::knn:
            teacher.model = knn_fit(train.features, train.target, combos[best].k);
            break;
        case TeacherCandidate::random_forest: {
            ForestTeacherModel fm;
            fm.params = forest_params_for(spec, combos[best].min_leaf);
            fm.forest.fit(train.features, train.target, fm.params, derive_seed(spec.seed, 0x30, best));
            teacher.model = std::move(fm);
            break;
        }
    }
    return teacher;
}

std::vector<double> teacher_predict(const TrainedTeacher& teacher, const Matrix& features) {
    if (!teacher.fitted()) throw std::logic_error("teacher_predict: teacher is not fitted");
    if (const auto* ridge = std::get_if<RidgeModel>(&teacher.model)) return ridge_predict(*ridge, features);
    if (const auto* knn = std::get_if<KnnModel>(&teacher.model)) return knn_predict(*knn, features);
    const auto& fm = std::get<ForestTeacherModel>(teacher.model);
    return fm.forest.predict(features);
}

}  // namespace augdl
