#include "augdl/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "augdl/parallel.hpp"
#include "augdl/rng.hpp"

namespace augdl {

namespace {

struct WorkItem {
    std::int32_t node;
    std::size_t begin;
    std::size_t end;
    int depth;
};

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double child_sse = 0.0;
};

double subset_mean(std::span<const double> y, std::span<const std::size_t> idx) {
    double sum = 0.0;
    for (std::size_t i : idx) sum += y[i];
    return sum / static_cast<double>(idx.size());
}

}  // namespace

double RegressionForest::Tree::predict_row(std::span<const double> x) const {
    std::int32_t node = 0;
    while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
        const Node& n = nodes[static_cast<std::size_t>(node)];
        node = x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(node)].value;
}

RegressionForest::Tree RegressionForest::grow_tree(const Matrix& x, std::span<const double> y,
                                                   const ForestParams& params, std::uint64_t seed) const {
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();
    const std::size_t mtry =
        params.mtry > 0 ? std::min<std::size_t>(static_cast<std::size_t>(params.mtry), p) : std::max<std::size_t>(1, p / 3);
    const std::size_t min_leaf = static_cast<std::size_t>(std::max(1, params.min_leaf));

    Rng rng = make_rng(seed);

    std::vector<std::size_t> indices(n);
    if (params.bootstrap) {
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (std::size_t i = 0; i < n; ++i) indices[i] = pick(rng);
    } else {
        std::iota(indices.begin(), indices.end(), 0);
    }

    Tree tree;
    tree.nodes.reserve(2 * n / min_leaf + 1);
    tree.nodes.push_back(Node{});

    std::vector<std::size_t> feature_pool(p);
    std::iota(feature_pool.begin(), feature_pool.end(), 0);
    std::vector<std::pair<double, double>> sorted;  // (feature value, target)
    std::vector<std::size_t> partition_buffer;

    // explicit stack; recursion depth can reach n / min_leaf on pathological data
    std::vector<WorkItem> stack;
    stack.push_back({0, 0, n, 0});

    while (!stack.empty()) {
        const WorkItem item = stack.back();
        stack.pop_back();
        Node& node = tree.nodes[static_cast<std::size_t>(item.node)];
        const std::span<std::size_t> node_idx(indices.data() + item.begin, item.end - item.begin);
        const std::size_t m = node_idx.size();

        node.value = subset_mean(y, node_idx);
        const bool depth_capped = params.max_depth >= 0 && item.depth >= params.max_depth;
        if (depth_capped || m < 2 * min_leaf) continue;

        double sum = 0.0, sum_sq = 0.0;
        for (std::size_t i : node_idx) {
            sum += y[i];
            sum_sq += y[i] * y[i];
        }
        const double node_sse = sum_sq - sum * sum / static_cast<double>(m);
        if (node_sse <= 1e-12 * std::max(1.0, sum_sq)) continue;  // constant target

        // feature subsample: partial Fisher-Yates over the pool
        for (std::size_t i = 0; i < mtry; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, p - 1);
            std::swap(feature_pool[i], feature_pool[pick(rng)]);
        }

        SplitChoice best;
        best.child_sse = node_sse;
        for (std::size_t fi = 0; fi < mtry; ++fi) {
            const std::size_t f = feature_pool[fi];
            sorted.clear();
            for (std::size_t i : node_idx) sorted.emplace_back(x(i, f), y[i]);
            // lexicographic (value, target) order: splits land only at value
            // boundaries, so equal-value runs contribute permutation-invariant
            // prefix sums and the result is deterministic
            std::sort(sorted.begin(), sorted.end());
            if (sorted.front().first == sorted.back().first) continue;  // constant feature

            double left_sum = 0.0, left_sq = 0.0;
            for (std::size_t s = 0; s + 1 < m; ++s) {
                left_sum += sorted[s].second;
                left_sq += sorted[s].second * sorted[s].second;
                const std::size_t n_left = s + 1;
                const std::size_t n_right = m - n_left;
                if (n_left < min_leaf || n_right < min_leaf) continue;
                if (sorted[s].first == sorted[s + 1].first) continue;  // not a boundary
                const double right_sum = sum - left_sum;
                const double right_sq = sum_sq - left_sq;
                const double sse = (left_sq - left_sum * left_sum / static_cast<double>(n_left)) +
                                   (right_sq - right_sum * right_sum / static_cast<double>(n_right));
                if (sse < best.child_sse) {
                    best.child_sse = sse;
                    best.feature = static_cast<int>(f);
                    best.threshold = 0.5 * (sorted[s].first + sorted[s + 1].first);
                }
            }
        }
        if (best.feature < 0) continue;

        // stable partition keeps index order deterministic for child nodes
        partition_buffer.clear();
        std::size_t write = item.begin;
        for (std::size_t i : node_idx) {
            if (x(i, static_cast<std::size_t>(best.feature)) < best.threshold) {
                indices[write++] = i;
            } else {
                partition_buffer.push_back(i);
            }
        }
        const std::size_t mid = write;
        for (std::size_t i : partition_buffer) indices[write++] = i;
        if (mid == item.begin || mid == item.end) continue;  // split failed to separate rows

        const std::int32_t left_id = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.push_back(Node{});
        const std::int32_t right_id = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.push_back(Node{});
        Node& parent = tree.nodes[static_cast<std::size_t>(item.node)];
        parent.feature = best.feature;
        parent.threshold = best.threshold;
        parent.left = left_id;
        parent.right = right_id;
        stack.push_back({right_id, mid, item.end, item.depth + 1});
        stack.push_back({left_id, item.begin, mid, item.depth + 1});
    }
    return tree;
}

void RegressionForest::fit(const Matrix& x, std::span<const double> y, const ForestParams& params,
                           std::uint64_t seed) {
    if (x.rows() == 0) throw std::invalid_argument("RegressionForest::fit: empty training data");
    if (x.rows() != y.size()) throw std::invalid_argument("RegressionForest::fit: row/target count mismatch");
    if (params.n_trees < 1) throw std::invalid_argument("RegressionForest::fit: n_trees must be >= 1");

    n_features_ = x.cols();
    trees_.assign(static_cast<std::size_t>(params.n_trees), Tree{});
    parallel::parallel_for(trees_.size(),
                           [&](std::size_t t) { trees_[t] = grow_tree(x, y, params, derive_seed(seed, t)); });
}

double RegressionForest::predict_row(std::span<const double> x) const {
    double sum = 0.0;
    for (const Tree& tree : trees_) sum += tree.predict_row(x);
    return sum / static_cast<double>(trees_.size());
}

std::vector<double> RegressionForest::predict(const Matrix& x) const {
    if (!fitted()) throw std::logic_error("RegressionForest::predict called before fit");
    if (x.cols() != n_features_) throw std::invalid_argument("RegressionForest::predict: feature count mismatch");
    std::vector<double> out(x.rows());
    parallel::parallel_for_grain(x.rows(), 256, [&](std::size_t r) { out[r] = predict_row(x.row(r)); });
    return out;
}

}  // namespace augdl
