#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "augdl/matrix.hpp"

namespace augdl {

struct ForestParams {
    int n_trees = 100;
    int max_depth = -1;  // -1 = unlimited
    int min_leaf = 1;
    bool bootstrap = true;
    int mtry = 0;  // features tried per split; 0 = max(1, n_features / 3)
};

/// Random forest of CART regression trees grown on bootstrap resamples with
/// per-split feature subsampling under the variance-reduction criterion.
/// Predictions are tree means, so they never leave the training target range.
class RegressionForest {
public:
    void fit(const Matrix& x, std::span<const double> y, const ForestParams& params, std::uint64_t seed);
    std::vector<double> predict(const Matrix& x) const;
    double predict_row(std::span<const double> x) const;

    bool fitted() const { return !trees_.empty(); }
    std::size_t n_features() const { return n_features_; }

private:
    struct Node {
        int feature = -1;  // -1 marks a leaf
        double threshold = 0.0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        double value = 0.0;
    };
    struct Tree {
        std::vector<Node> nodes;
        double predict_row(std::span<const double> x) const;
    };

    Tree grow_tree(const Matrix& x, std::span<const double> y, const ForestParams& params, std::uint64_t seed) const;

    std::vector<Tree> trees_;
    std::size_t n_features_ = 0;
};

}  // namespace augdl
