#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "augdl/dataset.hpp"
#include "augdl/rng.hpp"
#include "augdl/teacher.hpp"

namespace augdl {

enum class Strategy { teacher_noise, naive_noise, mixup, cmixup, none, distill_only };

std::string strategy_name(Strategy s);
Strategy strategy_from_name(std::string_view name);

enum class NoiseCenterMode { zero_mean, column_mean };

struct AugmentationConfig {
    Strategy strategy = Strategy::teacher_noise;
    std::size_t volume = 10000;
    double noise_fraction = 0.05;
    NoiseCenterMode noise_center_mode = NoiseCenterMode::zero_mean;
    double mixup_alpha = 1.0;
    double cmixup_bandwidth = 0.0;  // <= 0: use sample std of the training target
    std::uint64_t seed = 0;

    void validate() const;
};

/// Where a synthetic row came from: its source row, and for mix strategies
/// the partner row and mixing coefficient.
struct SyntheticRowOrigin {
    static constexpr std::size_t kNoPartner = std::numeric_limits<std::size_t>::max();
    std::size_t source = 0;
    std::size_t partner = kNoPartner;
    double lambda = 1.0;
    bool is_pair() const { return partner != kNoPartner; }
};

struct SyntheticSet {
    Matrix features;
    std::vector<double> labels;
    std::vector<SyntheticRowOrigin> provenance;

    std::size_t n_rows() const { return features.rows(); }
};

/// Samples V training rows with replacement, perturbs every column with
/// Gaussian noise of sd eta * sigma_c, and labels the perturbed rows with the
/// teacher's predictions.
SyntheticSet generate_teacher_noise(const Dataset& train, const ColumnStats& stats, const AugmentationConfig& config,
                                    const TrainedTeacher& teacher);

/// Same sampling and perturbation, but each row keeps its source row's label.
SyntheticSet generate_naive_noise(const Dataset& train, const ColumnStats& stats, const AugmentationConfig& config);

/// Convex combinations of uniformly drawn row pairs with Beta(alpha, alpha)
/// mixing coefficients, applied to features and labels alike.
SyntheticSet generate_mixup(const Dataset& train, const AugmentationConfig& config);

/// Mixup with label-aware partner sampling: partners are drawn with
/// probability proportional to a Gaussian kernel in label distance.
SyntheticSet generate_cmixup(const Dataset& train, const AugmentationConfig& config);

/// Row-concatenation of training data and synthetic rows (original rows
/// first).
Dataset combine(const Dataset& train, const SyntheticSet& synth);

namespace augment_detail {

/// lambda * row i + (1 - lambda) * row j, for features and label.
void mix_rows(const Matrix& x, std::span<const double> y, std::size_t i, std::size_t j, double lambda,
              std::span<double> features_out, double& label_out);

/// Unnormalized partner weights for an anchor under the label-distance
/// Gaussian kernel, stabilized so the largest weight is 1. weights[anchor]
/// is 0.
std::vector<double> cmixup_partner_weights(std::span<const double> y, std::size_t anchor, double bandwidth);

std::size_t sample_weighted(std::span<const double> weights, Rng& rng);

/// Beta(alpha, alpha) draw via two gamma variates.
double sample_beta_symmetric(Rng& rng, double alpha);

}  // namespace augment_detail

}  // namespace augdl
