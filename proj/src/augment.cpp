#include "augdl/augment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "augdl/parallel.hpp"
#include "augdl/stats.hpp"

namespace augdl {

namespace {

constexpr std::uint64_t kRowStream = 0x41;

void check_noise_inputs(const Dataset& train, const ColumnStats& stats, const AugmentationConfig& config) {
    config.validate();
    if (train.n_rows() == 0) throw std::invalid_argument("augment: empty training data");
    if (stats.means.size() != train.n_features() || stats.stds.size() != train.n_features()) {
        throw std::invalid_argument("augment: column stats do not match the training data");
    }
}

/// V rows sampled with replacement and perturbed per column. Each output row
/// owns an RNG stream derived from (seed, row), so generation parallelizes
/// without affecting results.
SyntheticSet sample_and_perturb(const Dataset& train, const ColumnStats& stats, const AugmentationConfig& config) {
    const std::size_t n = train.n_rows();
    const std::size_t p = train.n_features();
    SyntheticSet synth;
    synth.features = Matrix(config.volume, p);
    synth.provenance.resize(config.volume);

    parallel::parallel_for_grain(config.volume, 512, [&](std::size_t r) {
        Rng rng = make_rng(derive_seed(config.seed, kRowStream, r));
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        const std::size_t src = pick(rng);
        synth.provenance[r].source = src;
        auto src_row = train.features.row(src);
        auto out_row = synth.features.row(r);
        for (std::size_t c = 0; c < p; ++c) {
            const double sd = config.noise_fraction * stats.stds[c];
            const double center = config.noise_center_mode == NoiseCenterMode::column_mean ? stats.means[c] : 0.0;
            double value = src_row[c];
            if (sd > 0.0) {
                value += std::normal_distribution<double>(center, sd)(rng);
            } else if (center != 0.0) {
                value += center;
            }
            out_row[c] = value;
        }
    });
    return synth;
}

}  // namespace

void AugmentationConfig::validate() const {
    if (noise_fraction < 0.0) throw std::invalid_argument("augmentation: noise fraction must be >= 0");
    if (!(mixup_alpha > 0.0)) throw std::invalid_argument("augmentation: mixup alpha must be > 0");
}

std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::teacher_noise: return "teacher_noise";
        case Strategy::naive_noise: return "naive_noise";
        case Strategy::mixup: return "mixup";
        case Strategy::cmixup: return "cmixup";
        case Strategy::none: return "none";
        case Strategy::distill_only: return "distill_only";
    }
    return "unknown";
}

Strategy strategy_from_name(std::string_view name) {
    if (name == "teacher_noise") return Strategy::teacher_noise;
    if (name == "naive_noise") return Strategy::naive_noise;
    if (name == "mixup") return Strategy::mixup;
    if (name == "cmixup") return Strategy::cmixup;
    if (name == "none") return Strategy::none;
    if (name == "distill_only") return Strategy::distill_only;
    throw std::invalid_argument("unknown augmentation strategy: " + std::string(name));
}

SyntheticSet generate_teacher_noise(const Dataset& train, const ColumnStats& stats, const AugmentationConfig& config,
                                    const TrainedTeacher& teacher) {
    check_noise_inputs(train, stats, config);
    if (!teacher.fitted()) throw std::logic_error("generate_teacher_noise: teacher is not fitted");
    SyntheticSet synth = sample_and_perturb(train, stats, config);
    synth.labels = config.volume > 0 ? teacher_predict(teacher, synth.features) : std::vector<double>{};
    return synth;
}

SyntheticSet generate_naive_noise(const Dataset& train, const ColumnStats& stats, const AugmentationConfig& config) {
    check_noise_inputs(train, stats, config);
    SyntheticSet synth = sample_and_perturb(train, stats, config);
    synth.labels.resize(config.volume);
    for (std::size_t r = 0; r < config.volume; ++r) synth.labels[r] = train.target[synth.provenance[r].source];
    return synth;
}

namespace augment_detail {

void mix_rows(const Matrix& x, std::span<const double> y, std::size_t i, std::size_t j, double lambda,
              std::span<double> features_out, double& label_out) {
    auto xi = x.row(i);
    auto xj = x.row(j);
    for (std::size_t c = 0; c < xi.size(); ++c) features_out[c] = lambda * xi[c] + (1.0 - lambda) * xj[c];
    label_out = lambda * y[i] + (1.0 - lambda) * y[j];
}

std::vector<double> cmixup_partner_weights(std::span<const double> y, std::size_t anchor, double bandwidth) {
    std::vector<double> weights(y.size(), 0.0);
    double min_sq = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < y.size(); ++j) {
        if (j == anchor) continue;
        const double d = y[anchor] - y[j];
        min_sq = std::min(min_sq, d * d);
    }
    const double denom = 2.0 * bandwidth * bandwidth;
    for (std::size_t j = 0; j < y.size(); ++j) {
        if (j == anchor) continue;
        const double d = y[anchor] - y[j];
        weights[j] = std::exp(-(d * d - min_sq) / denom);  // shifted so max weight is 1
    }
    return weights;
}

std::size_t sample_weighted(std::span<const double> weights, Rng& rng) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw std::runtime_error("sample_weighted: all weights are zero");
    std::uniform_real_distribution<double> uniform(0.0, total);
    const double u = uniform(rng);
    double acc = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        acc += weights[j];
        if (u < acc) return j;
    }
    // numerical tail: return the last positively weighted index
    for (std::size_t j = weights.size(); j-- > 0;) {
        if (weights[j] > 0.0) return j;
    }
    return weights.size() - 1;
}

double sample_beta_symmetric(Rng& rng, double alpha) {
    std::gamma_distribution<double> gamma(alpha, 1.0);
    const double g1 = gamma(rng);
    const double g2 = gamma(rng);
    const double total = g1 + g2;
    if (total <= 0.0) return 0.5;  // both underflowed; the symmetric midpoint
    return g1 / total;
}

}  // namespace augment_detail

SyntheticSet generate_mixup(const Dataset& train, const AugmentationConfig& config) {
    config.validate();
    const std::size_t n = train.n_rows();
    if (n < 2) throw std::invalid_argument("generate_mixup: need at least 2 training rows");

    SyntheticSet synth;
    synth.features = Matrix(config.volume, train.n_features());
    synth.labels.resize(config.volume);
    synth.provenance.resize(config.volume);

    parallel::parallel_for_grain(config.volume, 512, [&](std::size_t r) {
        Rng rng = make_rng(derive_seed(config.seed, kRowStream, r));
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        const std::size_t i = pick(rng);
        const std::size_t j = pick(rng);
        const double lambda = augment_detail::sample_beta_symmetric(rng, config.mixup_alpha);
        synth.provenance[r] = {i, j, lambda};
        augment_detail::mix_rows(train.features, train.target, i, j, lambda, synth.features.row(r), synth.labels[r]);
    });
    return synth;
}

SyntheticSet generate_cmixup(const Dataset& train, const AugmentationConfig& config) {
    config.validate();
    const std::size_t n = train.n_rows();
    if (n < 2) throw std::invalid_argument("generate_cmixup: need at least 2 training rows");
    const double bandwidth =
        config.cmixup_bandwidth > 0.0 ? config.cmixup_bandwidth : stats::sample_std(train.target);
    if (!(bandwidth > 0.0)) {
        throw std::invalid_argument("generate_cmixup: bandwidth must be positive (constant targets need an explicit bandwidth)");
    }

    SyntheticSet synth;
    synth.features = Matrix(config.volume, train.n_features());
    synth.labels.resize(config.volume);
    synth.provenance.resize(config.volume);

    parallel::parallel_for_grain(config.volume, 256, [&](std::size_t r) {
        Rng rng = make_rng(derive_seed(config.seed, kRowStream, r));
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        const std::size_t anchor = pick(rng);
        const std::vector<double> weights = augment_detail::cmixup_partner_weights(train.target, anchor, bandwidth);
        const std::size_t partner = augment_detail::sample_weighted(weights, rng);
        const double lambda = augment_detail::sample_beta_symmetric(rng, config.mixup_alpha);
        synth.provenance[r] = {anchor, partner, lambda};
        augment_detail::mix_rows(train.features, train.target, anchor, partner, lambda, synth.features.row(r),
                                 synth.labels[r]);
    });
    return synth;
}

Dataset combine(const Dataset& train, const SyntheticSet& synth) {
    if (synth.n_rows() > 0 && synth.features.cols() != train.n_features()) {
        throw std::invalid_argument("combine: feature count mismatch");
    }
    if (synth.labels.size() != synth.n_rows()) throw std::invalid_argument("combine: labels/features row mismatch");

    Dataset out;
    out.feature_names = train.feature_names;
    out.target_name = train.target_name;
    out.features = Matrix(train.n_rows() + synth.n_rows(), train.n_features());
    out.target.reserve(train.n_rows() + synth.n_rows());

    for (std::size_t r = 0; r < train.n_rows(); ++r) {
        auto src = train.features.row(r);
        std::copy(src.begin(), src.end(), out.features.row(r).begin());
    }
    out.target.insert(out.target.end(), train.target.begin(), train.target.end());
    for (std::size_t r = 0; r < synth.n_rows(); ++r) {
        auto src = synth.features.row(r);
        std::copy(src.begin(), src.end(), out.features.row(train.n_rows() + r).begin());
    }
    out.target.insert(out.target.end(), synth.labels.begin(), synth.labels.end());
    return out;
}

}  // namespace augdl
