#include "augdl/datagen.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "augdl/rng.hpp"

namespace augdl {

namespace {

std::size_t feature_count(const GeneratorSpec& spec) {
    switch (spec.kind) {
        case GeneratorSpec::Kind::friedman1:
            // 5 informative + 5 irrelevant columns
            return 10;
        case GeneratorSpec::Kind::linear:
            return spec.coefficients.size();
        case GeneratorSpec::Kind::piecewise:
            return 1;
    }
    throw std::invalid_argument("generate: unknown generator kind");
}

void validate(const GeneratorSpec& spec) {
    if (spec.n_rows < 1) throw std::invalid_argument("generate: n_rows must be >= 1");
    if (spec.noise_sd < 0.0) throw std::invalid_argument("generate: noise_sd must be >= 0");
    if (spec.kind == GeneratorSpec::Kind::linear && spec.coefficients.empty()) {
        throw std::invalid_argument("generate: linear generator needs at least one coefficient");
    }
    if (spec.kind == GeneratorSpec::Kind::piecewise && !std::isfinite(spec.breakpoint)) {
        throw std::invalid_argument("generate: piecewise breakpoint must be finite");
    }
}

}  // namespace

double ground_truth(const GeneratorSpec& spec, std::span<const double> x) {
    switch (spec.kind) {
        case GeneratorSpec::Kind::friedman1: {
            if (x.size() < 5) throw std::invalid_argument("ground_truth: friedman1 needs >= 5 features");
            return 10.0 * std::sin(std::numbers::pi * x[0] * x[1]) + 20.0 * (x[2] - 0.5) * (x[2] - 0.5) +
                   10.0 * x[3] + 5.0 * x[4];
        }
        case GeneratorSpec::Kind::linear: {
            if (x.size() != spec.coefficients.size()) {
                throw std::invalid_argument("ground_truth: feature count does not match coefficients");
            }
            double acc = 0.0;
            for (std::size_t c = 0; c < x.size(); ++c) acc += spec.coefficients[c] * x[c];
            return acc;
        }
        case GeneratorSpec::Kind::piecewise: {
            if (x.size() != 1) throw std::invalid_argument("ground_truth: piecewise takes one feature");
            const double d = x[0] - spec.breakpoint;
            return d < 0.0 ? spec.slope_left * d : spec.slope_right * d;
        }
    }
    throw std::invalid_argument("ground_truth: unknown generator kind");
}

Dataset generate(const GeneratorSpec& spec) {
    validate(spec);
    const std::size_t p = feature_count(spec);

    Dataset data;
    data.features = Matrix(spec.n_rows, p);
    data.target.resize(spec.n_rows);
    data.feature_names.reserve(p);
    for (std::size_t c = 0; c < p; ++c) data.feature_names.push_back("x" + std::to_string(c + 1));
    data.target_name = "y";

    Rng rng = make_rng(spec.seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 1.0);

    for (std::size_t r = 0; r < spec.n_rows; ++r) {
        auto row = data.features.row(r);
        for (std::size_t c = 0; c < p; ++c) row[c] = uniform(rng);
        double y = ground_truth(spec, row);
        if (spec.noise_sd > 0.0) y += spec.noise_sd * noise(rng);
        data.target[r] = y;
    }
    return data;
}

GeneratorSpec::Kind generator_kind_from_name(std::string_view name) {
    if (name == "friedman1") return GeneratorSpec::Kind::friedman1;
    if (name == "linear") return GeneratorSpec::Kind::linear;
    if (name == "piecewise") return GeneratorSpec::Kind::piecewise;
    throw std::invalid_argument("unknown generator: " + std::string(name));
}

std::string generator_name(GeneratorSpec::Kind kind) {
    switch (kind) {
        case GeneratorSpec::Kind::friedman1: return "friedman1";
        case GeneratorSpec::Kind::linear: return "linear";
        case GeneratorSpec::Kind::piecewise: return "piecewise";
    }
    return "unknown";
}

}  // namespace augdl
