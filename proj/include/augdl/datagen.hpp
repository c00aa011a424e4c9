#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "augdl/dataset.hpp"

namespace augdl {

/// Synthetic ground-truth regression generators. Real benchmark datasets are
/// not bundled; these provide deterministic substrates for experiments and
/// verification.
struct GeneratorSpec {
    enum class Kind { friedman1, linear, piecewise };

    Kind kind = Kind::friedman1;
    std::size_t n_rows = 0;
    double noise_sd = 0.0;
    std::uint64_t seed = 0;

    // linear: y = dot(coefficients, x)
    std::vector<double> coefficients;

    // piecewise: continuous hinge with a slope change at the breakpoint
    double breakpoint = 0.5;
    double slope_left = 4.0;
    double slope_right = -4.0;
};

/// Deterministic generation: features uniform on [0,1], target equals the
/// noiseless ground truth plus Gaussian noise of the requested sd.
Dataset generate(const GeneratorSpec& spec);

/// Noiseless target function value at a feature row.
double ground_truth(const GeneratorSpec& spec, std::span<const double> x);

GeneratorSpec::Kind generator_kind_from_name(std::string_view name);
std::string generator_name(GeneratorSpec::Kind kind);

}  // namespace augdl
