#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "augdl/matrix.hpp"

namespace augdl {

/// A numeric regression dataset: feature matrix plus target vector.
/// Immutable by convention after construction; operations return new values.
struct Dataset {
    Matrix features;
    std::vector<double> target;
    std::vector<std::string> feature_names;
    std::string target_name;

    std::size_t n_rows() const { return features.rows(); }
    std::size_t n_features() const { return features.cols(); }
};

enum class MissingPolicy { drop_row, error };

/// Loads a comma-separated UTF-8 file with a header row. The target column is
/// removed from the features. Empty cells are missing; under drop_row the row
/// is excluded, under error the load fails. Non-numeric cells are rejected.
Dataset load_csv(const std::filesystem::path& path, const std::string& target_column,
                 MissingPolicy policy = MissingPolicy::drop_row);

/// Per-column mean and sample standard deviation (n-1 denominator; 0 when a
/// column is constant or has a single row).
struct ColumnStats {
    std::vector<double> means;
    std::vector<double> stds;
};

ColumnStats compute_column_stats(const Matrix& features);
ColumnStats compute_column_stats(const Dataset& data);

struct SplitSpec {
    double test_fraction = 0.2;
    std::uint64_t seed = 0;
};

/// Seed-deterministic random partition into (train, test). Test size is
/// round-half-up of test_fraction * n_rows, clamped so both sides are
/// non-empty.
std::pair<Dataset, Dataset> split(const Dataset& data, const SplitSpec& spec);

/// n distinct rows chosen uniformly without replacement, deterministic given
/// seed.
Dataset subsample(const Dataset& data, std::size_t n, std::uint64_t seed);

/// Per-feature shift/scale transform fitted on training data. Zero-variance
/// columns get scale 1 so they pass through shifted to zero.
class Standardizer {
public:
    void fit(const Matrix& features);
    Matrix transform(const Matrix& features) const;
    Matrix inverse(const Matrix& features) const;
    void transform_row_inplace(std::span<double> row) const;

    bool fitted() const { return fitted_; }
    std::size_t n_features() const { return shift_.size(); }
    const std::vector<double>& shift() const { return shift_; }
    const std::vector<double>& scale() const { return scale_; }

private:
    std::vector<double> shift_;
    std::vector<double> scale_;
    bool fitted_ = false;
};

Standardizer fit_standardizer(const Dataset& train);
Dataset apply_standardizer(const Standardizer& s, const Dataset& data);

}  // namespace augdl
