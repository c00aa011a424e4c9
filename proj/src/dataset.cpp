#include "augdl/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "augdl/errors.hpp"
#include "augdl/rng.hpp"

namespace augdl {

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    std::size_t end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

bool parse_cell(const std::string& cell, double& out) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

Dataset take_rows(const Dataset& data, const std::vector<std::size_t>& indices) {
    Dataset out;
    out.feature_names = data.feature_names;
    out.target_name = data.target_name;
    out.features = Matrix(indices.size(), data.n_features());
    out.target.resize(indices.size());
    for (std::size_t r = 0; r < indices.size(); ++r) {
        auto src = data.features.row(indices[r]);
        std::copy(src.begin(), src.end(), out.features.row(r).begin());
        out.target[r] = data.target[indices[r]];
    }
    return out;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const std::string& target_column, MissingPolicy policy) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open CSV file: " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw data_error("CSV file is empty: " + path.string());
    const std::vector<std::string> header = split_fields(line);
    if (header.empty()) throw data_error("CSV header row is empty: " + path.string());

    std::unordered_set<std::string> seen;
    for (const auto& name : header) {
        if (!seen.insert(name).second) throw data_error("duplicate column name in CSV header: " + name);
    }

    const auto target_it = std::find(header.begin(), header.end(), target_column);
    if (target_it == header.end()) {
        throw data_error("target column '" + target_column + "' not found in CSV header");
    }
    const std::size_t target_idx = static_cast<std::size_t>(target_it - header.begin());

    Dataset data;
    data.target_name = target_column;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c != target_idx) data.feature_names.push_back(header[c]);
    }

    std::vector<double> row_values(data.feature_names.size());
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_fields(line);
        if (cells.size() != header.size()) {
            throw data_error("CSV row " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                             " fields, expected " + std::to_string(header.size()));
        }
        bool missing = false;
        double target_value = 0.0;
        std::size_t feature_slot = 0;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (cells[c].empty()) {
                missing = true;
                if (policy == MissingPolicy::error) {
                    throw data_error("missing value at CSV row " + std::to_string(line_no) + ", column '" + header[c] +
                                     "'");
                }
                continue;
            }
            double value = 0.0;
            if (!parse_cell(cells[c], value)) {
                throw data_error("non-numeric value '" + cells[c] + "' at CSV row " + std::to_string(line_no) +
                                 ", column '" + header[c] + "' (categorical columns are not supported)");
            }
            if (!std::isfinite(value)) {
                throw data_error("non-finite value at CSV row " + std::to_string(line_no) + ", column '" + header[c] +
                                 "'");
            }
            if (c == target_idx) {
                target_value = value;
            } else {
                row_values[feature_slot++] = value;
            }
        }
        if (missing) continue;  // drop_row
        data.features.append_row(row_values);
        data.target.push_back(target_value);
    }

    if (data.n_rows() == 0) throw data_error("no usable rows in CSV file: " + path.string());
    return data;
}

ColumnStats compute_column_stats(const Matrix& features) {
    const std::size_t n = features.rows();
    const std::size_t p = features.cols();
    if (n == 0) throw data_error("compute_column_stats: empty dataset");

    ColumnStats stats;
    stats.means.assign(p, 0.0);
    stats.stds.assign(p, 0.0);
    for (std::size_t c = 0; c < p; ++c) {
        double sum = 0.0;
        for (std::size_t r = 0; r < n; ++r) sum += features(r, c);
        const double mean = sum / static_cast<double>(n);
        stats.means[c] = mean;
        if (n > 1) {
            double ss = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                const double d = features(r, c) - mean;
                ss += d * d;
            }
            stats.stds[c] = std::sqrt(std::max(0.0, ss / static_cast<double>(n - 1)));
        }
    }
    return stats;
}

ColumnStats compute_column_stats(const Dataset& data) { return compute_column_stats(data.features); }

std::pair<Dataset, Dataset> split(const Dataset& data, const SplitSpec& spec) {
    const std::size_t n = data.n_rows();
    if (n < 2) throw data_error("split: need at least 2 rows");
    if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0)) {
        throw std::invalid_argument("split: test_fraction must be in (0, 1)");
    }

    // round-half-up, then clamp so both partitions are non-empty
    std::size_t n_test = static_cast<std::size_t>(std::floor(spec.test_fraction * static_cast<double>(n) + 0.5));
    n_test = std::clamp<std::size_t>(n_test, 1, n - 1);

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng = make_rng(spec.seed);
    std::shuffle(perm.begin(), perm.end(), rng);

    const std::vector<std::size_t> test_idx(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_test));
    const std::vector<std::size_t> train_idx(perm.begin() + static_cast<std::ptrdiff_t>(n_test), perm.end());
    return {take_rows(data, train_idx), take_rows(data, test_idx)};
}

Dataset subsample(const Dataset& data, std::size_t n, std::uint64_t seed) {
    const std::size_t total = data.n_rows();
    if (n < 1 || n > total) {
        throw data_error("subsample: requested " + std::to_string(n) + " rows from " + std::to_string(total));
    }
    // partial Fisher-Yates: the first n slots end up holding the sample
    std::vector<std::size_t> perm(total);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng = make_rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, total - 1);
        std::swap(perm[i], perm[pick(rng)]);
    }
    perm.resize(n);
    return take_rows(data, perm);
}

void Standardizer::fit(const Matrix& features) {
    if (features.rows() == 0) throw data_error("Standardizer::fit: empty training data");
    const ColumnStats stats = compute_column_stats(features);
    shift_ = stats.means;
    scale_ = stats.stds;
    for (double& s : scale_) {
        if (s == 0.0) s = 1.0;
    }
    fitted_ = true;
}

Matrix Standardizer::transform(const Matrix& features) const {
    if (!fitted_) throw std::logic_error("Standardizer::transform called before fit");
    if (features.cols() != shift_.size()) throw std::invalid_argument("Standardizer::transform: feature count mismatch");
    Matrix out = features;
    for (std::size_t r = 0; r < out.rows(); ++r) {
        auto row = out.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) row[c] = (row[c] - shift_[c]) / scale_[c];
    }
    return out;
}

Matrix Standardizer::inverse(const Matrix& features) const {
    if (!fitted_) throw std::logic_error("Standardizer::inverse called before fit");
    if (features.cols() != shift_.size()) throw std::invalid_argument("Standardizer::inverse: feature count mismatch");
    Matrix out = features;
    for (std::size_t r = 0; r < out.rows(); ++r) {
        auto row = out.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) row[c] = row[c] * scale_[c] + shift_[c];
    }
    return out;
}

void Standardizer::transform_row_inplace(std::span<double> row) const {
    if (!fitted_) throw std::logic_error("Standardizer::transform_row_inplace called before fit");
    if (row.size() != shift_.size()) throw std::invalid_argument("Standardizer: feature count mismatch");
    for (std::size_t c = 0; c < row.size(); ++c) row[c] = (row[c] - shift_[c]) / scale_[c];
}

Standardizer fit_standardizer(const Dataset& train) {
    Standardizer s;
    s.fit(train.features);
    return s;
}

Dataset apply_standardizer(const Standardizer& s, const Dataset& data) {
    Dataset out = data;
    out.features = s.transform(data.features);
    return out;
}

}  // namespace augdl
