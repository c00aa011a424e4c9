#include "augdl/student.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "augdl/kernels.hpp"
#include "augdl/rng.hpp"
#include "augdl/stats.hpp"

namespace augdl {

namespace {

inline double activate(double z, StudentSpec::Activation a) {
    return a == StudentSpec::Activation::relu ? (z > 0.0 ? z : 0.0) : std::tanh(z);
}

inline double activate_grad(double z, StudentSpec::Activation a) {
    if (a == StudentSpec::Activation::relu) return z > 0.0 ? 1.0 : 0.0;
    const double t = std::tanh(z);
    return 1.0 - t * t;
}

void ensure_shape(Matrix& m, std::size_t rows, std::size_t cols) {
    if (m.rows() != rows || m.cols() != cols) m = Matrix(rows, cols);
}

// out = in^T. Plain data movement so the row-parallel matmul kernel can be
// used for the backward products as well.
void transpose_into(const Matrix& in, Matrix& out) {
    ensure_shape(out, in.cols(), in.rows());
    for (std::size_t r = 0; r < in.rows(); ++r) {
        const double* src = in.data() + r * in.cols();
        for (std::size_t c = 0; c < in.cols(); ++c) out(c, r) = src[c];
    }
}

struct AdamState {
    MlpNetwork::Gradients m;
    MlpNetwork::Gradients v;
    long step = 0;
};

// canonical Adam constants
constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

void adam_update(MlpNetwork& net, const MlpNetwork::Gradients& grads, AdamState& state, double lr) {
    ++state.step;
    const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(state.step));
    for (std::size_t l = 0; l < net.n_layers(); ++l) {
        double* w = net.weights()[l].data();
        const double* gw = grads.w[l].data();
        double* mw = state.m.w[l].data();
        double* vw = state.v.w[l].data();
        const std::size_t wn = net.weights()[l].rows() * net.weights()[l].cols();
        for (std::size_t i = 0; i < wn; ++i) {
            mw[i] = kBeta1 * mw[i] + (1.0 - kBeta1) * gw[i];
            vw[i] = kBeta2 * vw[i] + (1.0 - kBeta2) * gw[i] * gw[i];
            w[i] -= lr * (mw[i] / bc1) / (std::sqrt(vw[i] / bc2) + kAdamEps);
        }
        auto& b = net.biases()[l];
        const auto& gb = grads.b[l];
        auto& mb = state.m.b[l];
        auto& vb = state.v.b[l];
        for (std::size_t i = 0; i < b.size(); ++i) {
            mb[i] = kBeta1 * mb[i] + (1.0 - kBeta1) * gb[i];
            vb[i] = kBeta2 * vb[i] + (1.0 - kBeta2) * gb[i] * gb[i];
            b[i] -= lr * (mb[i] / bc1) / (std::sqrt(vb[i] / bc2) + kAdamEps);
        }
    }
}

struct CandidateResult {
    bool ok = false;
    MlpNetwork network;
    std::vector<EpochStats> history;
    double best_val_rmse = std::numeric_limits<double>::infinity();
};

}  // namespace

MlpNetwork::MlpNetwork(std::size_t n_inputs, const std::vector<std::size_t>& hidden,
                       StudentSpec::Activation activation, std::uint64_t seed)
    : n_inputs_(n_inputs), activation_(activation) {
    if (n_inputs == 0) throw std::invalid_argument("MlpNetwork: need at least one input");
    std::vector<std::size_t> widths;
    widths.push_back(n_inputs);
    for (std::size_t h : hidden) {
        if (h == 0) throw std::invalid_argument("MlpNetwork: zero-width hidden layer");
        widths.push_back(h);
    }
    widths.push_back(1);

    Rng rng = make_rng(seed);
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        const std::size_t fan_in = widths[l];
        const std::size_t fan_out = widths[l + 1];
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
        std::uniform_real_distribution<double> init(-limit, limit);
        Matrix w(fan_in, fan_out);
        for (std::size_t i = 0; i < fan_in; ++i) {
            for (std::size_t j = 0; j < fan_out; ++j) w(i, j) = init(rng);
        }
        weights_.push_back(std::move(w));
        biases_.emplace_back(fan_out, 0.0);
    }
}

MlpNetwork::Gradients MlpNetwork::zero_gradients() const {
    Gradients g;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        g.w.emplace_back(weights_[l].rows(), weights_[l].cols());
        g.b.emplace_back(biases_[l].size(), 0.0);
    }
    return g;
}

bool MlpNetwork::all_finite() const {
    for (const Matrix& w : weights_) {
        for (double v : w.values()) {
            if (!std::isfinite(v)) return false;
        }
    }
    for (const auto& b : biases_) {
        for (double v : b) {
            if (!std::isfinite(v)) return false;
        }
    }
    return true;
}

void MlpNetwork::forward_cached(const Matrix& x, Workspace& ws) const {
    const std::size_t batch = x.rows();
    const std::size_t layers = weights_.size();
    ws.activations.resize(layers + 1);
    ws.zs.resize(layers);
    ws.activations[0] = x;
    for (std::size_t l = 0; l < layers; ++l) {
        const Matrix& w = weights_[l];
        const std::size_t width = w.cols();
        ensure_shape(ws.zs[l], batch, width);
        kernels::matmul(ws.activations[l].data(), w.data(), ws.zs[l].data(), batch, w.rows(), width);
        double* z = ws.zs[l].data();
        const double* bias = biases_[l].data();
        for (std::size_t r = 0; r < batch; ++r) {
            double* zr = z + r * width;
            for (std::size_t j = 0; j < width; ++j) zr[j] += bias[j];
        }
        if (l + 1 < layers) {
            ensure_shape(ws.activations[l + 1], batch, width);
            double* a = ws.activations[l + 1].data();
            const std::size_t count = batch * width;
            for (std::size_t i = 0; i < count; ++i) a[i] = activate(z[i], activation_);
        } else {
            ws.activations[l + 1] = ws.zs[l];  // linear output
        }
    }
}

std::vector<double> MlpNetwork::forward(const Matrix& x) const {
    if (x.cols() != n_inputs_) throw std::invalid_argument("MlpNetwork::forward: feature count mismatch");
    Workspace ws;
    forward_cached(x, ws);
    const Matrix& out = ws.activations.back();
    return {out.values().begin(), out.values().end()};
}

double MlpNetwork::loss_and_gradients(const Matrix& x, std::span<const double> y, Gradients& grads,
                                      Workspace& ws) const {
    const std::size_t batch = x.rows();
    if (batch == 0 || batch != y.size()) throw std::invalid_argument("loss_and_gradients: bad batch");
    const std::size_t layers = weights_.size();

    forward_cached(x, ws);
    ws.deltas.resize(layers);

    // output delta: d(mean squared error)/d(output)
    ensure_shape(ws.deltas[layers - 1], batch, 1);
    double loss = 0.0;
    {
        const Matrix& out = ws.activations[layers];
        double* delta = ws.deltas[layers - 1].data();
        for (std::size_t i = 0; i < batch; ++i) {
            const double diff = out(i, 0) - y[i];
            loss += diff * diff;
            delta[i] = 2.0 * diff / static_cast<double>(batch);
        }
        loss /= static_cast<double>(batch);
    }

    for (std::size_t l = layers; l-- > 0;) {
        const Matrix& delta = ws.deltas[l];
        const Matrix& a_prev = ws.activations[l];
        // dW = a_prev^T * delta ; db = column sums of delta
        transpose_into(a_prev, ws.scratch_a);
        kernels::matmul(ws.scratch_a.data(), delta.data(), grads.w[l].data(), a_prev.cols(), batch, delta.cols());
        auto& gb = grads.b[l];
        std::fill(gb.begin(), gb.end(), 0.0);
        for (std::size_t i = 0; i < batch; ++i) {
            for (std::size_t j = 0; j < gb.size(); ++j) gb[j] += delta(i, j);
        }
        if (l == 0) break;
        // delta_prev = (delta * W^T) .* act'(z_prev)
        const Matrix& w = weights_[l];
        transpose_into(w, ws.scratch_b);
        ensure_shape(ws.deltas[l - 1], batch, w.rows());
        kernels::matmul(delta.data(), ws.scratch_b.data(), ws.deltas[l - 1].data(), batch, w.cols(), w.rows());
        double* dprev = ws.deltas[l - 1].data();
        const double* z = ws.zs[l - 1].data();
        const std::size_t count = batch * w.rows();
        for (std::size_t i = 0; i < count; ++i) dprev[i] *= activate_grad(z[i], activation_);
    }
    return loss;
}

TrainedStudent fit_student(const Dataset& train, const StudentSpec& spec) {
    const std::size_t n = train.n_rows();
    if (n == 0) throw std::invalid_argument("fit_student: empty training data");
    if (spec.max_epochs < 1) throw std::invalid_argument("fit_student: max_epochs must be >= 1");
    if (spec.architectures.empty()) throw std::invalid_argument("fit_student: no architecture candidates");
    if (!(spec.validation_fraction > 0.0 && spec.validation_fraction < 1.0)) {
        throw std::invalid_argument("fit_student: validation_fraction must be in (0, 1)");
    }
    if (spec.batch_size < 1) throw std::invalid_argument("fit_student: batch_size must be >= 1");

    TrainedStudent result;
    result.input_standardizer.fit(train.features);
    const Matrix x_all = result.input_standardizer.transform(train.features);

    result.target_shift = stats::mean(train.target);
    result.target_scale = stats::sample_std(train.target);
    if (result.target_scale == 0.0) result.target_scale = 1.0;
    std::vector<double> y_norm(n);
    for (std::size_t i = 0; i < n; ++i) y_norm[i] = (train.target[i] - result.target_shift) / result.target_scale;

    // validation split from a seeded permutation; a 1-row set validates on itself
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rng split_rng = make_rng(derive_seed(spec.seed, 0x51));
    std::shuffle(perm.begin(), perm.end(), split_rng);
    std::size_t n_val =
        n >= 2
            ? std::clamp<std::size_t>(
                  static_cast<std::size_t>(std::llround(spec.validation_fraction * static_cast<double>(n))), 1, n - 1)
            : 1;
    std::vector<std::size_t> val_idx(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_val));
    std::vector<std::size_t> fit_idx;
    if (n >= 2) {
        fit_idx.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_val), perm.end());
    } else {
        fit_idx = val_idx;
    }
    result.validation_indices = val_idx;

    Matrix x_val(val_idx.size(), x_all.cols());
    std::vector<double> y_val_raw(val_idx.size());
    for (std::size_t i = 0; i < val_idx.size(); ++i) {
        auto src = x_all.row(val_idx[i]);
        std::copy(src.begin(), src.end(), x_val.row(i).begin());
        y_val_raw[i] = train.target[val_idx[i]];
    }

    const std::size_t batch_size = std::min<std::size_t>(spec.batch_size, fit_idx.size());

    std::vector<CandidateResult> candidates(spec.architectures.size());
    for (std::size_t cand = 0; cand < spec.architectures.size(); ++cand) {
        CandidateResult& cr = candidates[cand];
        MlpNetwork net(train.n_features(), spec.architectures[cand], spec.activation,
                       derive_seed(spec.seed, 0x52, cand));
        MlpNetwork::Gradients grads = net.zero_gradients();
        AdamState adam{net.zero_gradients(), net.zero_gradients(), 0};
        MlpNetwork::Workspace ws;
        Rng shuffle_rng = make_rng(derive_seed(spec.seed, 0x53, cand));
        std::vector<std::size_t> order = fit_idx;

        MlpNetwork best_net = net;
        double best_val = std::numeric_limits<double>::infinity();
        int epochs_since_best = 0;
        bool diverged = false;

        Matrix x_batch;
        std::vector<double> y_batch;
        for (int epoch = 0; epoch < spec.max_epochs && !diverged; ++epoch) {
            std::shuffle(order.begin(), order.end(), shuffle_rng);
            double epoch_sse = 0.0;
            for (std::size_t start = 0; start < order.size(); start += batch_size) {
                const std::size_t bn = std::min(batch_size, order.size() - start);
                ensure_shape(x_batch, bn, x_all.cols());
                y_batch.resize(bn);
                for (std::size_t i = 0; i < bn; ++i) {
                    auto src = x_all.row(order[start + i]);
                    std::copy(src.begin(), src.end(), x_batch.row(i).begin());
                    y_batch[i] = y_norm[order[start + i]];
                }
                const double loss = net.loss_and_gradients(x_batch, y_batch, grads, ws);
                if (!std::isfinite(loss)) {
                    diverged = true;
                    break;
                }
                epoch_sse += loss * static_cast<double>(bn);
                adam_update(net, grads, adam, spec.learning_rate);
            }
            if (diverged) break;

            const double train_rmse =
                std::sqrt(epoch_sse / static_cast<double>(order.size())) * result.target_scale;
            std::vector<double> val_pred = net.forward(x_val);
            for (double& v : val_pred) v = v * result.target_scale + result.target_shift;
            const double val_rmse = rmse(val_pred, y_val_raw);
            if (!std::isfinite(val_rmse)) {
                diverged = true;
                break;
            }
            cr.history.push_back({train_rmse, val_rmse});

            if (val_rmse < best_val) {
                best_val = val_rmse;
                best_net = net;
                epochs_since_best = 0;
            } else {
                ++epochs_since_best;
            }
            if (epochs_since_best >= spec.patience) break;
        }

        if (!diverged && std::isfinite(best_val)) {
            cr.ok = true;
            cr.network = std::move(best_net);
            cr.best_val_rmse = best_val;
        }
    }

    std::size_t chosen = candidates.size();
    for (std::size_t cand = 0; cand < candidates.size(); ++cand) {
        if (!candidates[cand].ok) continue;
        if (chosen == candidates.size() || candidates[cand].best_val_rmse < candidates[chosen].best_val_rmse) {
            chosen = cand;
        }
    }
    if (chosen == candidates.size()) throw std::runtime_error("fit_student: all architecture candidates diverged");

    result.architecture = spec.architectures[chosen];
    result.network = std::move(candidates[chosen].network);
    result.history = std::move(candidates[chosen].history);
    result.best_val_rmse = candidates[chosen].best_val_rmse;
    return result;
}

std::vector<double> student_predict(const TrainedStudent& model, const Matrix& features) {
    if (features.cols() != model.network.n_inputs()) {
        throw std::invalid_argument("student_predict: feature count mismatch");
    }
    const Matrix xs = model.input_standardizer.transform(features);
    std::vector<double> out = model.network.forward(xs);
    for (double& v : out) v = v * model.target_scale + model.target_shift;
    return out;
}

std::string history_csv(const std::vector<EpochStats>& history) {
    std::string text = "epoch,train_rmse,val_rmse\n";
    char buffer[96];
    for (std::size_t e = 0; e < history.size(); ++e) {
        std::snprintf(buffer, sizeof(buffer), "%zu,%.17g,%.17g\n", e + 1, history[e].train_rmse,
                      history[e].val_rmse);
        text += buffer;
    }
    return text;
}

void write_history_csv(const TrainedStudent& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << history_csv(model.history);
}

}  // namespace augdl
