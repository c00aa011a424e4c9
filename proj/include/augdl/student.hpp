#pragma once

#include <cstdint>
#include <vector>

#include "augdl/dataset.hpp"
#include "augdl/matrix.hpp"

namespace augdl {

/// Multilayer-perceptron regressor trained with Adam, with a fixed list of
/// architecture candidates standing in for an automated DL search.
struct StudentSpec {
    enum class Activation { relu, tanh };

    std::vector<std::vector<std::size_t>> architectures{{64}, {64, 32}, {128, 64}};
    Activation activation = Activation::relu;
    int max_epochs = 200;
    std::size_t batch_size = 32;
    double learning_rate = 1e-3;
    int patience = 20;
    double validation_fraction = 0.1;
    std::uint64_t seed = 0;
};

/// Feedforward network: hidden layers with the configured activation, linear
/// scalar output. Weight layout is fan_in x fan_out per layer.
class MlpNetwork {
public:
    struct Gradients {
        std::vector<Matrix> w;
        std::vector<std::vector<double>> b;
    };
    struct Workspace {
        std::vector<Matrix> activations;
        std::vector<Matrix> zs;
        std::vector<Matrix> deltas;
        Matrix scratch_a;  // transposed activations / weights for the backward matmuls
        Matrix scratch_b;
    };

    MlpNetwork() = default;
    /// He-style fan-in uniform initialization, seed-deterministic.
    MlpNetwork(std::size_t n_inputs, const std::vector<std::size_t>& hidden, StudentSpec::Activation activation,
               std::uint64_t seed);

    /// Forward pass; returns one output per input row.
    std::vector<double> forward(const Matrix& x) const;

    /// Mean-squared-error loss over the batch plus gradients of every weight
    /// and bias. Workspace buffers are reused across calls.
    double loss_and_gradients(const Matrix& x, std::span<const double> y, Gradients& grads, Workspace& ws) const;

    Gradients zero_gradients() const;

    std::vector<Matrix>& weights() { return weights_; }
    const std::vector<Matrix>& weights() const { return weights_; }
    std::vector<std::vector<double>>& biases() { return biases_; }
    const std::vector<std::vector<double>>& biases() const { return biases_; }
    std::size_t n_inputs() const { return n_inputs_; }
    std::size_t n_layers() const { return weights_.size(); }
    StudentSpec::Activation activation() const { return activation_; }
    bool all_finite() const;

private:
    void forward_cached(const Matrix& x, Workspace& ws) const;

    std::size_t n_inputs_ = 0;
    StudentSpec::Activation activation_ = StudentSpec::Activation::relu;
    std::vector<Matrix> weights_;
    std::vector<std::vector<double>> biases_;
};

struct EpochStats {
    double train_rmse = 0.0;
    double val_rmse = 0.0;
};

struct TrainedStudent {
    std::vector<std::size_t> architecture;
    MlpNetwork network;
    Standardizer input_standardizer;
    double target_shift = 0.0;
    double target_scale = 1.0;
    std::vector<EpochStats> history;
    double best_val_rmse = 0.0;
    /// Rows of the fitting data that served as the early-stopping validation
    /// split (indices into the Dataset passed to fit_student).
    std::vector<std::size_t> validation_indices;
};

/// Trains every architecture candidate with Adam + early stopping and keeps
/// the one with the best validation RMSE (ties by declaration order).
/// Deterministic given spec.seed. Candidates whose loss turns non-finite are
/// dropped; if every candidate diverges an error is thrown.
TrainedStudent fit_student(const Dataset& train, const StudentSpec& spec);

std::vector<double> student_predict(const TrainedStudent& model, const Matrix& features);

/// Training history as CSV text with an "epoch,train_rmse,val_rmse" header.
std::string history_csv(const std::vector<EpochStats>& history);
void write_history_csv(const TrainedStudent& model, const std::filesystem::path& path);

}  // namespace augdl
