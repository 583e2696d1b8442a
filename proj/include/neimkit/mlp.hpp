// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "neimkit/dense_matrix.hpp"

namespace neimkit {

enum class Activation { Tanh };

/// Architecture and full-batch Adam training schedule for one network.
/// lr_decay_every == 0 means "epochs / 5" (at least 1).
struct MlpConfig {
    std::vector<std::size_t> layer_sizes;  // input, hidden..., output
    Activation activation = Activation::Tanh;
    std::uint64_t seed = 0;
    std::size_t epochs = 1;
    double learning_rate = 1e-3;
    double lr_decay_factor = 0.5;
    std::size_t lr_decay_every = 0;

    void validate() const;  // throws ConfigError
    std::size_t decay_period() const;
};

/// Feedforward network: tanh on hidden layers, affine output layer.
/// Immutable once trained; forward evaluation is re-entrant.
class Mlp {
  public:
    struct Layer {
        DenseMatrix w;  // out x in
        Vector b;
    };

    Mlp() = default;
    explicit Mlp(std::vector<Layer> layers, Activation activation = Activation::Tanh);

    Vector forward(std::span<const double> x) const;

    std::size_t input_size() const { return layers_.front().w.cols(); }
    std::size_t output_size() const { return layers_.back().w.rows(); }
    const std::vector<Layer>& layers() const { return layers_; }
    Activation activation() const { return activation_; }
    std::size_t parameter_count() const;

  private:
    std::vector<Layer> layers_;
    Activation activation_ = Activation::Tanh;

    friend struct MlpTrainer;
};

/// Training samples with per-sample nonnegative weights.
struct WeightedDataset {
    std::vector<Vector> inputs;
    std::vector<Vector> targets;
    Vector sample_weights;

    void validate() const;  // throws DataError
};

/// Glorot-uniform weights from the seeded generator, zero biases.
/// Bit-deterministic for a fixed seed.
Mlp mlp_init(const MlpConfig& config);

/// All-zero weights and biases (test hook; the forward map is identically 0).
Mlp mlp_init_zero(const std::vector<std::size_t>& layer_sizes);

struct LossGrad {
    double loss = 0.0;
    std::vector<Mlp::Layer> grads;  // same shapes as the network
};

/// loss = sum_i w_i ||net(x_i) - z_i||_2^2 and its exact gradient.
LossGrad mlp_loss_and_grad(const Mlp& net, const WeightedDataset& data);

struct TrainResult {
    Mlp net;
    double final_loss = 0.0;
    Vector loss_history;  // loss before each epoch's update
};

/// Full-batch Adam (beta1=0.9, beta2=0.999, eps=1e-8) with the config's
/// step decay. Throws DivergenceError naming the epoch if the loss goes
/// non-finite.
TrainResult mlp_train(Mlp net, const WeightedDataset& data, const MlpConfig& config);

}  // namespace neimkit
