// SPDX-License-Identifier: Apache-2.0
#include "neimkit/mlp.hpp"

#include <cmath>
#include <random>
#include <string>

#include "neimkit/errors.hpp"

namespace neimkit {

namespace {

// Uniform double in [0, 1) from the top 53 bits of the generator output,
// independent of the standard library's distribution implementation.
double next_unit(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

void MlpConfig::validate() const {
    if (layer_sizes.size() < 3) {
        throw ConfigError("MlpConfig: need at least one hidden layer");
    }
    for (std::size_t s : layer_sizes) {
        if (s == 0) throw ConfigError("MlpConfig: zero layer size");
    }
    if (epochs < 1) throw ConfigError("MlpConfig: epochs must be >= 1");
    if (!(learning_rate > 0.0)) throw ConfigError("MlpConfig: learning_rate must be > 0");
    if (!(lr_decay_factor > 0.0)) throw ConfigError("MlpConfig: lr_decay_factor must be > 0");
}

std::size_t MlpConfig::decay_period() const {
    if (lr_decay_every > 0) return lr_decay_every;
    return std::max<std::size_t>(1, epochs / 5);
}

Mlp::Mlp(std::vector<Layer> layers, Activation activation)
    : layers_(std::move(layers)), activation_(activation) {
    if (layers_.empty()) throw ConfigError("Mlp: no layers");
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        if (layers_[l].b.size() != layers_[l].w.rows()) {
            throw ConfigError("Mlp: bias size mismatch in layer " + std::to_string(l));
        }
        if (l > 0 && layers_[l].w.cols() != layers_[l - 1].w.rows()) {
            throw ConfigError("Mlp: layer shapes do not chain at layer " + std::to_string(l));
        }
    }
}

Vector Mlp::forward(std::span<const double> x) const {
    if (x.size() != input_size()) throw DataError("Mlp::forward: input size mismatch");
    Vector a(x.begin(), x.end());
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        Vector z = matvec(layers_[l].w, a);
        for (std::size_t i = 0; i < z.size(); ++i) z[i] += layers_[l].b[i];
        if (l + 1 < layers_.size()) {
            for (double& v : z) v = std::tanh(v);
        }
        a = std::move(z);
    }
    return a;
}

std::size_t Mlp::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers_) n += l.w.data().size() + l.b.size();
    return n;
}

Mlp mlp_init(const MlpConfig& config) {
    config.validate();
    std::mt19937_64 gen(config.seed);
    std::vector<Mlp::Layer> layers;
    for (std::size_t l = 0; l + 1 < config.layer_sizes.size(); ++l) {
        const std::size_t fan_in = config.layer_sizes[l];
        const std::size_t fan_out = config.layer_sizes[l + 1];
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        Mlp::Layer layer;
        layer.w = DenseMatrix(fan_out, fan_in);
        for (std::size_t i = 0; i < fan_out; ++i) {
            for (std::size_t j = 0; j < fan_in; ++j) {
                layer.w(i, j) = (2.0 * next_unit(gen) - 1.0) * limit;
            }
        }
        layer.b.assign(fan_out, 0.0);
        layers.push_back(std::move(layer));
    }
    return Mlp(std::move(layers), config.activation);
}

Mlp mlp_init_zero(const std::vector<std::size_t>& layer_sizes) {
    MlpConfig probe;
    probe.layer_sizes = layer_sizes;
    probe.validate();
    std::vector<Mlp::Layer> layers;
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        Mlp::Layer layer;
        layer.w = DenseMatrix(layer_sizes[l + 1], layer_sizes[l]);
        layer.b.assign(layer_sizes[l + 1], 0.0);
        layers.push_back(std::move(layer));
    }
    return Mlp(std::move(layers));
}

void WeightedDataset::validate() const {
    if (inputs.empty()) throw DataError("WeightedDataset: empty");
    if (inputs.size() != targets.size() || inputs.size() != sample_weights.size()) {
        throw DataError("WeightedDataset: inputs/targets/weights counts differ");
    }
    bool any_positive = false;
    for (double w : sample_weights) {
        if (w < 0.0 || !std::isfinite(w)) throw DataError("WeightedDataset: invalid weight");
        if (w > 0.0) any_positive = true;
    }
    if (!any_positive) throw DataError("WeightedDataset: all sample weights are zero");
}

LossGrad mlp_loss_and_grad(const Mlp& net, const WeightedDataset& data) {
    data.validate();
    const auto& layers = net.layers();
    const std::size_t depth = layers.size();

    LossGrad out;
    out.grads.resize(depth);
    for (std::size_t l = 0; l < depth; ++l) {
        out.grads[l].w = DenseMatrix(layers[l].w.rows(), layers[l].w.cols());
        out.grads[l].b.assign(layers[l].b.size(), 0.0);
    }

    std::vector<Vector> activations(depth + 1);
    for (std::size_t s = 0; s < data.inputs.size(); ++s) {
        const double w = data.sample_weights[s];
        if (w == 0.0) continue;

        activations[0].assign(data.inputs[s].begin(), data.inputs[s].end());
        for (std::size_t l = 0; l < depth; ++l) {
            Vector z = matvec(layers[l].w, activations[l]);
            for (std::size_t i = 0; i < z.size(); ++i) z[i] += layers[l].b[i];
            if (l + 1 < depth) {
                for (double& v : z) v = std::tanh(v);
            }
            activations[l + 1] = std::move(z);
        }

        const Vector& y = activations[depth];
        Vector delta(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double e = y[i] - data.targets[s][i];
            out.loss += w * e * e;
            delta[i] = 2.0 * w * e;
        }

        for (std::size_t l = depth; l-- > 0;) {
            for (std::size_t i = 0; i < layers[l].w.rows(); ++i) {
                out.grads[l].b[i] += delta[i];
                axpy(delta[i], activations[l], out.grads[l].w.row(i));
            }
            if (l == 0) break;
            Vector prev = matvec_transposed(layers[l].w, delta);
            // tanh'(z) = 1 - tanh(z)^2, and activations[l] already holds tanh(z)
            for (std::size_t i = 0; i < prev.size(); ++i) {
                prev[i] *= 1.0 - activations[l][i] * activations[l][i];
            }
            delta = std::move(prev);
        }
    }
    return out;
}

TrainResult mlp_train(Mlp net, const WeightedDataset& data, const MlpConfig& config) {
    config.validate();
    data.validate();

    constexpr double beta1 = 0.9;
    constexpr double beta2 = 0.999;
    constexpr double eps = 1e-8;
    const std::size_t period = config.decay_period();

    std::vector<Mlp::Layer> m_state(net.layers().size());
    std::vector<Mlp::Layer> v_state(net.layers().size());
    for (std::size_t l = 0; l < net.layers().size(); ++l) {
        m_state[l].w = DenseMatrix(net.layers()[l].w.rows(), net.layers()[l].w.cols());
        m_state[l].b.assign(net.layers()[l].b.size(), 0.0);
        v_state[l] = m_state[l];
    }

    TrainResult result;
    result.loss_history.reserve(config.epochs);
    double lr = config.learning_rate;
    double b1t = 1.0, b2t = 1.0;

    std::vector<Mlp::Layer> layers = net.layers();
    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        if (epoch > 1 && (epoch - 1) % period == 0) lr *= config.lr_decay_factor;

        const LossGrad lg = mlp_loss_and_grad(Mlp(layers, net.activation()), data);
        if (!std::isfinite(lg.loss)) {
            throw DivergenceError("mlp_train: non-finite loss at epoch " + std::to_string(epoch));
        }
        result.loss_history.push_back(lg.loss);

        b1t *= beta1;
        b2t *= beta2;
        for (std::size_t l = 0; l < layers.size(); ++l) {
            auto step = [&](double& p, double& m, double& v, double g) {
                m = beta1 * m + (1.0 - beta1) * g;
                v = beta2 * v + (1.0 - beta2) * g * g;
                const double mhat = m / (1.0 - b1t);
                const double vhat = v / (1.0 - b2t);
                p -= lr * mhat / (std::sqrt(vhat) + eps);
            };
            for (std::size_t k = 0; k < layers[l].w.data().size(); ++k) {
                step(layers[l].w.data()[k], m_state[l].w.data()[k], v_state[l].w.data()[k],
                     lg.grads[l].w.data()[k]);
            }
            for (std::size_t k = 0; k < layers[l].b.size(); ++k) {
                step(layers[l].b[k], m_state[l].b[k], v_state[l].b[k], lg.grads[l].b[k]);
            }
        }
    }

    result.net = Mlp(std::move(layers), net.activation());
    result.final_loss = mlp_loss_and_grad(result.net, data).loss;
    if (!std::isfinite(result.final_loss)) {
        throw DivergenceError("mlp_train: non-finite loss after final epoch");
    }
    return result;
}

}  // namespace neimkit
