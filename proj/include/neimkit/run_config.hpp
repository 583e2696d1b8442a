// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>

#include "neimkit/mlp.hpp"
#include "neimkit/neim.hpp"
#include "neimkit/weights.hpp"

namespace neimkit {

enum class Experiment { Exp1, Exp2 };

const char* to_string(Experiment e);
Experiment experiment_from_string(const std::string& name);

/// One benchmark run. The per-experiment defaults reproduce the published
/// setups: exp1 keeps 30 POD modes with all weights equal to one and
/// 1-hidden-layer / 1-neuron networks trained for 20000 epochs; exp2 keeps
/// 20 modes with Kronecker error weights, uniform training weights, and
/// 1x50 networks trained for 10000 epochs.
struct RunConfig {
    Experiment experiment = Experiment::Exp1;
    std::size_t n = 100;
    std::size_t m = 51;
    double h_inv_sq = 30.0;
    std::size_t r = 30;
    std::vector<std::size_t> mode_counts;
    WeightScheme weights;
    StoppingCriteria stop;
    std::size_t hidden_layers = 1;
    std::size_t hidden_width = 1;
    std::size_t epochs = 20000;
    double learning_rate = 1e-3;
    double lr_decay_factor = 0.5;
    std::size_t lr_decay_every = 0;  // 0 -> epochs/5
    std::uint64_t seed = 0;
    std::filesystem::path out_dir = ".";
    ThetaInterpolation theta_method = ThetaInterpolation::CubicSpline;
    bool exact_neim = false;
    std::size_t test_param_count = 500;

    static RunConfig defaults(Experiment experiment);

    /// Overrides fields present in a JSON config file.
    void apply_config_file(const std::filesystem::path& path);

    MlpConfig mlp_config() const;
    std::size_t max_mode_count() const;
};

}  // namespace neimkit
