// SPDX-License-Identifier: Apache-2.0
#include "neimkit/run_config.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "neimkit/errors.hpp"

namespace neimkit {

using nlohmann::json;

const char* to_string(Experiment e) { return e == Experiment::Exp1 ? "exp1" : "exp2"; }

Experiment experiment_from_string(const std::string& name) {
    if (name == "exp1") return Experiment::Exp1;
    if (name == "exp2") return Experiment::Exp2;
    throw ConfigError("unknown experiment '" + name + "' (expected exp1 or exp2)");
}

RunConfig RunConfig::defaults(Experiment experiment) {
    RunConfig c;
    c.experiment = experiment;
    if (experiment == Experiment::Exp1) {
        c.r = 30;
        c.mode_counts = {5, 10, 15, 20, 25, 30};
        c.weights.error_weights.kind = ErrorWeights::Kind::Uniform;
        c.weights.training_weights.kind = TrainingWeights::Kind::Uniform;
        c.hidden_layers = 1;
        c.hidden_width = 1;
        c.epochs = 20000;
        c.exact_neim = true;
    } else {
        c.r = 20;
        c.mode_counts = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
        c.weights.error_weights.kind = ErrorWeights::Kind::Kronecker;
        c.weights.training_weights.kind = TrainingWeights::Kind::Uniform;
        c.hidden_layers = 1;
        c.hidden_width = 50;
        c.epochs = 10000;
        c.exact_neim = false;
    }
    c.stop.max_modes = c.max_mode_count();
    return c;
}

std::size_t RunConfig::max_mode_count() const {
    if (mode_counts.empty()) return r;
    return *std::max_element(mode_counts.begin(), mode_counts.end());
}

MlpConfig RunConfig::mlp_config() const {
    MlpConfig cfg;
    cfg.layer_sizes.push_back(r);
    for (std::size_t i = 0; i < hidden_layers; ++i) cfg.layer_sizes.push_back(hidden_width);
    cfg.layer_sizes.push_back(r);
    cfg.seed = seed;
    cfg.epochs = epochs;
    cfg.learning_rate = learning_rate;
    cfg.lr_decay_factor = lr_decay_factor;
    cfg.lr_decay_every = lr_decay_every;
    return cfg;
}

namespace {

ErrorWeights parse_error_weights(const json& j, ErrorWeights base) {
    if (j.contains("kind")) {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "uniform") base.kind = ErrorWeights::Kind::Uniform;
        else if (kind == "kronecker") base.kind = ErrorWeights::Kind::Kronecker;
        else if (kind == "gaussian") base.kind = ErrorWeights::Kind::Gaussian;
        else throw ConfigError("config: unknown error weight kind '" + kind + "'");
    }
    if (j.contains("c")) base.c = j.at("c").get<double>();
    if (j.contains("zeta")) base.zeta = j.at("zeta").get<double>();
    return base;
}

TrainingWeights parse_training_weights(const json& j, TrainingWeights base) {
    if (j.contains("kind")) {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "uniform") base.kind = TrainingWeights::Kind::Uniform;
        else if (kind == "kronecker_at_selected") base.kind = TrainingWeights::Kind::KroneckerAtSelected;
        else if (kind == "ball") base.kind = TrainingWeights::Kind::Ball;
        else if (kind == "gaussian") base.kind = TrainingWeights::Kind::Gaussian;
        else throw ConfigError("config: unknown training weight kind '" + kind + "'");
    }
    if (j.contains("c")) base.c = j.at("c").get<double>();
    if (j.contains("zeta")) base.zeta = j.at("zeta").get<double>();
    if (j.contains("radius")) base.radius = j.at("radius").get<double>();
    return base;
}

}  // namespace

void RunConfig::apply_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path.string() + ": " + e.what());
    }
    try {
        if (j.contains("experiment")) {
            experiment = experiment_from_string(j.at("experiment").get<std::string>());
        }
        if (j.contains("n")) n = j.at("n").get<std::size_t>();
        if (j.contains("m")) m = j.at("m").get<std::size_t>();
        if (j.contains("h_inv_sq")) h_inv_sq = j.at("h_inv_sq").get<double>();
        if (j.contains("r")) r = j.at("r").get<std::size_t>();
        if (j.contains("mode_counts")) {
            mode_counts = j.at("mode_counts").get<std::vector<std::size_t>>();
        }
        if (j.contains("weights")) {
            const auto& w = j.at("weights");
            if (w.contains("error")) {
                weights.error_weights = parse_error_weights(w.at("error"), weights.error_weights);
            }
            if (w.contains("training")) {
                weights.training_weights =
                    parse_training_weights(w.at("training"), weights.training_weights);
            }
        }
        bool max_modes_explicit = false;
        if (j.contains("stop")) {
            const auto& s = j.at("stop");
            if (s.contains("tol")) stop.tol = s.at("tol").get<double>();
            if (s.contains("max_modes")) {
                stop.max_modes = s.at("max_modes").get<std::size_t>();
                max_modes_explicit = true;
            }
            if (s.contains("elbow_fraction")) {
                stop.elbow_fraction = s.at("elbow_fraction").get<double>();
            }
        }
        if (!max_modes_explicit && j.contains("mode_counts")) {
            stop.max_modes = max_mode_count();
        }
        if (j.contains("net")) {
            const auto& nt = j.at("net");
            if (nt.contains("hidden_layers")) hidden_layers = nt.at("hidden_layers").get<std::size_t>();
            if (nt.contains("hidden_width")) hidden_width = nt.at("hidden_width").get<std::size_t>();
            if (nt.contains("epochs")) epochs = nt.at("epochs").get<std::size_t>();
            if (nt.contains("learning_rate")) learning_rate = nt.at("learning_rate").get<double>();
            if (nt.contains("lr_decay_factor")) {
                lr_decay_factor = nt.at("lr_decay_factor").get<double>();
            }
            if (nt.contains("lr_decay_every")) {
                lr_decay_every = nt.at("lr_decay_every").get<std::size_t>();
            }
        }
        if (j.contains("theta_interpolation")) {
            const std::string t = j.at("theta_interpolation").get<std::string>();
            if (t == "piecewise_linear") theta_method = ThetaInterpolation::PiecewiseLinear;
            else if (t == "cubic_spline") theta_method = ThetaInterpolation::CubicSpline;
            else if (t == "nearest_neighbor") theta_method = ThetaInterpolation::NearestNeighbor;
            else throw ConfigError("config: unknown theta_interpolation '" + t + "'");
        }
        if (j.contains("exact_neim")) exact_neim = j.at("exact_neim").get<bool>();
        if (j.contains("seed")) seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("test_params")) test_param_count = j.at("test_params").get<std::size_t>();
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path.string() + ": " + e.what());
    }
}

}  // namespace neimkit
