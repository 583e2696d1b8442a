// SPDX-License-Identifier: Apache-2.0
#include "neimkit/model_io.hpp"

#include <fstream>

#include <json.hpp>

#include "neimkit/errors.hpp"

namespace neimkit {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json matrix_to_json(const DenseMatrix& m) {
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

DenseMatrix matrix_from_json(const json& j) {
    return DenseMatrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                       j.at("data").get<Vector>());
}

json pod_to_json(const PodBasis& b) {
    return json{{"n", b.u_r.rows()}, {"r", b.r}, {"sigma", b.sigma}, {"u_r", matrix_to_json(b.u_r)}};
}

PodBasis pod_from_json(const json& j) {
    PodBasis b;
    b.r = j.at("r").get<std::size_t>();
    b.sigma = j.at("sigma").get<Vector>();
    b.u_r = matrix_from_json(j.at("u_r"));
    return b;
}

json deim_to_json(const DeimModel& d) {
    return json{{"v_k", matrix_to_json(d.v_k)},
                {"indices", d.indices},
                {"projector", matrix_to_json(d.projector)},
                {"selected_rows_of_u", matrix_to_json(d.selected_rows_of_u)}};
}

DeimModel deim_from_json(const json& j) {
    DeimModel d;
    d.v_k = matrix_from_json(j.at("v_k"));
    d.indices = j.at("indices").get<std::vector<std::size_t>>();
    d.projector = matrix_from_json(j.at("projector"));
    d.selected_rows_of_u = matrix_from_json(j.at("selected_rows_of_u"));
    return d;
}

json mlp_to_json(const Mlp& net) {
    json layers = json::array();
    for (const auto& l : net.layers()) {
        layers.push_back(json{{"w", matrix_to_json(l.w)}, {"b", l.b}});
    }
    return json{{"activation", "tanh"}, {"layers", layers}};
}

Mlp mlp_from_json(const json& j) {
    if (j.at("activation").get<std::string>() != "tanh") {
        throw IoError("model file: unknown activation");
    }
    std::vector<Mlp::Layer> layers;
    for (const auto& lj : j.at("layers")) {
        Mlp::Layer l;
        l.w = matrix_from_json(lj.at("w"));
        l.b = lj.at("b").get<Vector>();
        layers.push_back(std::move(l));
    }
    return Mlp(std::move(layers));
}

const char* error_kind_name(ErrorWeights::Kind k) {
    switch (k) {
        case ErrorWeights::Kind::Uniform: return "uniform";
        case ErrorWeights::Kind::Kronecker: return "kronecker";
        case ErrorWeights::Kind::Gaussian: return "gaussian";
    }
    return "uniform";
}

ErrorWeights::Kind error_kind_from(const std::string& s) {
    if (s == "uniform") return ErrorWeights::Kind::Uniform;
    if (s == "kronecker") return ErrorWeights::Kind::Kronecker;
    if (s == "gaussian") return ErrorWeights::Kind::Gaussian;
    throw IoError("model file: unknown error weight kind '" + s + "'");
}

const char* training_kind_name(TrainingWeights::Kind k) {
    switch (k) {
        case TrainingWeights::Kind::Uniform: return "uniform";
        case TrainingWeights::Kind::KroneckerAtSelected: return "kronecker_at_selected";
        case TrainingWeights::Kind::Ball: return "ball";
        case TrainingWeights::Kind::Gaussian: return "gaussian";
    }
    return "uniform";
}

TrainingWeights::Kind training_kind_from(const std::string& s) {
    if (s == "uniform") return TrainingWeights::Kind::Uniform;
    if (s == "kronecker_at_selected") return TrainingWeights::Kind::KroneckerAtSelected;
    if (s == "ball") return TrainingWeights::Kind::Ball;
    if (s == "gaussian") return TrainingWeights::Kind::Gaussian;
    throw IoError("model file: unknown training weight kind '" + s + "'");
}

json weights_to_json(const WeightScheme& w) {
    return json{{"error",
                 {{"kind", error_kind_name(w.error_weights.kind)},
                  {"c", w.error_weights.c},
                  {"zeta", w.error_weights.zeta}}},
                {"training",
                 {{"kind", training_kind_name(w.training_weights.kind)},
                  {"c", w.training_weights.c},
                  {"zeta", w.training_weights.zeta},
                  {"radius", w.training_weights.radius}}}};
}

WeightScheme weights_from_json(const json& j) {
    WeightScheme w;
    const auto& e = j.at("error");
    w.error_weights.kind = error_kind_from(e.at("kind").get<std::string>());
    w.error_weights.c = e.at("c").get<double>();
    w.error_weights.zeta = e.at("zeta").get<double>();
    const auto& t = j.at("training");
    w.training_weights.kind = training_kind_from(t.at("kind").get<std::string>());
    w.training_weights.c = t.at("c").get<double>();
    w.training_weights.zeta = t.at("zeta").get<double>();
    w.training_weights.radius = t.at("radius").get<double>();
    return w;
}

const char* theta_method_name(ThetaInterpolation m) {
    switch (m) {
        case ThetaInterpolation::PiecewiseLinear: return "piecewise_linear";
        case ThetaInterpolation::CubicSpline: return "cubic_spline";
        case ThetaInterpolation::NearestNeighbor: return "nearest_neighbor";
    }
    return "cubic_spline";
}

ThetaInterpolation theta_method_from(const std::string& s) {
    if (s == "piecewise_linear") return ThetaInterpolation::PiecewiseLinear;
    if (s == "cubic_spline") return ThetaInterpolation::CubicSpline;
    if (s == "nearest_neighbor") return ThetaInterpolation::NearestNeighbor;
    throw IoError("model file: unknown theta interpolation '" + s + "'");
}

const char* status_name(NeimStatus s) {
    switch (s) {
        case NeimStatus::ToleranceReached: return "tolerance_reached";
        case NeimStatus::MaxModes: return "max_modes";
        case NeimStatus::Elbow: return "elbow";
        case NeimStatus::BasisExhausted: return "basis_exhausted";
        case NeimStatus::CandidatesExhausted: return "candidates_exhausted";
        case NeimStatus::ModeCapReached: return "mode_cap_reached";
    }
    return "max_modes";
}

NeimStatus status_from(const std::string& s) {
    if (s == "tolerance_reached") return NeimStatus::ToleranceReached;
    if (s == "max_modes") return NeimStatus::MaxModes;
    if (s == "elbow") return NeimStatus::Elbow;
    if (s == "basis_exhausted") return NeimStatus::BasisExhausted;
    if (s == "candidates_exhausted") return NeimStatus::CandidatesExhausted;
    if (s == "mode_cap_reached") return NeimStatus::ModeCapReached;
    throw IoError("model file: unknown status '" + s + "'");
}

json neim_to_json(const NeimModel& m) {
    json modes = json::array();
    for (const auto& mode : m.modes) {
        json mj{{"step", mode.step_index},
                {"selected_index", mode.selected_index},
                {"selected_param", mode.selected_param}};
        if (mode.constant) {
            mj["kind"] = "constant";
            mj["constant"] = *mode.constant;
        } else {
            mj["kind"] = "network";
            mj["network"] = mlp_to_json(*mode.network);
        }
        modes.push_back(std::move(mj));
    }
    json log = json::array();
    for (const auto& step : m.training_log) {
        log.push_back(json{{"step", step.step},
                           {"selected_index", step.selected_index},
                           {"selected_param", step.selected_param},
                           {"max_error", step.max_error},
                           {"per_mu_error", step.per_mu_error},
                           {"theta", matrix_to_json(step.theta)},
                           {"dropped_samples", step.dropped_samples},
                           {"fit_loss", step.fit_loss}});
    }
    return json{{"params", m.params},
                {"modes", modes},
                {"theta_table", matrix_to_json(m.theta_table)},
                {"theta_method", theta_method_name(m.theta_method)},
                {"weights", weights_to_json(m.weights)},
                {"training_log", log},
                {"initial_max_error", m.initial_max_error},
                {"initial_per_mu_error", m.initial_per_mu_error},
                {"status", status_name(m.status)},
                {"in_sample_diag", matrix_to_json(m.in_sample_diag)}};
}

NeimModel neim_from_json(const json& j) {
    NeimModel m;
    m.params = j.at("params").get<std::vector<Vector>>();
    for (const auto& mj : j.at("modes")) {
        NeimMode mode;
        mode.step_index = mj.at("step").get<std::size_t>();
        mode.selected_index = mj.at("selected_index").get<std::size_t>();
        mode.selected_param = mj.at("selected_param").get<Vector>();
        if (mj.at("kind").get<std::string>() == "constant") {
            mode.constant = mj.at("constant").get<Vector>();
        } else {
            mode.network = mlp_from_json(mj.at("network"));
        }
        m.modes.push_back(std::move(mode));
    }
    m.theta_table = matrix_from_json(j.at("theta_table"));
    m.theta_method = theta_method_from(j.at("theta_method").get<std::string>());
    m.weights = weights_from_json(j.at("weights"));
    for (const auto& lj : j.at("training_log")) {
        NeimStepLog step;
        step.step = lj.at("step").get<std::size_t>();
        step.selected_index = lj.at("selected_index").get<std::size_t>();
        step.selected_param = lj.at("selected_param").get<Vector>();
        step.max_error = lj.at("max_error").get<double>();
        step.per_mu_error = lj.at("per_mu_error").get<Vector>();
        step.theta = matrix_from_json(lj.at("theta"));
        step.dropped_samples = lj.at("dropped_samples").get<std::vector<std::size_t>>();
        step.fit_loss = lj.at("fit_loss").get<double>();
        m.training_log.push_back(std::move(step));
    }
    m.initial_max_error = j.at("initial_max_error").get<double>();
    m.initial_per_mu_error = j.at("initial_per_mu_error").get<Vector>();
    m.status = status_from(j.at("status").get<std::string>());
    m.in_sample_diag = matrix_from_json(j.at("in_sample_diag"));
    if (!m.modes.empty()) {
        m.theta_interpolants = finalize_theta(m.theta_table, m.params, m.theta_method);
    }
    return m;
}

}  // namespace

void save_model(const std::filesystem::path& path, const ModelFile& model) {
    json j{{"format", "neimkit-model"},
           {"version", kFormatVersion},
           {"experiment", model.experiment},
           {"seed", model.seed},
           {"pod", pod_to_json(model.pod)}};
    if (model.deim) j["deim"] = deim_to_json(*model.deim);
    if (model.neim) j["neim"] = neim_to_json(*model.neim);
    if (model.neim_exact) j["neim_exact"] = neim_to_json(*model.neim_exact);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << j.dump(1, '\t') << "\n";
    if (!out) throw IoError("write failure on " + path.string());
}

ModelFile load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("model file " + path.string() + ": " + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != "neimkit-model") {
            throw IoError("model file " + path.string() + ": unrecognized format");
        }
        if (j.at("version").get<int>() != kFormatVersion) {
            throw IoError("model file " + path.string() + ": unsupported version");
        }
        ModelFile m;
        m.experiment = j.at("experiment").get<std::string>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.pod = pod_from_json(j.at("pod"));
        if (j.contains("deim")) m.deim = deim_from_json(j.at("deim"));
        if (j.contains("neim")) m.neim = neim_from_json(j.at("neim"));
        if (j.contains("neim_exact")) m.neim_exact = neim_from_json(j.at("neim_exact"));
        return m;
    } catch (const json::exception& e) {
        throw IoError("model file " + path.string() + ": " + e.what());
    }
}

}  // namespace neimkit
