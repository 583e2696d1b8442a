// SPDX-License-Identifier: Apache-2.0
#include "neimkit/commands.hpp"

#include <functional>
#include <sstream>

#include "neimkit/csv_io.hpp"
#include "neimkit/deim.hpp"
#include "neimkit/errors.hpp"
#include "neimkit/model_io.hpp"
#include "neimkit/testbeds.hpp"

namespace neimkit {

namespace {

constexpr const char* kVersion = "neimkit v0.1.0";

struct Bench {
    std::function<SnapshotSet()> snapshots;
    std::function<Vector(double)> solve;
    Nonlinearity nonlinearity;
    RowNonlinearity row_nonlinearity;
    double mu_min = 1.0;
    double mu_max = 3.141592653589793;
};

Bench make_bench(const RunConfig& config) {
    Bench bench;
    if (config.experiment == Experiment::Exp1) {
        Exp1Problem p;
        p.grid = Grid1D::uniform(config.n, config.h_inv_sq);
        p.m = config.m;
        bench.snapshots = [p] { return p.snapshots(); };
        bench.solve = [p](double mu) { return p.solve(mu); };
        bench.nonlinearity = p.nonlinearity();
        bench.row_nonlinearity = p.row_nonlinearity();
        bench.mu_min = p.mu_min;
        bench.mu_max = p.mu_max;
    } else {
        Exp2Problem p;
        p.grid = Grid1D::uniform(config.n, config.h_inv_sq);
        p.m = config.m;
        bench.snapshots = [p] { return p.snapshots(); };
        bench.solve = [p](double mu) { return p.solve(mu); };
        bench.nonlinearity = p.nonlinearity();
        bench.row_nonlinearity = p.row_nonlinearity();
        bench.mu_min = p.mu_min;
        bench.mu_max = p.mu_max;
    }
    return bench;
}

std::string snapshot_metadata(const RunConfig& config) {
    std::ostringstream meta;
    meta << kVersion << " experiment=" << to_string(config.experiment) << " n=" << config.n
         << " m=" << config.m << " h_inv_sq=" << format_double(config.h_inv_sq)
         << " seed=" << config.seed;
    return meta.str();
}

}  // namespace

void cmd_snapshots(const RunConfig& config) {
    std::filesystem::create_directories(config.out_dir);
    const Bench bench = make_bench(config);
    SnapshotFile file;
    file.metadata = snapshot_metadata(config);
    file.set = bench.snapshots();
    write_snapshot_csv(config.out_dir / "snapshots.csv", file);
}

void cmd_train(const RunConfig& config) {
    const std::filesystem::path snap_path = config.out_dir / "snapshots.csv";
    if (!std::filesystem::exists(snap_path)) {
        throw IoError("missing " + snap_path.string() + "; run the snapshots command first");
    }
    const SnapshotFile file = read_snapshot_csv(snap_path);
    if (file.set.dimension() != config.n || file.set.count() != config.m) {
        throw ConfigError("snapshot file shape (" + std::to_string(file.set.dimension()) + "x" +
                          std::to_string(file.set.count()) + ") does not match config (" +
                          std::to_string(config.n) + "x" + std::to_string(config.m) + ")");
    }
    const Bench bench = make_bench(config);

    ModelFile model;
    model.experiment = to_string(config.experiment);
    model.seed = config.seed;
    model.pod = compute_pod(file.set, config.r);

    const TrainingGrid grid = build_training_grid(file.set, model.pod, bench.nonlinearity);

    std::vector<Vector> nonlinear_snapshots;
    nonlinear_snapshots.reserve(config.m);
    for (std::size_t i = 0; i < config.m; ++i) {
        nonlinear_snapshots.push_back(
            bench.nonlinearity(file.set.snapshots.column(i), file.set.parameters[i]));
    }
    const std::size_t k = std::min(config.max_mode_count(), config.m);
    model.deim = deim_select(nonlinear_snapshots, k, model.pod);

    NeimTrainOptions options;
    options.weights = config.weights;
    options.stop = config.stop;
    options.net_config = config.mlp_config();
    options.theta_method = config.theta_method;
    options.exact_mode = false;
    model.neim = neim_train(grid, options);
    if (config.exact_neim) {
        options.exact_mode = true;
        model.neim_exact = neim_train(grid, options);
    }

    save_model(config.out_dir / "model.json", model);

    CsvTable log;
    log.header = {"model", "step", "selected_param", "max_weighted_error"};
    auto append_log = [&](const char* name, const NeimModel& m) {
        for (const auto& step : m.training_log) {
            log.rows.push_back({name, std::to_string(step.step),
                                format_double(step.selected_param[0]),
                                format_double(step.max_error)});
        }
    };
    append_log("neim", *model.neim);
    if (model.neim_exact) append_log("neim_exact", *model.neim_exact);
    write_csv(config.out_dir / "training_log.csv", log);
}

void cmd_report(const RunConfig& config) {
    const std::filesystem::path model_path = config.out_dir / "model.json";
    if (!std::filesystem::exists(model_path)) {
        throw IoError("missing " + model_path.string() + "; run the train command first");
    }
    const ModelFile model = load_model(model_path);
    if (!model.deim || !model.neim) {
        throw DataError("model file lacks deim/neim sections needed by the report");
    }
    const Bench bench = make_bench(config);

    // Test sweep: reduced state from the high-fidelity solution, exact value
    // from the dense nonlinearity at the lifted reduced state.
    const Vector test_mus = equally_spaced(bench.mu_min, bench.mu_max, config.test_param_count);
    std::vector<Vector> states(test_mus.size());
    std::vector<Vector> exact(test_mus.size());
    for (std::size_t t = 0; t < test_mus.size(); ++t) {
        states[t] = project(model.pod, bench.solve(test_mus[t]));
        const Vector mu{test_mus[t]};
        exact[t] = project(model.pod, bench.nonlinearity(lift(model.pod, states[t]), mu));
    }

    CsvTable errors;
    errors.header = {"method", "mode_count", "avg_abs_error"};
    CsvTable per_param;
    per_param.header = {"method", "mode_count", "mu", "abs_error"};

    auto sweep = [&](const char* method, std::size_t q,
                     const std::function<Vector(std::size_t)>& eval_at) {
        double total = 0.0;
        for (std::size_t t = 0; t < test_mus.size(); ++t) {
            const double err = norm2(vec_sub(eval_at(t), exact[t]));
            total += err;
            per_param.rows.push_back({method, std::to_string(q), format_double(test_mus[t]),
                                      format_double(err)});
        }
        errors.rows.push_back(
            {method, std::to_string(q), format_double(total / static_cast<double>(test_mus.size()))});
    };

    for (std::size_t q : config.mode_counts) {
        const DeimModel deim_q =
            deim_truncate(*model.deim, model.pod, std::min(q, model.deim->indices.size()));
        sweep("deim", q, [&](std::size_t t) {
            const Vector mu{test_mus[t]};
            return deim_eval(deim_q, bench.row_nonlinearity, states[t], mu);
        });

        const NeimStepEvaluator neim_q(*model.neim, q);
        sweep("neim", q, [&](std::size_t t) {
            const Vector mu{test_mus[t]};
            return neim_q(states[t], mu);
        });

        if (model.neim_exact) {
            const NeimStepEvaluator exact_q(*model.neim_exact, q);
            sweep("neim_exact", q, [&](std::size_t t) {
                const Vector mu{test_mus[t]};
                return exact_q(states[t], mu);
            });
        }
    }

    write_csv(config.out_dir / "errors.csv", errors);
    write_csv(config.out_dir / "per_parameter_errors.csv", per_param);
}

}  // namespace neimkit
