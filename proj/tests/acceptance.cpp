// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: runs both benchmark problems at full scale plus the
// oracle checks, and prints one pass/fail line per criterion. Exits nonzero
// if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <vector>

#include "neimkit/commands.hpp"
#include "neimkit/csv_io.hpp"
#include "neimkit/deim.hpp"
#include "neimkit/model_io.hpp"
#include "neimkit/numkit.hpp"
#include "neimkit/testbeds.hpp"

using namespace neimkit;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Criterion {
    std::string name;
    bool pass = true;
    std::string detail;
    double seconds = 0.0;
};

std::vector<Criterion> g_results;

void record(const Criterion& c) {
    std::printf("[%s] %s (%.1f s)%s%s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.seconds,
                c.detail.empty() ? "" : " -- ", c.detail.c_str());
    std::fflush(stdout);
    g_results.push_back(c);
}

std::string fmt(double v) { return format_double(v); }

double unit(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

// ---------------------------------------------------------------------------
// Shared experiment pipelines
// ---------------------------------------------------------------------------

struct OrthStats {
    double max_inner = 0.0;     // |<z, prior>| / ||prior|| over all steps/samples
    double max_norm_dev = 0.0;  // | ||z|| - 1 |
    std::size_t steps = 0;
};

NeimStepObserver orth_observer(OrthStats& stats) {
    return [&stats](const NeimStepObservation& obs) {
        ++stats.steps;
        for (std::size_t i = 0; i < obs.sample_valid.size(); ++i) {
            if (!obs.sample_valid[i]) continue;
            const auto z = obs.z_targets.row(i);
            stats.max_norm_dev = std::max(stats.max_norm_dev, std::abs(norm2(z) - 1.0));
            for (std::size_t k = 0; k + 1 < obs.mode_values.size(); ++k) {
                const auto prior = obs.mode_values[k].row(i);
                const double np = norm2(prior);
                if (np == 0.0) continue;
                stats.max_inner = std::max(stats.max_inner, std::abs(dot(z, prior)) / np);
            }
        }
    };
}

struct Pipeline {
    RunConfig config;
    SnapshotSet set;
    PodBasis pod;
    TrainingGrid grid;
    DeimModel deim;
    NeimModel neim;
    std::optional<NeimModel> neim_exact;
    OrthStats orth;
    Nonlinearity nonlinearity;
    RowNonlinearity row_nonlinearity;
    std::function<Vector(double)> solve;
    // test sweep
    Vector test_mus;
    std::vector<Vector> states;      // reduced states at test parameters
    std::vector<Vector> exact_vals;  // U_r^T N(U_r v~; mu)
};

Pipeline run_pipeline(Experiment experiment) {
    Pipeline p;
    p.config = RunConfig::defaults(experiment);
    if (experiment == Experiment::Exp1) {
        Exp1Problem problem;
        problem.grid = Grid1D::uniform(p.config.n, p.config.h_inv_sq);
        problem.m = p.config.m;
        p.set = problem.snapshots();
        p.nonlinearity = problem.nonlinearity();
        p.row_nonlinearity = problem.row_nonlinearity();
        p.solve = [problem](double mu) { return problem.solve(mu); };
    } else {
        Exp2Problem problem;
        problem.grid = Grid1D::uniform(p.config.n, p.config.h_inv_sq);
        problem.m = p.config.m;
        p.set = problem.snapshots();
        p.nonlinearity = problem.nonlinearity();
        p.row_nonlinearity = problem.row_nonlinearity();
        p.solve = [problem](double mu) { return problem.solve(mu); };
    }
    p.pod = compute_pod(p.set, p.config.r);
    p.grid = build_training_grid(p.set, p.pod, p.nonlinearity);

    std::vector<Vector> nonlinear;
    for (std::size_t i = 0; i < p.set.count(); ++i) {
        nonlinear.push_back(p.nonlinearity(p.set.snapshots.column(i), p.set.parameters[i]));
    }
    p.deim = deim_select(nonlinear, std::min(p.config.max_mode_count(), p.config.m), p.pod);

    NeimTrainOptions options;
    options.weights = p.config.weights;
    options.stop = p.config.stop;
    options.net_config = p.config.mlp_config();
    options.theta_method = p.config.theta_method;
    options.observer = orth_observer(p.orth);
    p.neim = neim_train(p.grid, options);
    if (p.config.exact_neim) {
        options.exact_mode = true;
        options.observer = nullptr;
        p.neim_exact = neim_train(p.grid, options);
    }

    p.test_mus = equally_spaced(1.0, 3.141592653589793, p.config.test_param_count);
    p.states.resize(p.test_mus.size());
    p.exact_vals.resize(p.test_mus.size());
    for (std::size_t t = 0; t < p.test_mus.size(); ++t) {
        p.states[t] = project(p.pod, p.solve(p.test_mus[t]));
        const Vector mu{p.test_mus[t]};
        p.exact_vals[t] = project(p.pod, p.nonlinearity(lift(p.pod, p.states[t]), mu));
    }
    return p;
}

double sweep_neim(const Pipeline& p, const NeimModel& model, std::size_t q) {
    const NeimStepEvaluator eval(model, q);
    double total = 0.0;
    for (std::size_t t = 0; t < p.test_mus.size(); ++t) {
        const Vector mu{p.test_mus[t]};
        total += norm2(vec_sub(eval(p.states[t], mu), p.exact_vals[t]));
    }
    return total / static_cast<double>(p.test_mus.size());
}

double sweep_deim(const Pipeline& p, std::size_t q) {
    const DeimModel model = deim_truncate(p.deim, p.pod, std::min(q, p.deim.indices.size()));
    double total = 0.0;
    for (std::size_t t = 0; t < p.test_mus.size(); ++t) {
        const Vector mu{p.test_mus[t]};
        total += norm2(vec_sub(deim_eval(model, p.row_nonlinearity, p.states[t], mu),
                               p.exact_vals[t]));
    }
    return total / static_cast<double>(p.test_mus.size());
}

// max interpolation residual at the selected rows over the training vectors
double deim_row_residual(const DeimModel& model, const std::vector<Vector>& training) {
    const std::size_t k = model.indices.size();
    double worst = 0.0;
    for (const auto& s : training) {
        DenseMatrix pv(k, k);
        Vector rhs(k);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) pv(i, j) = model.v_k(model.indices[i], j);
            rhs[i] = s[model.indices[i]];
        }
        const Vector c = solve_linear(pv, rhs);
        for (std::size_t i = 0; i < k; ++i) {
            double approx = 0.0;
            for (std::size_t j = 0; j < k; ++j) approx += model.v_k(model.indices[i], j) * c[j];
            worst = std::max(worst, std::abs(approx - rhs[i]));
        }
    }
    return worst;
}

bool per_mu_monotone(const NeimModel& model, double slack) {
    for (std::size_t mu = 0; mu < model.initial_per_mu_error.size(); ++mu) {
        double prev = model.initial_per_mu_error[mu];
        for (const auto& step : model.training_log) {
            if (step.per_mu_error[mu] > prev + slack * (1.0 + prev)) return false;
            prev = step.per_mu_error[mu];
        }
    }
    return true;
}

TrainingGrid toy_grid() {
    TrainingGrid grid;
    grid.m = 5;
    grid.r = 3;
    for (std::size_t i = 0; i < grid.m; ++i) {
        grid.params.push_back({static_cast<double>(i)});
        Vector state(grid.r, 0.0);
        state[i % grid.r] = 1.0 + 0.1 * static_cast<double>(i);
        grid.reduced_states.push_back(std::move(state));
    }
    grid.g.resize(grid.m * grid.m * grid.r);
    for (std::size_t i = 0; i < grid.m; ++i) {
        for (std::size_t j = 0; j < grid.m; ++j) {
            for (std::size_t c = 0; c < grid.r; ++c) {
                grid.g[((i * grid.m) + j) * grid.r + c] =
                    std::sin(0.4 * static_cast<double>(i) + 0.9 * static_cast<double>(j) +
                             1.3 * static_cast<double>(c));
            }
        }
    }
    return grid;
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

void criterion_1_proposition(const Pipeline& exp1, const Pipeline& exp2) {
    Criterion c;
    c.name = "1. greedy error quadrature is non-increasing (toys + both experiments)";
    const auto start = Clock::now();

    const TrainingGrid grid = toy_grid();
    bool toys_ok = true;
    for (auto kind : {ErrorWeights::Kind::Kronecker, ErrorWeights::Kind::Uniform}) {
        NeimTrainOptions exact;
        exact.exact_mode = true;
        exact.stop.max_modes = 3;
        exact.weights.error_weights.kind = kind;
        toys_ok = toys_ok && per_mu_monotone(neim_train(grid, exact), 1e-10);

        NeimTrainOptions trained;
        trained.stop.max_modes = 3;
        trained.weights.error_weights.kind = kind;
        trained.net_config.layer_sizes = {3, 6, 3};
        trained.net_config.epochs = 1000;
        toys_ok = toys_ok && per_mu_monotone(neim_train(grid, trained), 1e-10);
    }
    const double toy_seconds = seconds_since(start);

    const bool exp_ok = per_mu_monotone(exp1.neim, 1e-10) &&
                        (!exp1.neim_exact || per_mu_monotone(*exp1.neim_exact, 1e-10)) &&
                        per_mu_monotone(exp2.neim, 1e-10);
    c.pass = toys_ok && exp_ok && toy_seconds < 10.0;
    c.detail = "toy runtime " + fmt(toy_seconds) + " s (< 10), toys " +
               (toys_ok ? "monotone" : "NOT monotone") + ", experiments " +
               (exp_ok ? "monotone" : "NOT monotone");
    c.seconds = seconds_since(start);
    record(c);
}

void criterion_2_exp1(const Pipeline& p, double pipeline_seconds) {
    Criterion c;
    c.name = "2. exp1 reproduction (n=100, m=51, r=30, uniform weights)";
    const auto start = Clock::now();

    // (a) singular value decay
    double worst_ratio = 0.0;
    for (std::size_t i = 30; i < p.pod.sigma.size(); ++i) {
        worst_ratio = std::max(worst_ratio, p.pod.sigma[i] / p.pod.sigma[0]);
    }
    const bool a_ok = worst_ratio < 1e-12;

    // (b) DEIM average error at 30 modes
    const double deim30 = sweep_deim(p, 30);
    const bool b_ok = deim30 <= 1e-8;

    // (c) exact-NEIM: non-increasing in mode count, <= 1e-6 at 30 modes
    std::vector<double> exact_errs;
    for (std::size_t q : p.config.mode_counts) exact_errs.push_back(sweep_neim(p, *p.neim_exact, q));
    bool c_monotone = true;
    for (std::size_t i = 0; i + 1 < exact_errs.size(); ++i) {
        if (exact_errs[i + 1] > exact_errs[i]) c_monotone = false;
    }
    const double exact30 = exact_errs.back();
    const bool c_ok = c_monotone && exact30 <= 1e-6;

    // (d) trained vs exact agreement below 20 modes
    bool d_ok = true;
    std::string d_detail;
    for (std::size_t q : {5ul, 10ul, 15ul}) {
        const double trained = sweep_neim(p, p.neim, q);
        const double exact = sweep_neim(p, *p.neim_exact, q);
        const double ratio = std::max(trained, exact) / std::max(std::min(trained, exact), 1e-300);
        if (ratio > 10.0) d_ok = false;
        d_detail += " q=" + std::to_string(q) + ":" + fmt(ratio);
    }

    c.pass = a_ok && b_ok && c_ok && d_ok && pipeline_seconds <= 600.0;
    c.detail = std::string("(a) max sigma ratio ") + fmt(worst_ratio) + (a_ok ? " ok" : " FAIL") +
               "; (b) deim@30 " + fmt(deim30) + (b_ok ? " ok" : " FAIL") + "; (c) exact@30 " +
               fmt(exact30) + (c_monotone ? ", monotone" : ", NOT monotone") +
               (c_ok ? " ok" : " FAIL") + "; (d) ratios" + d_detail + (d_ok ? " ok" : " FAIL") +
               "; train+sweep " + fmt(pipeline_seconds) + " s";
    c.seconds = seconds_since(start) + pipeline_seconds;
    record(c);
}

void criterion_3_exp2(const Pipeline& p, double pipeline_seconds) {
    Criterion c;
    c.name = "3. exp2 reproduction (n=100, m=51, r=20, kronecker/uniform weights)";
    const auto start = Clock::now();

    const double neim6 = sweep_neim(p, p.neim, 6);
    const bool neim_ok = neim6 <= 5e-4;

    const double deim6 = sweep_deim(p, 6);
    const bool deim_bound_ok = deim6 <= neim6 * 10.0;

    bool deim_decreasing = true;
    std::string decr_detail;
    double prev = sweep_deim(p, 6);
    for (std::size_t q = 7; q <= 10; ++q) {
        const double cur = sweep_deim(p, q);
        if (cur >= prev) deim_decreasing = false;
        prev = cur;
    }

    c.pass = neim_ok && deim_bound_ok && deim_decreasing && pipeline_seconds <= 900.0;
    c.detail = "neim@6 " + fmt(neim6) + (neim_ok ? " ok" : " FAIL") + "; deim@6 " + fmt(deim6) +
               (deim_bound_ok ? " within 10x" : " FAIL") + "; deim 6->10 " +
               (deim_decreasing ? "decreasing" : "NOT decreasing") + "; train+sweep " +
               fmt(pipeline_seconds) + " s";
    c.seconds = seconds_since(start) + pipeline_seconds;
    record(c);
}

void criterion_4_theta_oracle() {
    Criterion c;
    c.name = "4. theta solve equals the stacked least-squares oracle (100 instances)";
    const auto start = Clock::now();

    std::mt19937_64 gen(1234);
    double worst = 0.0;
    for (int inst = 0; inst < 100; ++inst) {
        const std::size_t m = 2 + static_cast<std::size_t>(unit(gen) * 9);
        const std::size_t r = 2 + static_cast<std::size_t>(unit(gen) * 7);
        const std::size_t j = 1 + static_cast<std::size_t>(unit(gen) * 4);
        TrainingGrid grid;
        grid.m = m;
        grid.r = r;
        for (std::size_t i = 0; i < m; ++i) {
            grid.params.push_back({static_cast<double>(i)});
            grid.reduced_states.push_back(Vector(r, 0.0));
        }
        grid.g.resize(m * m * r);
        for (double& v : grid.g) v = 2.0 * unit(gen) - 1.0;
        std::vector<DenseMatrix> modes;
        for (std::size_t l = 0; l < j; ++l) {
            DenseMatrix mv(m, r);
            for (double& v : mv.data()) v = 2.0 * unit(gen) - 1.0;
            modes.push_back(std::move(mv));
        }
        ErrorWeights w;
        w.kind = inst % 2 == 0 ? ErrorWeights::Kind::Uniform : ErrorWeights::Kind::Gaussian;
        w.zeta = 0.05;
        const std::size_t mu = inst % m;
        const Vector fast = solve_theta(grid, modes, w, mu);

        DenseMatrix design(m * r, j);
        Vector rhs(m * r, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            const double sw = std::sqrt(w(grid.params[i], i, grid.params[mu], mu));
            const auto target = grid.at(i, mu);
            for (std::size_t cc = 0; cc < r; ++cc) {
                for (std::size_t l = 0; l < j; ++l) design(i * r + cc, l) = sw * modes[l](i, cc);
                rhs[i * r + cc] = sw * target[cc];
            }
        }
        const Vector slow = lstsq_svd(design, rhs, 1e-13);
        worst = std::max(worst, norm2(vec_sub(fast, slow)));
    }
    c.seconds = seconds_since(start);
    c.pass = worst <= 1e-9 && c.seconds < 5.0;
    c.detail = "max discrepancy " + fmt(worst) + ", runtime " + fmt(c.seconds) + " s (< 5)";
    record(c);
}

void criterion_5_row_exactness(const Pipeline& exp1, const Pipeline& exp2) {
    Criterion c;
    c.name = "5. DEIM row exactness at every training parameter (both experiments)";
    const auto start = Clock::now();
    double worst = 0.0;
    for (const Pipeline* p : {&exp1, &exp2}) {
        std::vector<Vector> training;
        for (std::size_t i = 0; i < p->set.count(); ++i) {
            training.push_back(p->nonlinearity(p->set.snapshots.column(i), p->set.parameters[i]));
        }
        worst = std::max(worst, deim_row_residual(p->deim, training));
    }
    c.pass = worst <= 1e-12;
    c.detail = "max residual at selected rows " + fmt(worst);
    c.seconds = seconds_since(start);
    record(c);
}

void criterion_6_gradient_check() {
    Criterion c;
    c.name = "6. backpropagation matches central differences (>= 20 nets, <= 50 params)";
    const auto start = Clock::now();

    std::mt19937_64 gen(555);
    double worst = 0.0;
    int nets = 0;
    for (int trial = 0; trial < 20; ++trial, ++nets) {
        const std::vector<std::size_t> sizes =
            trial % 2 == 0 ? std::vector<std::size_t>{2, 3, 2} : std::vector<std::size_t>{3, 4, 3};
        MlpConfig cfg;
        cfg.layer_sizes = sizes;
        cfg.seed = 4000 + static_cast<std::uint64_t>(trial);
        Mlp net = mlp_init(cfg);

        WeightedDataset data;
        for (int s = 0; s < 4; ++s) {
            Vector x(sizes.front()), z(sizes.back());
            for (double& v : x) v = 2.0 * unit(gen) - 1.0;
            for (double& v : z) v = 2.0 * unit(gen) - 1.0;
            data.inputs.push_back(std::move(x));
            data.targets.push_back(std::move(z));
            data.sample_weights.push_back(0.25 + unit(gen));
        }

        const LossGrad lg = mlp_loss_and_grad(net, data);
        std::vector<double> analytic;
        for (const auto& l : lg.grads) {
            analytic.insert(analytic.end(), l.w.data().begin(), l.w.data().end());
            analytic.insert(analytic.end(), l.b.begin(), l.b.end());
        }
        std::vector<Mlp::Layer> layers = net.layers();
        std::vector<double*> params;
        for (auto& l : layers) {
            for (double& v : l.w.data()) params.push_back(&v);
            for (double& v : l.b) params.push_back(&v);
        }
        constexpr double eps = 1e-6;
        for (std::size_t pi = 0; pi < params.size(); ++pi) {
            const double saved = *params[pi];
            *params[pi] = saved + eps;
            const double lp = mlp_loss_and_grad(Mlp(layers), data).loss;
            *params[pi] = saved - eps;
            const double lm = mlp_loss_and_grad(Mlp(layers), data).loss;
            *params[pi] = saved;
            const double numeric = (lp - lm) / (2.0 * eps);
            const double scale = std::max({std::abs(numeric), std::abs(analytic[pi]), 1e-8});
            worst = std::max(worst, std::abs(numeric - analytic[pi]) / scale);
        }
    }
    c.seconds = seconds_since(start);
    c.pass = worst <= 1e-4 && nets >= 20 && c.seconds < 5.0;
    c.detail = "max relative gradient error " + fmt(worst) + " over " + std::to_string(nets) +
               " nets, runtime " + fmt(c.seconds) + " s (< 5)";
    record(c);
}

void criterion_7_orthogonality(const Pipeline& exp1, const Pipeline& exp2) {
    Criterion c;
    c.name = "7. per-step target orthogonality and unit norms (both experiments)";
    const auto start = Clock::now();
    const double max_inner = std::max(exp1.orth.max_inner, exp2.orth.max_inner);
    const double max_norm_dev = std::max(exp1.orth.max_norm_dev, exp2.orth.max_norm_dev);
    c.pass = max_inner <= 1e-8 && max_norm_dev <= 1e-12 && exp1.orth.steps > 0 &&
             exp2.orth.steps > 0;
    c.detail = "max |<z, prior>|/||prior|| = " + fmt(max_inner) +
               ", max norm deviation = " + fmt(max_norm_dev);
    c.seconds = seconds_since(start);
    record(c);
}

void criterion_8_serialization(const Pipeline& exp1, const Pipeline& exp2) {
    Criterion c;
    c.name = "8. model save/load evaluates bit-identically on 100 random pairs";
    const auto start = Clock::now();

    const auto dir = std::filesystem::temp_directory_path() / "neimkit_acceptance";
    std::filesystem::create_directories(dir);

    ModelFile file;
    file.experiment = "exp2";
    file.seed = exp2.config.seed;
    file.pod = exp2.pod;
    file.deim = exp2.deim;
    file.neim = exp2.neim;
    file.neim_exact = exp1.neim_exact;  // exercise the constant-mode path too
    const auto path = dir / "acceptance_model.json";
    save_model(path, file);
    const ModelFile back = load_model(path);

    std::mt19937_64 gen(31337);
    bool identical = true;
    for (int t = 0; t < 100 && identical; ++t) {
        Vector vr(exp2.pod.r);
        for (double& v : vr) v = 2.0 * unit(gen) - 1.0;
        const Vector mu{1.0 + unit(gen) * 2.1415};
        identical = identical && neim_eval(*file.neim, vr, mu) == neim_eval(*back.neim, vr, mu);
        identical = identical && deim_eval(*file.deim, exp2.row_nonlinearity, vr, mu) ==
                                     deim_eval(*back.deim, exp2.row_nonlinearity, vr, mu);
        Vector vr1(exp1.pod.r);
        for (double& v : vr1) v = 2.0 * unit(gen) - 1.0;
        identical = identical &&
                    neim_eval(*file.neim_exact, vr1, mu) == neim_eval(*back.neim_exact, vr1, mu);
    }
    c.pass = identical;
    c.detail = identical ? "all evaluations bit-identical" : "MISMATCH found";
    c.seconds = seconds_since(start);
    record(c);
}

}  // namespace

int main() {
    std::printf("neimkit acceptance suite\n");
    std::fflush(stdout);

    const auto t1 = Clock::now();
    const Pipeline exp1 = run_pipeline(Experiment::Exp1);
    const double exp1_seconds = seconds_since(t1);
    std::printf("  exp1 pipeline: %zu NEIM modes (%s), %zu exact modes, %.1f s\n",
                exp1.neim.mode_count(), to_string(exp1.neim.status),
                exp1.neim_exact ? exp1.neim_exact->mode_count() : 0, exp1_seconds);
    std::fflush(stdout);

    const auto t2 = Clock::now();
    const Pipeline exp2 = run_pipeline(Experiment::Exp2);
    const double exp2_seconds = seconds_since(t2);
    std::printf("  exp2 pipeline: %zu NEIM modes (%s), %.1f s\n", exp2.neim.mode_count(),
                to_string(exp2.neim.status), exp2_seconds);
    std::fflush(stdout);

    criterion_1_proposition(exp1, exp2);
    criterion_2_exp1(exp1, exp1_seconds);
    criterion_3_exp2(exp2, exp2_seconds);
    criterion_4_theta_oracle();
    criterion_5_row_exactness(exp1, exp2);
    criterion_6_gradient_check();
    criterion_7_orthogonality(exp1, exp2);
    criterion_8_serialization(exp1, exp2);

    int failures = 0;
    for (const auto& c : g_results) {
        if (!c.pass) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(g_results.size()) - failures,
                g_results.size());
    return failures == 0 ? 0 : 1;
}
