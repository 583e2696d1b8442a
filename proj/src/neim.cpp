// SPDX-License-Identifier: Apache-2.0
#include "neimkit/neim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "neimkit/errors.hpp"
#include "neimkit/numkit.hpp"

namespace neimkit {

TrainingGrid build_training_grid(const SnapshotSet& snapshots, const PodBasis& basis,
                                 const Nonlinearity& nonlinearity) {
    snapshots.validate();
    const std::size_t m = snapshots.count();
    const std::size_t r = basis.r;

    TrainingGrid grid;
    grid.m = m;
    grid.r = r;
    grid.params = snapshots.parameters;
    grid.reduced_states.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        grid.reduced_states.push_back(project(basis, snapshots.snapshots.column(i)));
    }
    grid.g.resize(m * m * r);
    for (std::size_t i = 0; i < m; ++i) {
        const Vector v_i = snapshots.snapshots.column(i);
        for (std::size_t j = 0; j < m; ++j) {
            const Vector n_full = nonlinearity(v_i, grid.params[j]);
            if (n_full.size() != snapshots.dimension()) {
                throw DataError("build_training_grid: nonlinearity returned wrong dimension at (" +
                                std::to_string(i) + ", " + std::to_string(j) + ")");
            }
            if (!all_finite(n_full)) {
                throw DataError("build_training_grid: non-finite nonlinearity value at (" +
                                std::to_string(i) + ", " + std::to_string(j) + ")");
            }
            const Vector reduced = project(basis, n_full);
            std::copy(reduced.begin(), reduced.end(), grid.g.begin() + ((i * m) + j) * r);
        }
    }
    return grid;
}

Vector NeimMode::eval(std::span<const double> v_reduced) const {
    if (constant) return *constant;
    return network->forward(v_reduced);
}

void StoppingCriteria::validate() const {
    if (!(tol >= 0.0)) throw ConfigError("StoppingCriteria: tol must be >= 0");
    if (max_modes < 1) throw ConfigError("StoppingCriteria: max_modes must be >= 1");
    if (!(elbow_fraction >= 0.0 && elbow_fraction < 1.0)) {
        throw ConfigError("StoppingCriteria: elbow_fraction must be in [0, 1)");
    }
}

const char* to_string(NeimStatus status) {
    switch (status) {
        case NeimStatus::ToleranceReached: return "tolerance reached";
        case NeimStatus::MaxModes: return "max modes";
        case NeimStatus::Elbow: return "elbow";
        case NeimStatus::BasisExhausted: return "basis exhausted";
        case NeimStatus::CandidatesExhausted: return "candidates exhausted";
        case NeimStatus::ModeCapReached: return "mode cap reached";
    }
    return "unknown";
}

double error_quadrature(const TrainingGrid& grid, const std::vector<DenseMatrix>& mode_values,
                        const DenseMatrix& theta, const ErrorWeights& w_e, std::size_t mu_index) {
    const std::size_t k = mode_values.size();
    double total = 0.0;
    Vector approx(grid.r);
    for (std::size_t i = 0; i < grid.m; ++i) {
        const double w = w_e(grid.params[i], i, grid.params[mu_index], mu_index);
        if (w == 0.0) continue;
        std::fill(approx.begin(), approx.end(), 0.0);
        for (std::size_t l = 0; l < k; ++l) {
            axpy(theta(mu_index, l), mode_values[l].row(i), approx);
        }
        const std::span<const double> target = grid.at(i, mu_index);
        double err2 = 0.0;
        for (std::size_t c = 0; c < grid.r; ++c) {
            const double d = target[c] - approx[c];
            err2 += d * d;
        }
        total += w * err2;
    }
    return total;
}

std::size_t select_parameter(const TrainingGrid& grid, const std::vector<DenseMatrix>& mode_values,
                             const DenseMatrix& theta, const ErrorWeights& w_e,
                             const std::vector<std::size_t>& excluded) {
    std::vector<char> is_excluded(grid.m, 0);
    for (std::size_t e : excluded) {
        if (e < grid.m) is_excluded[e] = 1;
    }
    bool found = false;
    std::size_t arg = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < grid.m; ++j) {
        if (is_excluded[j]) continue;
        const double err = error_quadrature(grid, mode_values, theta, w_e, j);
        if (err > best) {  // strict: smallest index wins ties
            best = err;
            arg = j;
            found = true;
        }
    }
    if (!found) throw DegeneracyError("select_parameter: all parameters excluded");
    return arg;
}

std::optional<Vector> orthogonalize_targets(std::span<const double> y,
                                            const std::vector<Vector>& prior_mode_values) {
    const double ny = norm2(y);
    if (ny == 0.0) return std::nullopt;
    Vector z(y.begin(), y.end());
    if (prior_mode_values.empty()) {
        for (double& v : z) v /= ny;
        return z;
    }

    Vector prior_norms2(prior_mode_values.size());
    for (std::size_t k = 0; k < prior_mode_values.size(); ++k) {
        prior_norms2[k] = dot(prior_mode_values[k], prior_mode_values[k]);
    }

    // The priors are only approximately orthogonal to each other, so one
    // sequential pass leaves residual components; iterate the pass until z
    // is orthogonal to every prior (idempotent thereafter).
    constexpr int kMaxPasses = 50;
    for (int pass = 0; pass < kMaxPasses; ++pass) {
        for (std::size_t k = 0; k < prior_mode_values.size(); ++k) {
            if (prior_norms2[k] == 0.0) continue;
            const double coef = dot(z, prior_mode_values[k]) / prior_norms2[k];
            axpy(-coef, prior_mode_values[k], z);
        }
        const double nz = norm2(z);
        if (nz < 1e-12 * ny) return std::nullopt;
        double worst = 0.0;
        for (std::size_t k = 0; k < prior_mode_values.size(); ++k) {
            if (prior_norms2[k] == 0.0) continue;
            worst = std::max(worst,
                             std::abs(dot(z, prior_mode_values[k])) /
                                 (std::sqrt(prior_norms2[k]) * nz));
        }
        if (worst <= 1e-13) break;
    }
    const double nz = norm2(z);
    if (nz < 1e-12 * ny) return std::nullopt;
    for (double& v : z) v /= nz;
    return z;
}

Vector solve_theta(const TrainingGrid& grid, const std::vector<DenseMatrix>& mode_values,
                   const ErrorWeights& w_e, std::size_t mu_index) {
    const std::size_t j = mode_values.size();
    if (j == 0) throw DataError("solve_theta: no modes");
    DenseMatrix a(j, j);
    Vector b(j, 0.0);
    for (std::size_t i = 0; i < grid.m; ++i) {
        const double w = w_e(grid.params[i], i, grid.params[mu_index], mu_index);
        if (w == 0.0) continue;
        const std::span<const double> target = grid.at(i, mu_index);
        for (std::size_t k = 0; k < j; ++k) {
            const std::span<const double> mk = mode_values[k].row(i);
            b[k] += w * dot(mk, target);
            for (std::size_t l = k; l < j; ++l) {
                const double v = w * dot(mk, mode_values[l].row(i));
                a(k, l) += v;
                if (l != k) a(l, k) += v;
            }
        }
    }
    try {
        return solve_linear(a, b);
    } catch (const SingularMatrixError&) {
        return lstsq_svd(a, b, 1e-12);
    }
}

namespace {

DenseMatrix resolve_all_theta(const TrainingGrid& grid, const std::vector<DenseMatrix>& mode_values,
                              const ErrorWeights& w_e) {
    const std::size_t j = mode_values.size();
    DenseMatrix theta(grid.m, j);
    for (std::size_t mu = 0; mu < grid.m; ++mu) {
        const Vector t = solve_theta(grid, mode_values, w_e, mu);
        for (std::size_t l = 0; l < j; ++l) theta(mu, l) = t[l];
    }
    return theta;
}

}  // namespace

NeimModel neim_train(const TrainingGrid& grid, const NeimTrainOptions& options) {
    options.weights.validate();
    options.stop.validate();
    if (grid.m == 0) throw DataError("neim_train: empty grid");
    if (!options.exact_mode) {
        options.net_config.validate();
        if (options.net_config.layer_sizes.front() != grid.r ||
            options.net_config.layer_sizes.back() != grid.r) {
            throw ConfigError("neim_train: network input/output sizes must equal r");
        }
    }

    NeimModel model;
    model.params = grid.params;
    model.weights = options.weights;
    model.theta_method = options.theta_method;

    std::vector<DenseMatrix> mode_values;
    DenseMatrix theta(grid.m, 0);
    std::vector<std::size_t> selected;

    model.initial_per_mu_error.resize(grid.m);
    for (std::size_t j = 0; j < grid.m; ++j) {
        model.initial_per_mu_error[j] =
            error_quadrature(grid, mode_values, theta, options.weights.error_weights, j);
    }
    model.initial_max_error =
        *std::max_element(model.initial_per_mu_error.begin(), model.initial_per_mu_error.end());

    const std::size_t mode_cap = std::min({options.stop.max_modes, grid.r, grid.m});
    model.status = NeimStatus::MaxModes;

    if (model.initial_max_error <= options.stop.tol) {
        model.status = NeimStatus::ToleranceReached;
    } else {
        for (std::size_t step = 1;; ++step) {
            const std::size_t sel =
                select_parameter(grid, mode_values, theta, options.weights.error_weights, selected);

            // Targets for this step: normalized on the first step, Gram-Schmidt
            // residuals against the prior mode values afterwards.
            DenseMatrix z_targets(grid.m, grid.r);
            std::vector<char> valid(grid.m, 0);
            std::vector<std::size_t> dropped;
            if (step == 1) {
                double max_norm = 0.0;
                for (std::size_t i = 0; i < grid.m; ++i) {
                    max_norm = std::max(max_norm, norm2(grid.at(i, sel)));
                }
                for (std::size_t i = 0; i < grid.m; ++i) {
                    const std::span<const double> y = grid.at(i, sel);
                    const double ny = norm2(y);
                    if (ny <= 1e-14 * max_norm) {
                        dropped.push_back(i);
                        continue;
                    }
                    valid[i] = 1;
                    for (std::size_t c = 0; c < grid.r; ++c) z_targets(i, c) = y[c] / ny;
                }
            } else {
                std::vector<Vector> priors(mode_values.size());
                for (std::size_t i = 0; i < grid.m; ++i) {
                    for (std::size_t l = 0; l < mode_values.size(); ++l) {
                        const auto row = mode_values[l].row(i);
                        priors[l].assign(row.begin(), row.end());
                    }
                    const auto z = orthogonalize_targets(grid.at(i, sel), priors);
                    if (!z) {
                        dropped.push_back(i);
                        continue;
                    }
                    valid[i] = 1;
                    for (std::size_t c = 0; c < grid.r; ++c) z_targets(i, c) = (*z)[c];
                }
            }

            // A degenerate target at the selected parameter's own sample means
            // the span is exhausted there; terminate cleanly without this mode.
            if (!valid[sel]) {
                model.status = NeimStatus::BasisExhausted;
                break;
            }

            NeimMode mode;
            mode.selected_param = grid.params[sel];
            mode.selected_index = sel;
            mode.step_index = step;
            double fit_loss = 0.0;
            if (options.exact_mode) {
                Vector c(grid.r);
                for (std::size_t cc = 0; cc < grid.r; ++cc) c[cc] = z_targets(sel, cc);
                mode.constant = std::move(c);
            } else {
                WeightedDataset data;
                for (std::size_t i = 0; i < grid.m; ++i) {
                    if (!valid[i]) continue;
                    data.inputs.push_back(grid.reduced_states[i]);
                    Vector t(grid.r);
                    for (std::size_t cc = 0; cc < grid.r; ++cc) t[cc] = z_targets(i, cc);
                    data.targets.push_back(std::move(t));
                    data.sample_weights.push_back(options.weights.training_weights(
                        grid.params[i], i, grid.params[sel], sel));
                }
                MlpConfig cfg = options.net_config;
                cfg.seed = options.net_config.seed + step;  // one fresh stream per mode
                try {
                    data.validate();
                } catch (const DataError& e) {
                    throw DataError("neim_train: step " + std::to_string(step) + ": " + e.what());
                }
                TrainResult trained = mlp_train(mlp_init(cfg), data, cfg);
                fit_loss = trained.final_loss;
                mode.network = std::move(trained.net);
            }

            DenseMatrix values(grid.m, grid.r);
            for (std::size_t i = 0; i < grid.m; ++i) {
                const Vector v = mode.eval(grid.reduced_states[i]);
                for (std::size_t c = 0; c < grid.r; ++c) values(i, c) = v[c];
            }
            mode_values.push_back(std::move(values));
            selected.push_back(sel);
            model.modes.push_back(std::move(mode));

            theta = resolve_all_theta(grid, mode_values, options.weights.error_weights);

            NeimStepLog log;
            log.step = step;
            log.selected_index = sel;
            log.selected_param = grid.params[sel];
            log.per_mu_error.resize(grid.m);
            for (std::size_t j = 0; j < grid.m; ++j) {
                log.per_mu_error[j] =
                    error_quadrature(grid, mode_values, theta, options.weights.error_weights, j);
            }
            log.max_error = *std::max_element(log.per_mu_error.begin(), log.per_mu_error.end());
            log.theta = theta;
            log.dropped_samples = std::move(dropped);
            log.fit_loss = fit_loss;
            model.training_log.push_back(std::move(log));

            if (options.observer) {
                options.observer(NeimStepObservation{step, sel, z_targets, valid, mode_values});
            }

            const double max_err = model.training_log.back().max_error;
            if (max_err <= options.stop.tol) {
                model.status = NeimStatus::ToleranceReached;
                break;
            }
            if (options.stop.elbow_fraction > 0.0 && step >= 2) {
                auto decrease = [&](std::size_t s) {  // relative decrease at step s (1-based)
                    const double prev = s == 1 ? model.initial_max_error
                                               : model.training_log[s - 2].max_error;
                    const double cur = model.training_log[s - 1].max_error;
                    return prev > 0.0 ? (prev - cur) / prev : 0.0;
                };
                if (decrease(step) < options.stop.elbow_fraction &&
                    decrease(step - 1) < options.stop.elbow_fraction) {
                    model.status = NeimStatus::Elbow;
                    break;
                }
            }
            if (step == mode_cap) {
                if (mode_cap == options.stop.max_modes) model.status = NeimStatus::MaxModes;
                else if (mode_cap == grid.r) model.status = NeimStatus::ModeCapReached;
                else model.status = NeimStatus::CandidatesExhausted;
                break;
            }
        }
    }

    model.theta_table = theta;
    if (!model.modes.empty()) {
        model.theta_interpolants = finalize_theta(theta, grid.params, options.theta_method);
    }

    model.in_sample_diag = DenseMatrix(grid.m, grid.r);
    for (std::size_t i = 0; i < grid.m; ++i) {
        for (std::size_t l = 0; l < mode_values.size(); ++l) {
            axpy(theta(i, l), mode_values[l].row(i), model.in_sample_diag.row(i));
        }
    }
    return model;
}

NeimModel neim_train(const SnapshotSet& snapshots, const PodBasis& basis,
                     const Nonlinearity& nonlinearity, const NeimTrainOptions& options) {
    return neim_train(build_training_grid(snapshots, basis, nonlinearity), options);
}

Vector ThetaInterpolant::eval(std::span<const double> mu) const {
    Vector out;
    if (!curves.empty()) {
        out.reserve(curves.size());
        for (const auto& c : curves) out.push_back(c(mu[0]));
    } else {
        out.reserve(lookups.size());
        for (const auto& l : lookups) out.push_back(l(mu));
    }
    return out;
}

std::size_t ThetaInterpolant::coefficient_count() const {
    return curves.empty() ? lookups.size() : curves.size();
}

ThetaInterpolant finalize_theta(const DenseMatrix& theta_table,
                                const std::vector<Vector>& params, ThetaInterpolation method) {
    if (params.empty() || theta_table.rows() != params.size()) {
        throw DataError("finalize_theta: parameter/table size mismatch");
    }
    ThetaInterpolant out;
    out.method = method;
    const std::size_t k = theta_table.cols();
    const bool one_dimensional = params.front().size() == 1;

    if (one_dimensional && params.size() >= 2 && method != ThetaInterpolation::NearestNeighbor) {
        Vector xs(params.size());
        for (std::size_t i = 0; i < params.size(); ++i) xs[i] = params[i][0];
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            if (xs[i] == xs[i + 1]) throw DataError("finalize_theta: duplicate parameters");
            if (xs[i] > xs[i + 1]) throw DataError("finalize_theta: parameters must be ascending");
        }
        const InterpMethod m = method == ThetaInterpolation::CubicSpline
                                   ? InterpMethod::CubicSpline
                                   : InterpMethod::PiecewiseLinear;
        for (std::size_t l = 0; l < k; ++l) {
            out.curves.emplace_back(xs, theta_table.column(l), m);
        }
        return out;
    }

    for (std::size_t l = 0; l < k; ++l) {
        out.lookups.emplace_back(params, theta_table.column(l));
    }
    return out;
}

Vector neim_eval(const NeimModel& model, std::span<const double> v_reduced,
                 std::span<const double> mu) {
    Vector out(model.in_sample_diag.cols(), 0.0);
    if (model.modes.empty()) return out;
    const Vector theta = model.theta_interpolants.eval(mu);
    for (std::size_t l = 0; l < model.modes.size(); ++l) {
        const Vector v = model.modes[l].eval(v_reduced);
        axpy(theta[l], v, out);
    }
    return out;
}

NeimStepEvaluator::NeimStepEvaluator(const NeimModel& model, std::size_t modes)
    : model_(&model), modes_(std::min(modes, model.modes.size())) {
    if (model.modes.empty()) throw DataError("NeimStepEvaluator: model has no modes");
    if (modes_ == 0) throw DataError("NeimStepEvaluator: need at least one mode");
    interpolants_ = finalize_theta(model.training_log[modes_ - 1].theta, model.params,
                                   model.theta_method);
}

Vector NeimStepEvaluator::operator()(std::span<const double> v_reduced,
                                     std::span<const double> mu) const {
    const Vector theta = interpolants_.eval(mu);
    Vector out(model_->in_sample_diag.cols(), 0.0);
    for (std::size_t l = 0; l < modes_; ++l) {
        const Vector v = model_->modes[l].eval(v_reduced);
        axpy(theta[l], v, out);
    }
    return out;
}

std::vector<ErrorDecompositionRow> error_decomposition_report(
    const NeimModel& model, const NeimModel& exact_twin, const TrainingGrid& grid,
    const std::vector<Vector>& eval_params, const DenseEvaluator& dense_eval) {
    const std::size_t k = std::min(model.modes.size(), exact_twin.modes.size());
    if (k == 0) throw DataError("error_decomposition_report: untrained model or twin");

    // Exact mode vectors as columns.
    DenseMatrix c_exact(grid.r, k);
    for (std::size_t l = 0; l < k; ++l) {
        const Vector& c = *exact_twin.modes[l].constant;
        for (std::size_t i = 0; i < grid.r; ++i) c_exact(i, l) = c[i];
    }

    std::vector<ErrorDecompositionRow> rows;
    rows.reserve(eval_params.size());
    for (const Vector& mu : eval_params) {
        auto [state, n_exact] = dense_eval(mu);

        // Model mode values at this state.
        DenseMatrix m_vals(grid.r, k);
        for (std::size_t l = 0; l < k; ++l) {
            const Vector v = model.modes[l].eval(state);
            for (std::size_t i = 0; i < grid.r; ++i) m_vals(i, l) = v[i];
        }

        // Reference theta*: the same weighted solve the training loop uses
        // when mu is a training parameter; otherwise the pointwise fit of the
        // exact value with the model's mode values (the only data available
        // off the grid when the weights vanish there).
        std::size_t node = grid.m;
        for (std::size_t j = 0; j < grid.m; ++j) {
            if (grid.params[j] == mu) {
                node = j;
                break;
            }
        }
        Vector theta_star;
        if (node < grid.m) {
            std::vector<DenseMatrix> mode_values(k);
            for (std::size_t l = 0; l < k; ++l) {
                mode_values[l] = DenseMatrix(grid.m, grid.r);
                for (std::size_t i = 0; i < grid.m; ++i) {
                    const Vector v = model.modes[l].eval(grid.reduced_states[i]);
                    for (std::size_t c = 0; c < grid.r; ++c) mode_values[l](i, c) = v[c];
                }
            }
            theta_star = solve_theta(grid, mode_values, model.weights.error_weights, node);
        } else {
            theta_star = lstsq_svd(m_vals, n_exact, 1e-12);
        }

        const Vector theta_hat_full = model.theta_interpolants.eval(mu);
        Vector theta_hat(theta_hat_full.begin(), theta_hat_full.begin() + k);

        ErrorDecompositionRow row;
        row.mu = mu;

        Vector approx(grid.r, 0.0);
        for (std::size_t l = 0; l < k; ++l) axpy(theta_hat[l], m_vals.column(l), approx);
        row.total = norm2(vec_sub(n_exact, approx));

        const Vector c_fit = lstsq_svd(c_exact, n_exact, 1e-12);
        Vector c_best(grid.r, 0.0);
        for (std::size_t l = 0; l < k; ++l) axpy(c_fit[l], c_exact.column(l), c_best);
        row.projection = norm2(vec_sub(n_exact, c_best));

        double loose_projection = 0.0;
        {
            Vector fit(grid.r, 0.0);
            for (std::size_t l = 0; l < k; ++l) axpy(theta_star[l], c_exact.column(l), fit);
            loose_projection = norm2(vec_sub(n_exact, fit));
        }
        for (std::size_t l = 0; l < k; ++l) {
            row.training +=
                std::abs(theta_star[l]) * norm2(vec_sub(m_vals.column(l), c_exact.column(l)));
            row.interpolation +=
                std::abs(theta_hat[l] - theta_star[l]) * norm2(m_vals.column(l));
        }
        row.bound = loose_projection + row.training + row.interpolation;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace neimkit
