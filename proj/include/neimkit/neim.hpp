// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>

#include "neimkit/interp1d.hpp"
#include "neimkit/mlp.hpp"
#include "neimkit/pod.hpp"
#include "neimkit/weights.hpp"

namespace neimkit {

/// Full-order nonlinearity callback: (full state v, parameter mu) -> N(v; mu).
using Nonlinearity =
    std::function<Vector(std::span<const double> v, std::span<const double> mu)>;

/// Precomputed reduced nonlinearity table over all (snapshot, parameter)
/// pairs: g[i][j] = U_r^T N(v_i; mu_j). The raw material of every greedy step.
struct TrainingGrid {
    std::vector<Vector> params;          // m parameters
    std::vector<Vector> reduced_states;  // m reduced states v~_i = U_r^T v_i
    Vector g;                            // m*m*r, entry ((i*m)+j)*r + c
    std::size_t m = 0;
    std::size_t r = 0;

    std::span<const double> at(std::size_t i, std::size_t j) const {
        return {g.data() + ((i * m) + j) * r, r};
    }
};

/// Evaluates the nonlinearity at every (snapshot, parameter) pair (m^2
/// callback invocations). Throws DataError naming (i, j) on a non-finite
/// value.
TrainingGrid build_training_grid(const SnapshotSet& snapshots, const PodBasis& basis,
                                 const Nonlinearity& nonlinearity);

/// One term of the affine expansion: a trained network, or in exact mode the
/// constant target vector it would approximate.
struct NeimMode {
    Vector selected_param;
    std::size_t selected_index = 0;
    std::size_t step_index = 0;  // 1-based
    std::optional<Mlp> network;
    std::optional<Vector> constant;

    Vector eval(std::span<const double> v_reduced) const;
    bool is_exact() const { return constant.has_value(); }
};

struct StoppingCriteria {
    double tol = 0.0;             // on the max weighted error quadrature
    std::size_t max_modes = 1;
    double elbow_fraction = 0.0;  // stop when the relative decrease stays below
                                  // this for two consecutive steps; 0 disables

    void validate() const;  // throws ConfigError
};

enum class NeimStatus {
    ToleranceReached,
    MaxModes,
    Elbow,
    BasisExhausted,       // degenerate orthogonalization residual
    CandidatesExhausted,  // every training parameter selected
    ModeCapReached,       // mode count reached the reduced dimension r
};

const char* to_string(NeimStatus status);

struct NeimStepLog {
    std::size_t step = 0;  // 1-based
    std::size_t selected_index = 0;
    Vector selected_param;
    double max_error = 0.0;    // max over mu of the weighted error quadrature
    Vector per_mu_error;       // m values, after this step's theta solve
    DenseMatrix theta;         // m x step snapshot of the theta table
    std::vector<std::size_t> dropped_samples;  // zero-norm / degenerate targets
    double fit_loss = 0.0;     // final network training loss (0 in exact mode)
};

enum class ThetaInterpolation { PiecewiseLinear, CubicSpline, NearestNeighbor };

/// Per-coefficient interpolant of the theta table over the training
/// parameters; 1-D domains use Interp1D, higher dimensions fall back to
/// nearest-neighbor lookup.
struct ThetaInterpolant {
    ThetaInterpolation method = ThetaInterpolation::CubicSpline;
    std::vector<Interp1D> curves;                    // 1-D path
    std::vector<NearestNeighborLookup> lookups;      // fallback path

    Vector eval(std::span<const double> mu) const;   // theta_1..theta_k at mu
    std::size_t coefficient_count() const;
};

struct NeimModel {
    std::vector<Vector> params;  // training parameters, the theta-table rows
    std::vector<NeimMode> modes;
    DenseMatrix theta_table;     // m x k, final step
    ThetaInterpolant theta_interpolants;
    ThetaInterpolation theta_method = ThetaInterpolation::CubicSpline;
    WeightScheme weights;
    std::vector<NeimStepLog> training_log;
    double initial_max_error = 0.0;  // zero-mode baseline
    Vector initial_per_mu_error;
    NeimStatus status = NeimStatus::MaxModes;
    DenseMatrix in_sample_diag;  // m x r, final N^(v~_i; mu_i) for each i

    std::size_t mode_count() const { return modes.size(); }
};

/// Weighted error quadrature sum_i w_e(mu_i; mu_j) ||g[i][j] - N^(v~_i)||^2
/// for the approximation described by (mode_values, theta); zero modes give
/// the baseline sum_i w_e ||g[i][j]||^2.
/// mode_values[l] is the m x r matrix of the l-th mode evaluated at every
/// reduced state; theta holds one coefficient column per mode.
double error_quadrature(const TrainingGrid& grid, const std::vector<DenseMatrix>& mode_values,
                        const DenseMatrix& theta, const ErrorWeights& w_e, std::size_t mu_index);

/// Argmax of the error quadrature over the non-excluded parameters, smallest
/// index on ties. Throws DegeneracyError if everything is excluded.
std::size_t select_parameter(const TrainingGrid& grid, const std::vector<DenseMatrix>& mode_values,
                             const DenseMatrix& theta, const ErrorWeights& w_e,
                             const std::vector<std::size_t>& excluded);

/// Gram-Schmidt of y against the prior mode values, iterated until the
/// residual is orthogonal to every prior, then normalized. Returns nullopt
/// when the residual norm falls below 1e-12 * ||y|| (span exhaustion).
std::optional<Vector> orthogonalize_targets(std::span<const double> y,
                                            const std::vector<Vector>& prior_mode_values);

/// Solve the j x j system A theta = b of Eq-style normal equations
///   A_kl = sum_i w_e <M_k(v~_i), M_l(v~_i)>,  b_k = sum_i w_e <M_k(v~_i), g[i][mu]>
/// for one parameter; falls back to a cutoff least-squares solve when the
/// Gram matrix is singular to tolerance.
Vector solve_theta(const TrainingGrid& grid, const std::vector<DenseMatrix>& mode_values,
                   const ErrorWeights& w_e, std::size_t mu_index);

/// Observer invoked after each training step with the orthogonalized targets
/// and the mode-value cache; used by invariant tests.
struct NeimStepObservation {
    std::size_t step;
    std::size_t selected_index;
    const DenseMatrix& z_targets;               // m x r (rows of dropped samples are zero)
    const std::vector<char>& sample_valid;      // m flags
    const std::vector<DenseMatrix>& mode_values;  // includes the new mode (last)
};
using NeimStepObserver = std::function<void(const NeimStepObservation&)>;

struct NeimTrainOptions {
    WeightScheme weights;
    StoppingCriteria stop;
    MlpConfig net_config;
    bool exact_mode = false;
    ThetaInterpolation theta_method = ThetaInterpolation::CubicSpline;
    NeimStepObserver observer;  // optional
};

/// The greedy training loop: select the worst parameter, orthogonalize the
/// targets, fit the new mode, re-solve every theta, log, repeat until a
/// stopping criterion fires. Deterministic for fixed seed and inputs.
NeimModel neim_train(const TrainingGrid& grid, const NeimTrainOptions& options);

/// Convenience wrapper that builds the grid first.
NeimModel neim_train(const SnapshotSet& snapshots, const PodBasis& basis,
                     const Nonlinearity& nonlinearity, const NeimTrainOptions& options);

/// Interpolants for one coefficient table (exact at the training parameters,
/// clamped outside their range). Throws DataError on unsorted or duplicate
/// 1-D parameters.
ThetaInterpolant finalize_theta(const DenseMatrix& theta_table,
                                const std::vector<Vector>& params, ThetaInterpolation method);

/// N^(v~; mu) = sum_l theta_l(mu) M_l(v~) with interpolated coefficients.
Vector neim_eval(const NeimModel& model, std::span<const double> v_reduced,
                 std::span<const double> mu);

/// Evaluator restricted to the first `modes` steps, using that step's theta
/// table from the training log (the training history makes mode-count sweeps
/// possible without retraining).
class NeimStepEvaluator {
  public:
    NeimStepEvaluator(const NeimModel& model, std::size_t modes);

    Vector operator()(std::span<const double> v_reduced, std::span<const double> mu) const;
    std::size_t modes_used() const { return modes_; }

  private:
    const NeimModel* model_;
    std::size_t modes_;
    ThetaInterpolant interpolants_;
};

/// One row of the local error decomposition report.
struct ErrorDecompositionRow {
    Vector mu;
    double total = 0.0;          // ||N(mu) - model approximation||
    double projection = 0.0;     // best least-squares fit with the exact mode vectors
    double training = 0.0;       // sum_l |theta*_l| ||M_l(v~) - c_l||
    double interpolation = 0.0;  // sum_l |theta^_l - theta*_l| ||M_l(v~)||
    double bound = 0.0;          // ||N - C theta*|| + training + interpolation
};

/// Evaluates the exact reduced state and nonlinearity for a parameter:
/// returns (v~(mu), U_r^T N(v(mu); mu)).
using DenseEvaluator =
    std::function<std::pair<Vector, Vector>(std::span<const double> mu)>;

/// Per-parameter decomposition of the model error into projection, training,
/// and interpolation components against the exact-mode twin.
std::vector<ErrorDecompositionRow> error_decomposition_report(
    const NeimModel& model, const NeimModel& exact_twin, const TrainingGrid& grid,
    const std::vector<Vector>& eval_params, const DenseEvaluator& dense_eval);

}  // namespace neimkit
