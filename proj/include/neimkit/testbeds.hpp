// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

#include "neimkit/deim.hpp"
#include "neimkit/neim.hpp"
#include "neimkit/pod.hpp"

namespace neimkit {

/// Uniform grid on [-1, 1]. h_inv_sq is the finite-difference scaling of the
/// second-difference matrix, a free problem constant here (not 1/h^2 of the
/// grid spacing).
struct Grid1D {
    std::size_t n = 0;
    Vector x;
    double h_inv_sq = 30.0;

    static Grid1D uniform(std::size_t n, double h_inv_sq);
};

/// Poisson problem with a parameterized oscillatory forcing; the nonlinearity
/// handed to the hyper-reduction pipeline is the forcing itself (independent
/// of the state).
struct Exp1Problem {
    Grid1D grid;
    double mu_min = 1.0;
    double mu_max = 3.141592653589793;
    std::size_t m = 51;

    static double forcing(double x, double mu);
    Vector forcing_vec(double mu) const;

    /// Interior second-difference solve with pinned boundary values.
    Vector solve(double mu) const;

    Vector training_parameters() const;
    SnapshotSet snapshots() const;
    Nonlinearity nonlinearity() const;
    RowNonlinearity row_nonlinearity() const;
};

/// Nonlinear elliptic problem with a state-dependent exponential term,
/// solved by full-step Newton iteration.
struct Exp2Problem {
    Grid1D grid;
    double mu_min = 1.0;
    double mu_max = 3.141592653589793;
    std::size_t m = 51;
    double newton_tol = 1e-10;
    std::size_t newton_max_iter = 50;

    static double nonlinearity_scalar(double x, double v, double mu);
    static double nonlinearity_dv(double x, double v, double mu);
    Vector nonlinearity_vec(std::span<const double> v, double mu) const;

    /// Newton iteration on F(v) = A~ v - f(v; mu) with identity boundary rows,
    /// starting from v = 0; throws ConvergenceError with the final residual.
    Vector solve(double mu) const;

    Vector training_parameters() const;
    SnapshotSet snapshots() const;
    Nonlinearity nonlinearity() const;
    RowNonlinearity row_nonlinearity() const;

    /// Padded system matrix: h_inv_sq-scaled second differences on the
    /// interior, identity rows at the boundary.
    DenseMatrix padded_matrix() const;
};

/// (1/m_test) sum_j ||approx(mu_j) - exact(mu_j)||_2
double avg_abs_error(const std::function<Vector(double)>& approx,
                     const std::function<Vector(double)>& exact, std::span<const double> test_params);

Vector equally_spaced(double lo, double hi, std::size_t count);

struct RomSolveResult {
    Vector v_reduced;
    Vector residual_history;  // ||R||_inf per iteration, including the initial guess
    std::size_t iterations = 0;
};

/// Reduced nonlinearity surrogate at a fixed parameter.
using ReducedNonlinearity = std::function<Vector(std::span<const double> v_reduced)>;

/// Online reduced solve of the second experiment: Newton on
/// R(v~) = A~_r v~ - N^(v~) with the surrogate Jacobian approximated by
/// forward finite differences (step 1e-6). Throws ConvergenceError with the
/// residual history on failure.
RomSolveResult rom_solve_exp2(const Exp2Problem& problem, const PodBasis& basis,
                              const ReducedNonlinearity& surrogate,
                              std::span<const double> initial_guess, double tol = 1e-8,
                              std::size_t max_iter = 100);

/// Projection of the training snapshot whose parameter is closest to mu;
/// the documented initial guess for rom_solve_exp2.
Vector nearest_snapshot_guess(const SnapshotSet& snapshots, const PodBasis& basis, double mu);

}  // namespace neimkit
