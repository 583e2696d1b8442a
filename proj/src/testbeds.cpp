// SPDX-License-Identifier: Apache-2.0
#include "neimkit/testbeds.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "neimkit/errors.hpp"
#include "neimkit/numkit.hpp"

namespace neimkit {

Grid1D Grid1D::uniform(std::size_t n, double h_inv_sq) {
    if (n < 3) throw ConfigError("Grid1D: need at least 3 points");
    Grid1D g;
    g.n = n;
    g.h_inv_sq = h_inv_sq;
    g.x.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        g.x[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    g.x.front() = -1.0;
    g.x.back() = 1.0;
    return g;
}

double Exp1Problem::forcing(double x, double mu) {
    return (1.0 - x) * std::cos(3.0 * std::numbers::pi * mu * (x + 1.0)) *
           std::exp(-(1.0 + x) * mu);
}

Vector Exp1Problem::forcing_vec(double mu) const {
    Vector f(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) f[i] = forcing(grid.x[i], mu);
    return f;
}

Vector Exp1Problem::solve(double mu) const {
    const std::size_t n = grid.n;
    const std::size_t interior = n - 2;
    const Vector f = forcing_vec(mu);
    Vector diag(interior, 2.0 * grid.h_inv_sq);
    Vector off(interior - 1, -grid.h_inv_sq);
    Vector rhs(f.begin() + 1, f.end() - 1);
    const Vector u = solve_tridiagonal(diag, off, off, rhs);
    Vector v(n, 0.0);
    std::copy(u.begin(), u.end(), v.begin() + 1);
    return v;
}

Vector Exp1Problem::training_parameters() const { return equally_spaced(mu_min, mu_max, m); }

SnapshotSet Exp1Problem::snapshots() const {
    const Vector mus = training_parameters();
    std::vector<Vector> cols;
    std::vector<Vector> params;
    cols.reserve(m);
    for (double mu : mus) {
        cols.push_back(solve(mu));
        params.push_back({mu});
    }
    SnapshotSet set;
    set.parameters = std::move(params);
    set.snapshots = DenseMatrix::from_columns(cols);
    return set;
}

Nonlinearity Exp1Problem::nonlinearity() const {
    return [self = *this](std::span<const double>, std::span<const double> mu) {
        return self.forcing_vec(mu[0]);
    };
}

RowNonlinearity Exp1Problem::row_nonlinearity() const {
    return [self = *this](std::size_t row, double, std::span<const double> mu) {
        return forcing(self.grid.x[row], mu[0]);
    };
}

double Exp2Problem::nonlinearity_scalar(double x, double v, double mu) {
    return (1.0 - std::abs(x)) * std::exp(-(1.0 + x) * v * mu);
}

double Exp2Problem::nonlinearity_dv(double x, double v, double mu) {
    return -(1.0 + x) * mu * nonlinearity_scalar(x, v, mu);
}

Vector Exp2Problem::nonlinearity_vec(std::span<const double> v, double mu) const {
    Vector f(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) f[i] = nonlinearity_scalar(grid.x[i], v[i], mu);
    return f;
}

DenseMatrix Exp2Problem::padded_matrix() const {
    const std::size_t n = grid.n;
    DenseMatrix a(n, n);
    a(0, 0) = 1.0;
    a(n - 1, n - 1) = 1.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        a(i, i) = 2.0 * grid.h_inv_sq;
        a(i, i - 1) = -grid.h_inv_sq;
        a(i, i + 1) = -grid.h_inv_sq;
    }
    return a;
}

Vector Exp2Problem::solve(double mu) const {
    const std::size_t n = grid.n;
    Vector v(n, 0.0);
    double residual = 0.0;
    for (std::size_t it = 0; it < newton_max_iter; ++it) {
        // F(v): boundary rows pin v to zero; the boundary forcing entries
        // vanish anyway because 1 - |x| = 0 there.
        Vector f_val(n);
        f_val[0] = v[0];
        f_val[n - 1] = v[n - 1];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            f_val[i] = grid.h_inv_sq * (2.0 * v[i] - v[i - 1] - v[i + 1]) -
                       nonlinearity_scalar(grid.x[i], v[i], mu);
        }
        residual = norm_inf(f_val);
        if (residual <= newton_tol) return v;

        // Jacobian is tridiagonal: scaled second differences minus the
        // diagonal of the nonlinearity derivative, identity at the boundary.
        Vector diag(n), lower(n - 1, 0.0), upper(n - 1, 0.0);
        diag[0] = 1.0;
        diag[n - 1] = 1.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            diag[i] = 2.0 * grid.h_inv_sq - nonlinearity_dv(grid.x[i], v[i], mu);
            lower[i - 1] = -grid.h_inv_sq;
            upper[i] = -grid.h_inv_sq;
        }
        const Vector step = solve_tridiagonal(diag, lower, upper, f_val);
        for (std::size_t i = 0; i < n; ++i) v[i] -= step[i];
    }
    std::ostringstream msg;
    msg << "exp2 solve: Newton did not converge for mu=" << mu << " (residual " << residual << ")";
    throw ConvergenceError(msg.str());
}

Vector Exp2Problem::training_parameters() const { return equally_spaced(mu_min, mu_max, m); }

SnapshotSet Exp2Problem::snapshots() const {
    const Vector mus = training_parameters();
    std::vector<Vector> cols;
    std::vector<Vector> params;
    cols.reserve(m);
    for (double mu : mus) {
        cols.push_back(solve(mu));
        params.push_back({mu});
    }
    SnapshotSet set;
    set.parameters = std::move(params);
    set.snapshots = DenseMatrix::from_columns(cols);
    return set;
}

Nonlinearity Exp2Problem::nonlinearity() const {
    return [self = *this](std::span<const double> v, std::span<const double> mu) {
        return self.nonlinearity_vec(v, mu[0]);
    };
}

RowNonlinearity Exp2Problem::row_nonlinearity() const {
    return [self = *this](std::size_t row, double v_row, std::span<const double> mu) {
        return nonlinearity_scalar(self.grid.x[row], v_row, mu[0]);
    };
}

double avg_abs_error(const std::function<Vector(double)>& approx,
                     const std::function<Vector(double)>& exact,
                     std::span<const double> test_params) {
    if (test_params.empty()) throw DataError("avg_abs_error: empty test set");
    double total = 0.0;
    for (double mu : test_params) {
        total += norm2(vec_sub(approx(mu), exact(mu)));
    }
    return total / static_cast<double>(test_params.size());
}

Vector equally_spaced(double lo, double hi, std::size_t count) {
    if (count == 0) throw DataError("equally_spaced: empty");
    Vector out(count);
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    out.back() = hi;
    return out;
}

RomSolveResult rom_solve_exp2(const Exp2Problem& problem, const PodBasis& basis,
                              const ReducedNonlinearity& surrogate,
                              std::span<const double> initial_guess, double tol,
                              std::size_t max_iter) {
    const std::size_t r = basis.r;
    if (initial_guess.size() != r) throw DataError("rom_solve_exp2: initial guess size mismatch");

    // A~_r = U_r^T A~ U_r
    const DenseMatrix a_pad = problem.padded_matrix();
    const DenseMatrix a_r = matmul(transpose(basis.u_r), matmul(a_pad, basis.u_r));

    RomSolveResult out;
    out.v_reduced.assign(initial_guess.begin(), initial_guess.end());
    constexpr double fd_step = 1e-6;

    for (std::size_t it = 0; it <= max_iter; ++it) {
        const Vector n_val = surrogate(out.v_reduced);
        Vector res = matvec(a_r, out.v_reduced);
        for (std::size_t i = 0; i < r; ++i) res[i] -= n_val[i];
        out.residual_history.push_back(norm_inf(res));
        if (out.residual_history.back() <= tol) {
            out.iterations = it;
            return out;
        }
        if (it == max_iter) break;

        DenseMatrix jac = a_r;
        Vector probe(out.v_reduced);
        for (std::size_t d = 0; d < r; ++d) {
            probe[d] += fd_step;
            const Vector n_probe = surrogate(probe);
            probe[d] = out.v_reduced[d];
            for (std::size_t i = 0; i < r; ++i) {
                jac(i, d) -= (n_probe[i] - n_val[i]) / fd_step;
            }
        }
        const Vector step = solve_linear(jac, res);
        for (std::size_t i = 0; i < r; ++i) out.v_reduced[i] -= step[i];
    }

    std::ostringstream msg;
    msg << "rom_solve_exp2: no convergence after " << max_iter << " iterations; residuals:";
    for (double h : out.residual_history) msg << " " << h;
    throw ConvergenceError(msg.str());
}

Vector nearest_snapshot_guess(const SnapshotSet& snapshots, const PodBasis& basis, double mu) {
    std::size_t best = 0;
    double best_d = std::abs(snapshots.parameters[0][0] - mu);
    for (std::size_t i = 1; i < snapshots.parameters.size(); ++i) {
        const double d = std::abs(snapshots.parameters[i][0] - mu);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return project(basis, snapshots.snapshots.column(best));
}

}  // namespace neimkit
