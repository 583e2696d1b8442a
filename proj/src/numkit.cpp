// SPDX-License-Identifier: Apache-2.0
#include "neimkit/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "neimkit/errors.hpp"

namespace neimkit {

namespace {

constexpr int kMaxJacobiSweeps = 64;
constexpr double kJacobiTol = 1e-15;

// One-sided Jacobi on a matrix with rows >= cols: orthogonalize the columns
// of w by plane rotations, accumulating them into v (cols x cols).
void jacobi_orthogonalize(DenseMatrix& w, DenseMatrix& v) {
    const std::size_t n = w.rows();
    const std::size_t k = w.cols();
    for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < k; ++p) {
            for (std::size_t q = p + 1; q < k; ++q) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double wp = w(i, p);
                    const double wq = w(i, q);
                    alpha += wp * wp;
                    beta += wq * wq;
                    gamma += wp * wq;
                }
                if (alpha == 0.0 || beta == 0.0) continue;
                if (std::abs(gamma) <= kJacobiTol * std::sqrt(alpha * beta)) continue;
                rotated = true;

                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < n; ++i) {
                    const double wp = w(i, p);
                    const double wq = w(i, q);
                    w(i, p) = c * wp - s * wq;
                    w(i, q) = s * wp + c * wq;
                }
                for (std::size_t i = 0; i < k; ++i) {
                    const double vp = v(i, p);
                    const double vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) return;
    }
    throw ConvergenceError("svd: one-sided Jacobi did not converge in " +
                           std::to_string(kMaxJacobiSweeps) + " sweeps");
}

// Fill column j of u with a unit vector orthogonal to columns [0, j) by
// orthogonalizing canonical basis vectors; used for zero singular values.
void complete_basis_column(DenseMatrix& u, std::size_t j) {
    const std::size_t n = u.rows();
    for (std::size_t t = 0; t < n; ++t) {
        Vector cand(n, 0.0);
        cand[t] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t l = 0; l < j; ++l) {
                double proj = 0.0;
                for (std::size_t i = 0; i < n; ++i) proj += cand[i] * u(i, l);
                for (std::size_t i = 0; i < n; ++i) cand[i] -= proj * u(i, l);
            }
        }
        const double nrm = norm2(cand);
        if (nrm > 0.5) {
            for (std::size_t i = 0; i < n; ++i) u(i, j) = cand[i] / nrm;
            return;
        }
    }
    throw ConvergenceError("svd: failed to complete an orthonormal basis");
}

SvdResult svd_tall(const DenseMatrix& m) {
    const std::size_t n = m.rows();
    const std::size_t k = m.cols();
    DenseMatrix w = m;
    DenseMatrix v = DenseMatrix::identity(k);
    jacobi_orthogonalize(w, v);

    Vector sigma(k);
    for (std::size_t j = 0; j < k; ++j) sigma[j] = norm2(w.column(j));

    // Sort nonincreasing, stable on the original column order.
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

    SvdResult out;
    out.u = DenseMatrix(n, k);
    out.sigma.resize(k);
    out.vt = DenseMatrix(k, k);
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t src = order[j];
        out.sigma[j] = sigma[src];
        if (sigma[src] > 0.0) {
            for (std::size_t i = 0; i < n; ++i) out.u(i, j) = w(i, src) / sigma[src];
        }
        for (std::size_t i = 0; i < k; ++i) out.vt(j, i) = v(i, src);
    }
    for (std::size_t j = 0; j < k; ++j) {
        if (out.sigma[j] == 0.0) complete_basis_column(out.u, j);
    }
    return out;
}

}  // namespace

SvdResult svd(const DenseMatrix& m) {
    if (m.empty()) throw DataError("svd: empty matrix");
    if (!m.all_finite()) throw DataError("svd: non-finite entry");
    if (m.rows() >= m.cols()) return svd_tall(m);
    // Wide matrix: factor the transpose and swap the roles of u and v.
    SvdResult t = svd_tall(transpose(m));
    SvdResult out;
    out.u = transpose(t.vt);
    out.sigma = std::move(t.sigma);
    out.vt = transpose(t.u);
    return out;
}

Vector solve_linear(const DenseMatrix& a, std::span<const double> b) {
    const std::size_t n = a.rows();
    if (n == 0 || a.cols() != n) throw DataError("solve_linear: matrix must be square");
    if (b.size() != n) throw DataError("solve_linear: rhs size mismatch");

    double norm_a = 0.0;  // infinity norm = max row sum
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += std::abs(a(i, j));
        norm_a = std::max(norm_a, s);
    }
    const double pivot_tol = 1e-14 * norm_a;

    DenseMatrix lu = a;
    Vector x(b.begin(), b.end());
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::abs(lu(col, col));
        for (std::size_t i = col + 1; i < n; ++i) {
            const double v = std::abs(lu(i, col));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best < pivot_tol || best == 0.0) {
            throw SingularMatrixError("solve_linear: pivot " + std::to_string(best) +
                                      " below tolerance at column " + std::to_string(col));
        }
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(col, j), lu(piv, j));
            std::swap(x[col], x[piv]);
        }
        const double d = lu(col, col);
        for (std::size_t i = col + 1; i < n; ++i) {
            const double f = lu(i, col) / d;
            if (f == 0.0) continue;
            lu(i, col) = f;
            for (std::size_t j = col + 1; j < n; ++j) lu(i, j) -= f * lu(col, j);
            x[i] -= f * x[col];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= lu(i, j) * x[j];
        x[i] = s / lu(i, i);
    }
    return x;
}

Vector lstsq_svd(const DenseMatrix& a, std::span<const double> b, double cutoff) {
    if (a.rows() == 0) throw DataError("lstsq_svd: empty matrix");
    if (b.size() != a.rows()) throw DataError("lstsq_svd: rhs size mismatch");
    const SvdResult f = svd(a);
    const double smax = f.sigma.empty() ? 0.0 : f.sigma.front();
    Vector x(a.cols(), 0.0);
    if (smax == 0.0) return x;
    for (std::size_t j = 0; j < f.sigma.size(); ++j) {
        if (f.sigma[j] <= cutoff * smax) break;  // sigma is nonincreasing
        const double coef = dot(f.u.column(j), b) / f.sigma[j];
        axpy(coef, f.vt.row(j), x);
    }
    return x;
}

Vector solve_tridiagonal(std::span<const double> diag, std::span<const double> lower,
                         std::span<const double> upper, std::span<const double> b) {
    const std::size_t n = diag.size();
    if (n == 0) throw DataError("solve_tridiagonal: empty system");
    if (lower.size() != n - 1 || upper.size() != n - 1 || b.size() != n) {
        throw DataError("solve_tridiagonal: inconsistent lengths");
    }
    double scale = 0.0;
    for (double v : diag) scale = std::max(scale, std::abs(v));
    for (double v : lower) scale = std::max(scale, std::abs(v));
    for (double v : upper) scale = std::max(scale, std::abs(v));
    const double pivot_tol = 1e-14 * scale;

    Vector c(n - 1), x(b.begin(), b.end()), d(diag.begin(), diag.end());
    if (std::abs(d[0]) <= pivot_tol) throw SingularMatrixError("solve_tridiagonal: zero pivot at row 0");
    for (std::size_t i = 0; i + 1 < n; ++i) {
        c[i] = upper[i] / d[i];
        x[i] /= d[i];
        d[i + 1] -= lower[i] * c[i];
        x[i + 1] -= lower[i] * x[i];
        if (std::abs(d[i + 1]) <= pivot_tol) {
            throw SingularMatrixError("solve_tridiagonal: zero pivot at row " + std::to_string(i + 1));
        }
    }
    x[n - 1] /= d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
    return x;
}

}  // namespace neimkit
