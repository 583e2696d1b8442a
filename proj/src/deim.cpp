// SPDX-License-Identifier: Apache-2.0
#include "neimkit/deim.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "neimkit/errors.hpp"
#include "neimkit/numkit.hpp"

namespace neimkit {

namespace {

// Guard against genuinely dependent snapshot sets. The useful basis
// directions of the benchmark problems sit only a few decades above machine
// epsilon, so this has to stay near the rounding floor; conditioning
// problems inside the greedy loop are caught separately.
constexpr double kIndependenceTol = 20.0 * std::numeric_limits<double>::epsilon();

std::size_t argmax_abs(std::span<const double> v) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > best) {  // strict: smallest index wins ties
            best = a;
            arg = i;
        }
    }
    return arg;
}

}  // namespace

DeimModel deim_select(const std::vector<Vector>& nonlinear_snapshots, std::size_t k,
                      const PodBasis& basis) {
    if (nonlinear_snapshots.empty()) throw DataError("deim_select: no snapshots");
    if (k == 0 || k > nonlinear_snapshots.size()) {
        throw DataError("deim_select: k out of range");
    }
    const DenseMatrix sn = DenseMatrix::from_columns(nonlinear_snapshots);
    if (sn.rows() != basis.u_r.rows()) {
        throw DataError("deim_select: snapshot dimension does not match the POD basis");
    }

    const SvdResult f = svd(sn);
    if (f.sigma[k - 1] < kIndependenceTol * f.sigma[0]) {
        throw DegeneracyError("deim_select: snapshots not linearly independent to tolerance for k=" +
                              std::to_string(k) + " (sigma_k/sigma_1 = " +
                              std::to_string(f.sigma[k - 1] / (f.sigma[0] > 0 ? f.sigma[0] : 1.0)) +
                              ")");
    }

    const std::size_t n = sn.rows();
    DenseMatrix v_k(n, k);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < n; ++i) v_k(i, j) = f.u(i, j);

    std::vector<std::size_t> indices;
    indices.push_back(argmax_abs(v_k.column(0)));
    for (std::size_t l = 1; l < k; ++l) {
        // Solve (P^T V_l) c = P^T v_l over the l indices found so far.
        DenseMatrix pv(l, l);
        Vector rhs(l);
        for (std::size_t i = 0; i < l; ++i) {
            for (std::size_t j = 0; j < l; ++j) pv(i, j) = v_k(indices[i], j);
            rhs[i] = v_k(indices[i], l);
        }
        Vector c;
        try {
            c = solve_linear(pv, rhs);
        } catch (const SingularMatrixError& e) {
            throw DegeneracyError("deim_select: P^T V_k near-singular at step " +
                                  std::to_string(l + 1) + " (" + e.what() + ")");
        }
        Vector residual = v_k.column(l);
        for (std::size_t j = 0; j < l; ++j) axpy(-c[j], v_k.column(j), residual);
        indices.push_back(argmax_abs(residual));
    }

    DeimModel model;
    model.v_k = std::move(v_k);
    model.indices = std::move(indices);

    // projector = U_r^T V_k (P^T V_k)^{-1}, solved column by column through
    // the transposed system (P^T V_k)^T X^T = (U_r^T V_k)^T.
    DenseMatrix pvk(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) pvk(i, j) = model.v_k(model.indices[i], j);
    const DenseMatrix uv = matmul(transpose(basis.u_r), model.v_k);  // r x k
    const DenseMatrix pvk_t = transpose(pvk);
    const std::size_t r = basis.r;
    model.projector = DenseMatrix(r, k);
    for (std::size_t i = 0; i < r; ++i) {
        Vector row(k);
        for (std::size_t j = 0; j < k; ++j) row[j] = uv(i, j);
        Vector x;
        try {
            x = solve_linear(pvk_t, row);
        } catch (const SingularMatrixError& e) {
            throw DegeneracyError(std::string("deim_select: P^T V_k not invertible (") + e.what() +
                                  ")");
        }
        for (std::size_t j = 0; j < k; ++j) model.projector(i, j) = x[j];
    }

    model.selected_rows_of_u = DenseMatrix(k, r);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < r; ++j) model.selected_rows_of_u(i, j) =
            basis.u_r(model.indices[i], j);
    return model;
}

DeimModel deim_truncate(const DeimModel& model, const PodBasis& basis, std::size_t q) {
    const std::size_t k = model.indices.size();
    if (q == 0) throw DataError("deim_truncate: q must be >= 1");
    if (q >= k) return model;

    const std::size_t n = model.v_k.rows();
    DeimModel out;
    out.v_k = DenseMatrix(n, q);
    for (std::size_t j = 0; j < q; ++j)
        for (std::size_t i = 0; i < n; ++i) out.v_k(i, j) = model.v_k(i, j);
    out.indices.assign(model.indices.begin(), model.indices.begin() + q);

    DenseMatrix pvq(q, q);
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j) pvq(i, j) = out.v_k(out.indices[i], j);
    const DenseMatrix uv = matmul(transpose(basis.u_r), out.v_k);
    const DenseMatrix pvq_t = transpose(pvq);
    out.projector = DenseMatrix(basis.r, q);
    for (std::size_t i = 0; i < basis.r; ++i) {
        Vector row(q);
        for (std::size_t j = 0; j < q; ++j) row[j] = uv(i, j);
        const Vector x = solve_linear(pvq_t, row);
        for (std::size_t j = 0; j < q; ++j) out.projector(i, j) = x[j];
    }
    out.selected_rows_of_u = DenseMatrix(q, basis.r);
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < basis.r; ++j) out.selected_rows_of_u(i, j) =
            basis.u_r(out.indices[i], j);
    return out;
}

Vector deim_eval(const DeimModel& model, const RowNonlinearity& nl_rows,
                 std::span<const double> v_reduced, std::span<const double> mu) {
    const std::size_t k = model.indices.size();
    if (v_reduced.size() != model.selected_rows_of_u.cols()) {
        throw DataError("deim_eval: reduced state size mismatch");
    }
    Vector sampled(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double v_row = dot(model.selected_rows_of_u.row(i), v_reduced);
        sampled[i] = nl_rows(model.indices[i], v_row, mu);
    }
    return matvec(model.projector, sampled);
}

}  // namespace neimkit
