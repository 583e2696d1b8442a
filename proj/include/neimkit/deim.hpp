// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

#include "neimkit/pod.hpp"

namespace neimkit {

/// Componentwise nonlinearity sampled at one row: (row index, value of the
/// lifted state at that row, parameter) -> nonlinearity entry.
using RowNonlinearity =
    std::function<double(std::size_t row, double v_row, std::span<const double> mu)>;

/// Greedy interpolation indices, nonlinearity POD basis, and the precomputed
/// oblique-projection factors. Immutable after construction.
struct DeimModel {
    DenseMatrix v_k;                 // n x k nonlinearity basis
    std::vector<std::size_t> indices;  // k distinct rows p_1..p_k
    DenseMatrix projector;           // r x k: U_r^T V_k (P^T V_k)^{-1}
    DenseMatrix selected_rows_of_u;  // k x r: rows of U_r at the indices
};

/// Greedy index selection over the leading k POD modes of the nonlinear
/// snapshot matrix. The first index maximizes |first basis vector|; each
/// later index maximizes the interpolation residual, smallest index on ties.
/// Throws DegeneracyError if the snapshots are not independent to tolerance
/// or P^T V_k goes near-singular during the loop.
DeimModel deim_select(const std::vector<Vector>& nonlinear_snapshots, std::size_t k,
                      const PodBasis& basis);

/// Online evaluation of U_r^T N(U_r v~; mu): samples the nonlinearity at the
/// k selected rows only, then applies the precomputed projector. Cost O(kr).
Vector deim_eval(const DeimModel& model, const RowNonlinearity& nl_rows,
                 std::span<const double> v_reduced, std::span<const double> mu);

/// Restriction of a model to its first q modes. The greedy index sequence is
/// prefix-stable, so this reproduces exactly what deim_select would build at
/// the smaller count; used by mode-count sweeps.
DeimModel deim_truncate(const DeimModel& model, const PodBasis& basis, std::size_t q);

}  // namespace neimkit
