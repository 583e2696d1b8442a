// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "neimkit/dense_matrix.hpp"

namespace neimkit {

/// High-fidelity snapshots paired with their parameters. Column j of
/// `snapshots` is the solution for `parameters[j]`.
struct SnapshotSet {
    std::vector<Vector> parameters;
    DenseMatrix snapshots;  // n x m

    void validate() const;  // throws DataError
    std::size_t count() const { return parameters.size(); }
    std::size_t dimension() const { return snapshots.rows(); }
};

/// Truncated left singular basis of the snapshot matrix plus the full
/// singular value array. Column signs are fixed so the largest-magnitude
/// entry of every basis column is nonnegative.
struct PodBasis {
    DenseMatrix u_r;  // n x r
    Vector sigma;     // all min(n, m) singular values
    std::size_t r = 0;
};

PodBasis compute_pod(const SnapshotSet& snapshots, std::size_t rank);

/// Rank chosen as the smallest r with sum_{i<=r} sigma_i^2 >= (1 - energy_tol)
/// times the total.
PodBasis compute_pod_energy(const SnapshotSet& snapshots, double energy_tol);

Vector project(const PodBasis& basis, std::span<const double> v);  // U_r^T v
Vector lift(const PodBasis& basis, std::span<const double> v_reduced);  // U_r v~

}  // namespace neimkit
