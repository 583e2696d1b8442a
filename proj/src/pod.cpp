// SPDX-License-Identifier: Apache-2.0
#include "neimkit/pod.hpp"

#include <cmath>
#include <string>

#include "neimkit/errors.hpp"
#include "neimkit/numkit.hpp"

namespace neimkit {

void SnapshotSet::validate() const {
    if (parameters.empty()) throw DataError("SnapshotSet: empty");
    if (snapshots.cols() != parameters.size()) {
        throw DataError("SnapshotSet: parameter/snapshot counts differ");
    }
    if (!snapshots.all_finite()) throw DataError("SnapshotSet: non-finite snapshot entry");
    for (std::size_t i = 0; i < parameters.size(); ++i) {
        if (!all_finite(parameters[i])) throw DataError("SnapshotSet: non-finite parameter");
        if (parameters[i].size() != parameters.front().size()) {
            throw DataError("SnapshotSet: ragged parameters");
        }
        for (std::size_t j = i + 1; j < parameters.size(); ++j) {
            if (parameters[i] == parameters[j]) {
                throw DataError("SnapshotSet: duplicate parameter at indices " +
                                std::to_string(i) + ", " + std::to_string(j));
            }
        }
    }
}

namespace {

PodBasis truncate(SvdResult f, std::size_t rank) {
    PodBasis basis;
    basis.r = rank;
    basis.sigma = std::move(f.sigma);
    basis.u_r = DenseMatrix(f.u.rows(), rank);
    for (std::size_t j = 0; j < rank; ++j) {
        // Sign convention: largest-magnitude entry nonnegative (first index
        // wins ties) so serialized bases are reproducible.
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < f.u.rows(); ++i) {
            const double a = std::abs(f.u(i, j));
            if (a > best) {
                best = a;
                arg = i;
            }
        }
        const double sign = f.u(arg, j) < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < f.u.rows(); ++i) basis.u_r(i, j) = sign * f.u(i, j);
    }
    return basis;
}

}  // namespace

PodBasis compute_pod(const SnapshotSet& snapshots, std::size_t rank) {
    snapshots.validate();
    const std::size_t kmax = std::min(snapshots.snapshots.rows(), snapshots.snapshots.cols());
    if (rank == 0 || rank > kmax) {
        throw DataError("compute_pod: rank " + std::to_string(rank) + " out of range [1, " +
                        std::to_string(kmax) + "]");
    }
    return truncate(svd(snapshots.snapshots), rank);
}

PodBasis compute_pod_energy(const SnapshotSet& snapshots, double energy_tol) {
    snapshots.validate();
    if (!(energy_tol >= 0.0 && energy_tol < 1.0)) {
        throw ConfigError("compute_pod_energy: energy_tol must be in [0, 1)");
    }
    SvdResult f = svd(snapshots.snapshots);
    double total = 0.0;
    for (double s : f.sigma) total += s * s;
    std::size_t rank = f.sigma.size();
    if (total > 0.0) {
        double acc = 0.0;
        for (std::size_t i = 0; i < f.sigma.size(); ++i) {
            acc += f.sigma[i] * f.sigma[i];
            if (acc / total >= 1.0 - energy_tol) {
                rank = i + 1;
                break;
            }
        }
    } else {
        rank = 1;
    }
    return truncate(std::move(f), rank);
}

Vector project(const PodBasis& basis, std::span<const double> v) {
    if (v.size() != basis.u_r.rows()) throw DataError("project: dimension mismatch");
    return matvec_transposed(basis.u_r, v);
}

Vector lift(const PodBasis& basis, std::span<const double> v_reduced) {
    if (v_reduced.size() != basis.u_r.cols()) throw DataError("lift: dimension mismatch");
    return matvec(basis.u_r, v_reduced);
}

}  // namespace neimkit
