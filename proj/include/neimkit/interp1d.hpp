// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "neimkit/dense_matrix.hpp"

namespace neimkit {

enum class InterpMethod { PiecewiseLinear, CubicSpline };

/// Interpolant over a strictly increasing 1-D knot sequence, exact at the
/// knots and clamped to the boundary values outside [x.front(), x.back()].
/// The cubic variant uses not-a-knot end conditions (the usual default of
/// numerical libraries); with two knots it degenerates to a line, with
/// three to the unique parabola.
class Interp1D {
  public:
    Interp1D() = default;
    Interp1D(Vector x, Vector y, InterpMethod method);

    double operator()(double x) const;

    InterpMethod method() const { return method_; }
    const Vector& knots() const { return x_; }
    const Vector& values() const { return y_; }

  private:
    InterpMethod method_ = InterpMethod::PiecewiseLinear;
    Vector x_;
    Vector y_;
    Vector second_derivatives_;  // cubic only

    std::size_t interval(double x) const;
};

/// Fallback lookup for parameter domains with dimension > 1: the value at
/// the nearest training point (Euclidean distance, smallest index on ties).
class NearestNeighborLookup {
  public:
    NearestNeighborLookup() = default;
    NearestNeighborLookup(std::vector<Vector> points, Vector values);

    double operator()(std::span<const double> point) const;

  private:
    std::vector<Vector> points_;
    Vector values_;
};

}  // namespace neimkit
