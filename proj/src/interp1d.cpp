// SPDX-License-Identifier: Apache-2.0
#include "neimkit/interp1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "neimkit/errors.hpp"
#include "neimkit/numkit.hpp"

namespace neimkit {

namespace {

// Second derivatives at the knots for a not-a-knot cubic spline. For n >= 4
// this is the moment system with third-derivative continuity imposed at the
// second and second-to-last knots.
Vector spline_moments(const Vector& x, const Vector& y) {
    const std::size_t n = x.size();
    if (n == 2) return Vector(n, 0.0);
    if (n == 3) {
        // Unique parabola through the three points: constant second derivative.
        const double h0 = x[1] - x[0];
        const double h1 = x[2] - x[1];
        const double m = 2.0 * ((y[2] - y[1]) / h1 - (y[1] - y[0]) / h0) / (h0 + h1);
        return Vector(n, m);
    }
    DenseMatrix a(n, n);
    Vector b(n, 0.0);
    const auto h = [&](std::size_t i) { return x[i + 1] - x[i]; };
    a(0, 0) = h(1);
    a(0, 1) = -(h(0) + h(1));
    a(0, 2) = h(0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        a(i, i - 1) = h(i - 1) / 6.0;
        a(i, i) = (h(i - 1) + h(i)) / 3.0;
        a(i, i + 1) = h(i) / 6.0;
        b[i] = (y[i + 1] - y[i]) / h(i) - (y[i] - y[i - 1]) / h(i - 1);
    }
    a(n - 1, n - 3) = h(n - 2);
    a(n - 1, n - 2) = -(h(n - 3) + h(n - 2));
    a(n - 1, n - 1) = h(n - 3);
    return solve_linear(a, b);
}

}  // namespace

Interp1D::Interp1D(Vector x, Vector y, InterpMethod method)
    : method_(method), x_(std::move(x)), y_(std::move(y)) {
    if (x_.size() < 2) throw DataError("Interp1D: need at least two knots");
    if (x_.size() != y_.size()) throw DataError("Interp1D: knot/value count mismatch");
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
        if (!(x_[i] < x_[i + 1])) throw DataError("Interp1D: knots must be strictly increasing");
    }
    if (method_ == InterpMethod::CubicSpline) second_derivatives_ = spline_moments(x_, y_);
}

std::size_t Interp1D::interval(double x) const {
    // Index i with x in [x_[i], x_[i+1]]; callers clamp x first.
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    if (i == 0) return 0;
    if (i >= x_.size()) return x_.size() - 2;
    return i - 1;
}

double Interp1D::operator()(double x) const {
    const double xc = std::clamp(x, x_.front(), x_.back());
    const std::size_t i = interval(xc);
    const double h = x_[i + 1] - x_[i];
    const double t = (xc - x_[i]) / h;
    if (method_ == InterpMethod::PiecewiseLinear) {
        return (1.0 - t) * y_[i] + t * y_[i + 1];
    }
    const double a = 1.0 - t;
    const double m0 = second_derivatives_[i];
    const double m1 = second_derivatives_[i + 1];
    return a * y_[i] + t * y_[i + 1] +
           ((a * a * a - a) * m0 + (t * t * t - t) * m1) * h * h / 6.0;
}

NearestNeighborLookup::NearestNeighborLookup(std::vector<Vector> points, Vector values)
    : points_(std::move(points)), values_(std::move(values)) {
    if (points_.empty() || points_.size() != values_.size()) {
        throw DataError("NearestNeighborLookup: point/value count mismatch");
    }
}

double NearestNeighborLookup::operator()(std::span<const double> point) const {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        double d = 0.0;
        for (std::size_t k = 0; k < point.size(); ++k) {
            const double diff = points_[i][k] - point[k];
            d += diff * diff;
        }
        if (d < best) {
            best = d;
            best_i = i;
        }
    }
    return values_[best_i];
}

}  // namespace neimkit
