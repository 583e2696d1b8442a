// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "neimkit/dense_matrix.hpp"

namespace neimkit {

/// Error weights w_e(mu_i; mu): quadrature weights for the error measure
/// that drives greedy selection and the theta solves.
struct ErrorWeights {
    enum class Kind { Uniform, Kronecker, Gaussian };
    Kind kind = Kind::Uniform;
    double c = 1.0;     // uniform constant / gaussian amplitude
    double zeta = 1.0;  // gaussian decay

    /// Weight of sample i relative to target parameter j; the Kronecker
    /// variant compares indices (training parameters are pairwise distinct).
    double operator()(std::span<const double> mu_i, std::size_t i, std::span<const double> mu,
                      std::size_t j) const;
};

/// Training weights w_t^(j)(mu_i): relative importance of each sample when
/// fitting the step-j network, centered at the selected parameter.
struct TrainingWeights {
    enum class Kind { Uniform, KroneckerAtSelected, Ball, Gaussian };
    Kind kind = Kind::Uniform;
    double c = 1.0;
    double zeta = 1.0;
    double radius = 0.0;  // ball variant

    double operator()(std::span<const double> mu_i, std::size_t i,
                      std::span<const double> selected_mu, std::size_t selected_index) const;
};

struct WeightScheme {
    ErrorWeights error_weights;
    TrainingWeights training_weights;

    void validate() const;  // throws ConfigError
};

}  // namespace neimkit
