// SPDX-License-Identifier: Apache-2.0
#include "neimkit/weights.hpp"

#include <cmath>

#include "neimkit/errors.hpp"

namespace neimkit {

namespace {

double sq_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double diff = a[k] - b[k];
        d += diff * diff;
    }
    return d;
}

}  // namespace

double ErrorWeights::operator()(std::span<const double> mu_i, std::size_t i,
                                std::span<const double> mu, std::size_t j) const {
    switch (kind) {
        case Kind::Uniform:
            return c;
        case Kind::Kronecker:
            return i == j ? 1.0 : 0.0;
        case Kind::Gaussian:
            return c * std::exp(-zeta * sq_distance(mu_i, mu));
    }
    return 0.0;
}

double TrainingWeights::operator()(std::span<const double> mu_i, std::size_t i,
                                   std::span<const double> selected_mu,
                                   std::size_t selected_index) const {
    switch (kind) {
        case Kind::Uniform:
            return c;
        case Kind::KroneckerAtSelected:
            return i == selected_index ? 1.0 : 0.0;
        case Kind::Ball:
            return sq_distance(mu_i, selected_mu) <= radius * radius ? 1.0 : 0.0;
        case Kind::Gaussian:
            return c * std::exp(-zeta * sq_distance(mu_i, selected_mu));
    }
    return 0.0;
}

void WeightScheme::validate() const {
    if (!(error_weights.c > 0.0)) throw ConfigError("WeightScheme: error weight c must be > 0");
    if (!(training_weights.c > 0.0)) throw ConfigError("WeightScheme: training weight c must be > 0");
    if (error_weights.kind == ErrorWeights::Kind::Gaussian && !(error_weights.zeta > 0.0)) {
        throw ConfigError("WeightScheme: error gaussian zeta must be > 0");
    }
    if (training_weights.kind == TrainingWeights::Kind::Gaussian &&
        !(training_weights.zeta > 0.0)) {
        throw ConfigError("WeightScheme: training gaussian zeta must be > 0");
    }
    if (training_weights.kind == TrainingWeights::Kind::Ball && !(training_weights.radius > 0.0)) {
        throw ConfigError("WeightScheme: ball radius must be > 0");
    }
}

}  // namespace neimkit
