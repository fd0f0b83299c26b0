// SPDX-License-Identifier: Apache-2.0
//
// Seeded Monte-Carlo cross-check of the exact Gaussian entropy: samples the
// system and averages -log2 density.  Reproducible bit-exactly for a fixed
// (seed, sample count); sample i consumes the counter range [i*d, (i+1)*d).

#ifndef M21_MONTE_CARLO_HPP
#define M21_MONTE_CARLO_HPP

#include <cstdint>
#include <span>
#include <string>

#include "m21/gaussian_system.hpp"

namespace m21 {

struct McConfig {
    std::uint64_t seed = 42;
    std::int64_t samples = 1'000'000;
    double confidence_sigma = 3.0;
};

struct McEstimate {
    double value_bits = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;

    bool brackets(double reference, double confidence_sigma) const {
        return std::abs(value_bits - reference) <= confidence_sigma * std_error;
    }
};

/// Sampling estimate of the differential entropy of the given variables.
/// Throws SingularCovariance on degenerate subsets and std::invalid_argument
/// when cfg.samples < 1000.
McEstimate mc_entropy(const GaussianSystem& sys, std::span<const std::string> vars,
                      const McConfig& cfg);

}  // namespace m21

#endif
