// SPDX-License-Identifier: Apache-2.0
//
// Channel representations for the Gaussian many-to-one X / interference
// channel: raw (physical gains, general noise) and standard form (unit
// direct gains, unit noise), plus validation and the receiver-1
// degradedness test.

#ifndef M21_CHANNEL_HPP
#define M21_CHANNEL_HPP

#include <string>
#include <vector>

namespace m21 {

/// Absolute tolerance for boundary inequalities in channel conditions.
inline constexpr double kBoundaryTol = 1e-9;

/// Physical channel: K transmitters, receiver 1 hears everyone, receiver i
/// hears only transmitter i.  Gains are amplitudes, powers linear.
struct RawChannel {
    int K = 0;
    std::vector<double> direct_gains;        // h_ii, i = 1..K
    std::vector<double> cross_gains_to_rx1;  // h_1j, j = 2..K
    std::vector<double> powers;              // P~_i, i = 1..K
    std::vector<double> noise_vars;          // sigma_r^2, r = 1..K (default 1)
};

/// Standard form: y_1 = x_1 + sum_j h_j x_j + n_1, y_i = x_i + n_i.
/// sigma2 is kept per receiver so the degradedness test covers the
/// general-noise statement; every other operation requires unit noise.
struct StandardChannel {
    int K = 0;
    std::vector<double> h;       // h_j, j = 2..K
    std::vector<double> P;       // P_i, i = 1..K
    std::vector<double> sigma2;  // per receiver, all 1.0 in standard form

    static StandardChannel unit_noise(std::vector<double> h, std::vector<double> P);

    /// Cross gain h_i, 2 <= i <= K.
    double cross_gain(int i) const { return h.at(static_cast<size_t>(i) - 2); }
    /// Power P_i, 1 <= i <= K.
    double power(int i) const { return P.at(static_cast<size_t>(i) - 1); }
    double noise_var(int r) const { return sigma2.at(static_cast<size_t>(r) - 1); }

    bool has_unit_noise(double tol = 1e-12) const;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    std::string joined() const;
};

/// Converts a raw channel to standard form: folds direct gains and noise
/// deviations into powers and cross gains so that all direct gains and all
/// noise variances become 1.  Throws std::invalid_argument on zero direct
/// gains (i >= 2) or nonpositive noise variances.
StandardChannel to_standard_form(const RawChannel& raw);

/// Lists violated invariants; empty report means valid.
ValidationReport validate(const StandardChannel& ch);

struct DegradednessResult {
    bool degraded = false;
    double margin = 0.0;  // sigma_1^2 - h_i^2 sigma_i^2, positive means inside
};

/// True iff receiver 1's observation of x_i is a noisier version of
/// receiver i's, i.e. h_i^2 sigma_i^2 <= sigma_1^2.  2 <= i <= K.
DegradednessResult degraded_at_rx1(const StandardChannel& ch, int i);

/// Requires a valid unit-noise standard channel; throws std::invalid_argument
/// with the validation report otherwise.  Shared precondition check for the
/// rate and optimality operations.
void require_standard(const StandardChannel& ch);

/// 10^(db/10)
double db_to_linear(double db);

// Interference sums over transmitter index sets (1-based, set given as a
// sorted membership test helper is the caller's concern; these take explicit
// predicates via included/excluded lists).
double interference_power_sum(const StandardChannel& ch, const std::vector<int>& members);
double gain_square_sum(const StandardChannel& ch, const std::vector<int>& members);

}  // namespace m21

#endif
