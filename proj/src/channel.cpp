// SPDX-License-Identifier: Apache-2.0

#include "m21/channel.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace m21 {

StandardChannel StandardChannel::unit_noise(std::vector<double> h, std::vector<double> P) {
    StandardChannel ch;
    ch.K = static_cast<int>(P.size());
    ch.h = std::move(h);
    ch.P = std::move(P);
    ch.sigma2.assign(static_cast<size_t>(ch.K), 1.0);
    return ch;
}

bool StandardChannel::has_unit_noise(double tol) const {
    for (double s : sigma2)
        if (std::abs(s - 1.0) > tol) return false;
    return true;
}

std::string ValidationReport::joined() const {
    std::ostringstream os;
    for (size_t i = 0; i < violations.size(); ++i) {
        if (i) os << "; ";
        os << violations[i];
    }
    return os.str();
}

StandardChannel to_standard_form(const RawChannel& raw) {
    if (raw.K < 2) throw std::invalid_argument("K must be >= 2");
    const size_t K = static_cast<size_t>(raw.K);
    if (raw.direct_gains.size() != K) throw std::invalid_argument("direct_gains must have K entries");
    if (raw.cross_gains_to_rx1.size() != K - 1)
        throw std::invalid_argument("cross_gains_to_rx1 must have K-1 entries");
    if (raw.powers.size() != K) throw std::invalid_argument("powers must have K entries");
    std::vector<double> noise = raw.noise_vars;
    if (noise.empty()) noise.assign(K, 1.0);
    if (noise.size() != K) throw std::invalid_argument("noise_vars must have K entries");

    for (size_t r = 0; r < K; ++r)
        if (!(noise[r] > 0.0)) throw std::invalid_argument("nonpositive noise variance at receiver " + std::to_string(r + 1));
    for (size_t i = 1; i < K; ++i)
        if (raw.direct_gains[i] == 0.0)
            throw std::invalid_argument("zero direct gain at transmitter " + std::to_string(i + 1));
    for (size_t i = 0; i < K; ++i)
        if (raw.powers[i] < 0.0) throw std::invalid_argument("negative power at index " + std::to_string(i + 1));

    StandardChannel ch;
    ch.K = raw.K;
    ch.P.resize(K);
    ch.h.resize(K - 1);
    ch.sigma2.assign(K, 1.0);

    // x_i = (h_ii / sigma_i) x~_i, so P_i = h_ii^2 P~_i / sigma_i^2 and the
    // cross gain seen by the normalized receiver 1 is h_1j sigma_j / (h_jj sigma_1).
    const double s1 = std::sqrt(noise[0]);
    ch.P[0] = raw.direct_gains[0] * raw.direct_gains[0] * raw.powers[0] / noise[0];
    for (size_t j = 1; j < K; ++j) {
        const double sj = std::sqrt(noise[j]);
        ch.P[j] = raw.direct_gains[j] * raw.direct_gains[j] * raw.powers[j] / noise[j];
        ch.h[j - 1] = raw.cross_gains_to_rx1[j - 1] * sj / (raw.direct_gains[j] * s1);
    }
    return ch;
}

ValidationReport validate(const StandardChannel& ch) {
    ValidationReport rep;
    if (ch.K < 2) rep.violations.push_back("K must be >= 2, got " + std::to_string(ch.K));
    const size_t K = ch.K >= 0 ? static_cast<size_t>(ch.K) : 0;
    if (ch.h.size() != (K >= 1 ? K - 1 : 0))
        rep.violations.push_back("h dimension mismatch: expected " + std::to_string(K >= 1 ? K - 1 : 0) +
                                 " entries, got " + std::to_string(ch.h.size()));
    if (ch.P.size() != K)
        rep.violations.push_back("P dimension mismatch: expected " + std::to_string(K) + " entries, got " +
                                 std::to_string(ch.P.size()));
    if (ch.sigma2.size() != K)
        rep.violations.push_back("sigma2 dimension mismatch: expected " + std::to_string(K) + " entries, got " +
                                 std::to_string(ch.sigma2.size()));
    for (size_t i = 0; i < ch.P.size(); ++i)
        if (!(ch.P[i] >= 0.0) || !std::isfinite(ch.P[i]))
            rep.violations.push_back("negative power at index " + std::to_string(i + 1));
    for (size_t r = 0; r < ch.sigma2.size(); ++r)
        if (!(ch.sigma2[r] > 0.0) || !std::isfinite(ch.sigma2[r]))
            rep.violations.push_back("nonpositive noise variance at receiver " + std::to_string(r + 1));
    for (size_t j = 0; j < ch.h.size(); ++j)
        if (!std::isfinite(ch.h[j]))
            rep.violations.push_back("non-finite cross gain at index " + std::to_string(j + 2));
    return rep;
}

DegradednessResult degraded_at_rx1(const StandardChannel& ch, int i) {
    if (i < 2 || i > ch.K) throw std::out_of_range("transmitter index " + std::to_string(i) + " out of range 2.." + std::to_string(ch.K));
    const double hi = ch.cross_gain(i);
    const double margin = ch.noise_var(1) - hi * hi * ch.noise_var(i);
    return {margin >= 0.0, margin};
}

void require_standard(const StandardChannel& ch) {
    ValidationReport rep = validate(ch);
    if (!rep.ok()) throw std::invalid_argument("invalid channel: " + rep.joined());
    if (!ch.has_unit_noise())
        throw std::invalid_argument("invalid channel: noise variances must all be 1 in standard form");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double interference_power_sum(const StandardChannel& ch, const std::vector<int>& members) {
    double s = 0.0;
    for (int j : members) {
        if (j < 2 || j > ch.K) throw std::out_of_range("transmitter index " + std::to_string(j) + " out of range 2.." + std::to_string(ch.K));
        const double hj = ch.cross_gain(j);
        s += hj * hj * ch.power(j);
    }
    return s;
}

double gain_square_sum(const StandardChannel& ch, const std::vector<int>& members) {
    double s = 0.0;
    for (int j : members) {
        if (j < 2 || j > ch.K) throw std::out_of_range("transmitter index " + std::to_string(j) + " out of range 2.." + std::to_string(ch.K));
        const double hj = ch.cross_gain(j);
        s += hj * hj;
    }
    return s;
}

}  // namespace m21
