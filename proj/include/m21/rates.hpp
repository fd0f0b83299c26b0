// SPDX-License-Identifier: Apache-2.0
//
// Closed-form achievable sum-rates for the XC MAC-subset strategies and the
// IC partial-interference-cancellation strategies, plus SIC feasibility and
// decoding-order search.  All rates are bits per real channel use (log base 2).

#ifndef M21_RATES_HPP
#define M21_RATES_HPP

#include <utility>
#include <vector>

#include "m21/channel.hpp"
#include "m21/strategy.hpp"

namespace m21 {

struct RateReport {
    StrategySpec strategy;
    double sum_rate_bits = 0.0;
    std::vector<std::pair<int, double>> per_receiver_rates;  // (receiver, bits)
    std::vector<std::pair<int, double>> inn_terms;           // (receiver, interference+noise power)
    bool sic_feasible = true;  // IC only: whether (decoded set, order) passes the stage conditions
};

/// t_i = 1 + sum_{j=i..K} h_j^2 P_j for i = 2..K, with t_{K+1} == 1.
struct TiVector {
    std::vector<double> t;  // t[i-2] = t_i
    static TiVector from(const StandardChannel& ch);
    double at(int i) const;  // 2 <= i <= K+1
};

/// Strategy M1: everyone talks to their own receiver, receiver 1 treats all
/// interference as noise.
RateReport sum_rate_m1(const StandardChannel& ch);

/// XC strategy with joint MAC decoding of mac_set at receiver 1 (1 must be a
/// member).  MAC members other than 1 send only their cross message, so their
/// own receivers contribute zero rate.
RateReport sum_rate_mac_subset(const StandardChannel& ch, const std::vector<int>& mac_set);

/// IC strategy: receiver 1 decodes and cancels decoded_set (subset of 2..K)
/// in the given order, treats the rest as noise.  The rate value does not
/// assert decodability; the report's sic_feasible flag carries that.
/// An empty order with a nonempty set is checked against the set's best order.
RateReport sum_rate_mi_k(const StandardChannel& ch, const std::vector<int>& decoded_set,
                         const std::vector<int>& order);

struct SicCheck {
    bool feasible = true;
    std::vector<double> stage_margins;  // h^2 - required power, one per decode stage
};

/// Stage conditions for sequential decode-and-cancel at receiver 1:
/// at each position l, h_{order(l)}^2 >= 1 + P_1 + (undecoded-so-far power)
/// + (residual interference power).  Boundary inclusive.
SicCheck sic_feasible(const StandardChannel& ch, const std::vector<int>& decoded_set,
                      const std::vector<int>& order, double tol = kBoundaryTol);

struct OrderSearch {
    bool found = false;
    std::vector<int> order;
    bool exhaustive = true;  // false when the size cap forced the greedy heuristic
};

/// Finds a feasible decoding order if one exists.  Exhaustive for up to 8
/// decoded interferers; beyond that a descending-h^2P greedy order is tried
/// and the result flagged non-exhaustive.
OrderSearch best_decoding_order(const StandardChannel& ch, const std::vector<int>& decoded_set,
                                double tol = kBoundaryTol);

}  // namespace m21

#endif
