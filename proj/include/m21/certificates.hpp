// SPDX-License-Identifier: Apache-2.0
//
// Theorem-condition predicates, genie-aided outer bounds, gap formulas and
// strategy recommendation.  Each certificate records the evaluated
// conditions with margins so region boundaries can be traced by sign change.

#ifndef M21_CERTIFICATES_HPP
#define M21_CERTIFICATES_HPP

#include <optional>
#include <string>
#include <vector>

#include "m21/channel.hpp"
#include "m21/rates.hpp"
#include "m21/strategy.hpp"

namespace m21 {

enum class TheoremId { T1, T2, T3, T4, T5, T6, T7, T8 };

std::string to_string(TheoremId id);

struct Condition {
    std::string description;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // oriented so positive means strictly inside
    bool strict = false;  // strict inequalities need margin > tol, inclusive need margin >= -tol

    bool satisfied(double tol = kBoundaryTol) const { return strict ? margin > tol : margin >= -tol; }
};

struct Certificate {
    TheoremId theorem_id = TheoremId::T1;
    bool holds = false;
    std::vector<Condition> conditions;
    std::vector<int> witness;          // decoding permutation or MAC partner, empty if n/a
    std::optional<double> gap_bits;    // only for gap-type certificates (T3/T6/T8), when they hold
    std::optional<int> variant;        // T3 genie partner (2 or 3)

    double min_margin() const;
};

struct GapReport {
    double achievable_bits = 0.0;
    double outer_bound_bits = 0.0;
    double gap_bits = 0.0;
    std::optional<double> rho2;
};

/// Noisy-interference optimality of strategy M1: sum_{j>=2} h_j^2 <= 1.
Certificate check_t1(const StandardChannel& ch, double tol = kBoundaryTol);

/// Two-user MAC (transmitter 1 + partner k) optimality.  The division-form
/// threshold h_k^2 >= (1+I)^2/(1-S) is evaluated in the equivalent product
/// form h_k^2 (1-S) >= (1+I)^2 so margins stay finite when S >= 1.
/// Reported as T2 for K=3 and T4 otherwise.
Certificate check_t2_t4(const StandardChannel& ch, int partner_k, double tol = kBoundaryTol);

struct T3Variant {
    Certificate cert;  // variant field set to the genie partner (2 or 3)
    GapReport gap;
};

struct T3Gap {
    T3Variant primary;    // genie covers {1,2}; gap driven by (h_3, P_3)
    T3Variant symmetric;  // roles of (h_2,P_2) and (h_3,P_3) interchanged
};

/// Full-MAC (strategy M3) outer bound with gap
/// 0.5*log2((1 - rho2/(1+b^2 P_3)) / (1 - rho2)) for a K=3 channel.
/// Requires 0 < rho2 < 1.  Both variants are always evaluated and reported.
T3Gap t3_gap(const StandardChannel& ch, double rho2, double tol = kBoundaryTol);

/// Smallest feasible rho^2 ((1+b^2P_3)^2/a^2) gives the tightest gap; this
/// evaluates that choice, or reports non-holding existence conditions when no
/// rho^2 < 1 is admissible.
T3Gap t3_gap_auto(const StandardChannel& ch, double tol = kBoundaryTol);

/// Inverse of the gap formula: rho^2 = (2^{2d} - 1) / (2^{2d} - 1/(1+b^2 P_3)).
double rho_for_gap(double delta_bits, double b, double p3);

/// XC-as-IC region: h_i^2 <= 1 for all i = 2..K.
Certificate check_t5(const StandardChannel& ch, double tol = kBoundaryTol);

/// Gap of strategy M1 from the genie-aided outer bound inside the T5 region:
/// sum_{i=2..K-1} 0.5*log2(1 + h_i^2 P_i / (t_{i+1} (1+P_i))) <= K/2 - 1.
/// Throws std::domain_error outside the region.
GapReport t6_gap(const StandardChannel& ch, double tol = kBoundaryTol);

/// Certificate wrapper of t6_gap for region scans: conditions are the T5
/// region conditions; gap_bits attached when the region holds.
Certificate check_t6(const StandardChannel& ch, double tol = kBoundaryTol);

/// IC strategy MIk optimality: some decoding order of decoded_set passes the
/// SIC stage conditions and the residual gains satisfy sum h_j^2 <= 1.
/// decoded_set = {} reduces exactly to check_t1's condition.
Certificate check_t7(const StandardChannel& ch, const std::vector<int>& decoded_set,
                     double tol = kBoundaryTol);

struct T8Result {
    Certificate cert;
    GapReport gap;  // valid as an outer bound only when cert.holds
};

/// Treating-interference-as-noise gap region for the IC: some permutation of
/// {2..K} satisfies h^2 P <= (1+P) t at every position and the last gain is
/// at most 1; the gap is the permuted T6 sum.  Exhaustive for K <= 8.
T8Result check_t8(const StandardChannel& ch, double tol = kBoundaryTol);

struct RecommendOptions {
    std::optional<double> rho2;  // explicit T3 rho^2; smallest feasible if absent
    double tol = kBoundaryTol;
};

struct Recommendation {
    RateReport best;
    std::optional<Certificate> certificate;
    std::optional<GapReport> gap;
};

/// Enumerates all strategies of the mode (2^{K-1} subsets, K <= 12), returns
/// the maximum achievable sum-rate (IC: feasible strategies only) plus the
/// strongest certificate that holds: exact capacity first, then the smallest
/// bounded gap.  Ties break deterministically by smaller set, then
/// lexicographic indices.
Recommendation recommend(const StandardChannel& ch, ChannelMode mode,
                         const RecommendOptions& opts = {});

}  // namespace m21

#endif
