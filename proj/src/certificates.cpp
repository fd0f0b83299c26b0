// SPDX-License-Identifier: Apache-2.0

#include "m21/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace m21 {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string idx_list(const std::vector<int>& v) {
    std::ostringstream os;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        os << v[i];
    }
    return os.str();
}

Condition make_cond(std::string desc, double lhs, double rhs, bool strict = false, bool geq = true) {
    // geq: condition is lhs >= rhs; otherwise lhs <= rhs.
    Condition c;
    c.description = std::move(desc);
    c.lhs = lhs;
    c.rhs = rhs;
    c.margin = geq ? lhs - rhs : rhs - lhs;
    c.strict = strict;
    return c;
}

bool all_satisfied(const std::vector<Condition>& conds, double tol) {
    for (const auto& c : conds)
        if (!c.satisfied(tol)) return false;
    return true;
}

double min_margin_of(const std::vector<Condition>& conds) {
    double m = kInf;
    for (const auto& c : conds) m = std::min(m, c.margin);
    return m;
}

// Shared by check_t1 and check_t7: residual interferers must satisfy
// sum h_j^2 <= 1 for the Lemma-3 step of the converse.
Condition residual_gain_condition(const StandardChannel& ch, const std::set<int>& decoded) {
    double sum = 0.0;
    for (int j = 2; j <= ch.K; ++j)
        if (!decoded.count(j)) {
            const double hj = ch.cross_gain(j);
            sum += hj * hj;
        }
    std::string desc = decoded.empty() ? "sum_{j=2..K} h_j^2 <= 1" : "sum over undecoded j of h_j^2 <= 1";
    return make_cond(std::move(desc), sum, 1.0, false, /*geq=*/false);
}

Certificate t7_core(const StandardChannel& ch, const std::vector<int>& decoded_set, TheoremId id,
                    double tol) {
    require_standard(ch);
    std::set<int> dec(decoded_set.begin(), decoded_set.end());
    for (int j : dec)
        if (j < 2 || j > ch.K)
            throw std::invalid_argument("decoded_set: index " + std::to_string(j) + " out of range 2.." +
                                        std::to_string(ch.K));
    if (dec.size() != decoded_set.size()) throw std::invalid_argument("decoded_set: duplicate index");

    Certificate cert;
    cert.theorem_id = id;
    Condition residual = residual_gain_condition(ch, dec);

    if (dec.empty()) {
        cert.conditions.push_back(residual);
        cert.holds = residual.satisfied(tol);
        return cert;
    }

    std::vector<int> sorted(dec.begin(), dec.end());
    std::vector<int> best_perm;
    std::vector<double> best_margins;
    double best_min = -kInf;
    bool any_feasible = false;
    std::vector<int> feasible_perm;
    std::vector<double> feasible_margins;

    if (sorted.size() <= 8) {
        std::vector<int> perm = sorted;
        do {
            SicCheck chk = sic_feasible(ch, sorted, perm, tol);
            const double mm = *std::min_element(chk.stage_margins.begin(), chk.stage_margins.end());
            if (mm > best_min) {
                best_min = mm;
                best_perm = perm;
                best_margins = chk.stage_margins;
            }
            if (chk.feasible && !any_feasible) {
                any_feasible = true;
                feasible_perm = perm;
                feasible_margins = chk.stage_margins;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        OrderSearch s = best_decoding_order(ch, sorted, tol);
        std::vector<int> perm = s.found ? s.order : sorted;
        SicCheck chk = sic_feasible(ch, sorted, perm, tol);
        best_perm = perm;
        best_margins = chk.stage_margins;
        any_feasible = s.found;
        feasible_perm = perm;
        feasible_margins = chk.stage_margins;
    }

    // Report the max-min-margin permutation when infeasible (its margins trace
    // the region boundary); report a feasible witness when one exists.
    const std::vector<int>& perm = any_feasible ? feasible_perm : best_perm;
    const std::vector<double>& margins = any_feasible ? feasible_margins : best_margins;
    for (size_t l = 0; l < perm.size(); ++l) {
        const int j = perm[l];
        const double hj2 = ch.cross_gain(j) * ch.cross_gain(j);
        Condition c = make_cond("SIC stage " + std::to_string(l + 1) + ": h_" + std::to_string(j) +
                                    "^2 >= 1 + P_1 + later-decoded power + residual power",
                                hj2, hj2 - margins[l]);
        cert.conditions.push_back(c);
    }
    cert.conditions.push_back(residual);
    cert.holds = any_feasible && residual.satisfied(tol);
    if (any_feasible) cert.witness = perm;
    return cert;
}

double t8_gap_for_perm(const StandardChannel& ch, const std::vector<int>& perm) {
    // Permuted T6 sum: positions 1..K-2, t for each position covers all later
    // permutation elements (including the last).
    const int n = static_cast<int>(perm.size());  // n = K-1
    std::vector<double> tail(static_cast<size_t>(n) + 1, 1.0);
    for (int l = n - 1; l >= 0; --l) {
        const int j = perm[static_cast<size_t>(l)];
        const double hj = ch.cross_gain(j);
        tail[static_cast<size_t>(l)] = tail[static_cast<size_t>(l) + 1] + hj * hj * ch.power(j);
    }
    double gap = 0.0;
    for (int l = 0; l + 1 < n; ++l) {
        const int j = perm[static_cast<size_t>(l)];
        const double hj = ch.cross_gain(j);
        const double pj = ch.power(j);
        gap += 0.5 * std::log2(1.0 + hj * hj * pj / (tail[static_cast<size_t>(l) + 1] * (1.0 + pj)));
    }
    return gap;
}

std::vector<Condition> t8_conditions_for_perm(const StandardChannel& ch, const std::vector<int>& perm) {
    const int n = static_cast<int>(perm.size());
    std::vector<double> tail(static_cast<size_t>(n) + 1, 1.0);
    for (int l = n - 1; l >= 0; --l) {
        const int j = perm[static_cast<size_t>(l)];
        const double hj = ch.cross_gain(j);
        tail[static_cast<size_t>(l)] = tail[static_cast<size_t>(l) + 1] + hj * hj * ch.power(j);
    }
    std::vector<Condition> conds;
    for (int l = 0; l + 1 < n; ++l) {
        const int j = perm[static_cast<size_t>(l)];
        const double hj = ch.cross_gain(j);
        const double pj = ch.power(j);
        // h^2 <= (1 + 1/P) t written as h^2 P <= (1+P) t to stay finite at P=0.
        conds.push_back(make_cond("position " + std::to_string(l + 1) + ": h_" + std::to_string(j) +
                                      "^2 P_" + std::to_string(j) + " <= (1 + P_" + std::to_string(j) + ") t",
                                  hj * hj * pj, (1.0 + pj) * tail[static_cast<size_t>(l) + 1], false,
                                  /*geq=*/false));
    }
    const int last = perm.back();
    const double hl = ch.cross_gain(last);
    conds.push_back(make_cond("last position: h_" + std::to_string(last) + "^2 <= 1", hl * hl, 1.0, false,
                              /*geq=*/false));
    return conds;
}

}  // namespace

std::string to_string(TheoremId id) {
    switch (id) {
        case TheoremId::T1: return "T1";
        case TheoremId::T2: return "T2";
        case TheoremId::T3: return "T3";
        case TheoremId::T4: return "T4";
        case TheoremId::T5: return "T5";
        case TheoremId::T6: return "T6";
        case TheoremId::T7: return "T7";
        case TheoremId::T8: return "T8";
    }
    return "?";
}

double Certificate::min_margin() const { return min_margin_of(conditions); }

Certificate check_t1(const StandardChannel& ch, double tol) {
    Certificate cert = t7_core(ch, {}, TheoremId::T1, tol);
    return cert;
}

Certificate check_t2_t4(const StandardChannel& ch, int partner_k, double tol) {
    require_standard(ch);
    if (partner_k < 2 || partner_k > ch.K)
        throw std::out_of_range("partner index " + std::to_string(partner_k) + " out of range 2.." +
                                std::to_string(ch.K));
    double others_gain2 = 0.0;
    double others_power = 0.0;
    for (int j = 2; j <= ch.K; ++j) {
        if (j == partner_k) continue;
        const double hj = ch.cross_gain(j);
        others_gain2 += hj * hj;
        others_power += hj * hj * ch.power(j);
    }
    const double hk2 = ch.cross_gain(partner_k) * ch.cross_gain(partner_k);

    Certificate cert;
    cert.theorem_id = ch.K == 3 ? TheoremId::T2 : TheoremId::T4;
    cert.witness = {partner_k};
    // h_k^2 >= (1+I)^2/(1-S) multiplied through by (1-S) > 0; the companion
    // strict condition S < 1 makes the forms equivalent.
    cert.conditions.push_back(make_cond("h_k^2 (1 - sum_{j!=k} h_j^2) >= (1 + sum_{j!=k} h_j^2 P_j)^2 (k=" +
                                            std::to_string(partner_k) + ")",
                                        hk2 * (1.0 - others_gain2), (1.0 + others_power) * (1.0 + others_power)));
    cert.conditions.push_back(
        make_cond("sum_{j!=k, j>=2} h_j^2 < 1", others_gain2, 1.0, /*strict=*/true, /*geq=*/false));
    cert.holds = all_satisfied(cert.conditions, tol);
    return cert;
}

namespace {

T3Variant t3_variant(const StandardChannel& ch, double rho2, int genie_partner, double tol) {
    // genie_partner = 2: conditions on a = h_2, gap driven by (b, P_3) = (h_3, P_3);
    // genie_partner = 3: interchanged.
    const int other = genie_partner == 2 ? 3 : 2;
    const double g2 = ch.cross_gain(genie_partner) * ch.cross_gain(genie_partner);
    const double ho = ch.cross_gain(other);
    const double t_other = 1.0 + ho * ho * ch.power(other);

    T3Variant v;
    v.cert.theorem_id = TheoremId::T3;
    v.cert.variant = genie_partner;
    v.cert.conditions.push_back(make_cond("h_" + std::to_string(genie_partner) +
                                              "^2 >= (1 + h_" + std::to_string(other) + "^2 P_" +
                                              std::to_string(other) + ")^2 / rho^2",
                                          g2, t_other * t_other / rho2));
    v.cert.conditions.push_back(make_cond("h_" + std::to_string(other) + "^2 >= 1", ho * ho, 1.0));
    v.cert.holds = all_satisfied(v.cert.conditions, tol);

    const double gap = 0.5 * std::log2((1.0 - rho2 / t_other) / (1.0 - rho2));
    if (v.cert.holds) v.cert.gap_bits = gap;

    RateReport m3 = sum_rate_mac_subset(ch, {1, 2, 3});
    v.gap.achievable_bits = m3.sum_rate_bits;
    v.gap.gap_bits = gap;
    v.gap.outer_bound_bits = m3.sum_rate_bits + gap;
    v.gap.rho2 = rho2;
    return v;
}

}  // namespace

T3Gap t3_gap(const StandardChannel& ch, double rho2, double tol) {
    require_standard(ch);
    if (ch.K != 3) throw std::invalid_argument("t3_gap applies to K=3 channels");
    if (!(rho2 > 0.0 && rho2 < 1.0)) throw std::invalid_argument("rho2 must lie in (0,1)");
    return {t3_variant(ch, rho2, 2, tol), t3_variant(ch, rho2, 3, tol)};
}

namespace {

T3Variant t3_variant_auto(const StandardChannel& ch, int genie_partner, double tol) {
    const int other = genie_partner == 2 ? 3 : 2;
    const double g2 = ch.cross_gain(genie_partner) * ch.cross_gain(genie_partner);
    const double ho = ch.cross_gain(other);
    const double t_other = 1.0 + ho * ho * ch.power(other);

    // The region demands rho^2 >= t_other^2 / h_genie^2 (equivalently the
    // useful-genie constraint eta^2 <= h_genie^2); the gap grows with rho^2,
    // so the smallest admissible value is optimal.  It exists iff
    // h_genie^2 > t_other^2.
    Certificate existence;
    existence.theorem_id = TheoremId::T3;
    existence.variant = genie_partner;
    existence.conditions.push_back(make_cond("h_" + std::to_string(genie_partner) + "^2 > (1 + h_" +
                                                 std::to_string(other) + "^2 P_" + std::to_string(other) + ")^2",
                                             g2, t_other * t_other, /*strict=*/true));
    existence.conditions.push_back(make_cond("h_" + std::to_string(other) + "^2 >= 1", ho * ho, 1.0));
    existence.holds = all_satisfied(existence.conditions, tol);

    if (!existence.holds) {
        T3Variant v;
        v.cert = existence;
        RateReport m3 = sum_rate_mac_subset(ch, {1, 2, 3});
        v.gap.achievable_bits = m3.sum_rate_bits;
        v.gap.outer_bound_bits = m3.sum_rate_bits;
        v.gap.gap_bits = 0.0;
        return v;
    }
    const double rho2 = t_other * t_other / g2;
    T3Variant v = t3_variant(ch, rho2, genie_partner, tol);
    return v;
}

}  // namespace

T3Gap t3_gap_auto(const StandardChannel& ch, double tol) {
    require_standard(ch);
    if (ch.K != 3) throw std::invalid_argument("t3_gap applies to K=3 channels");
    return {t3_variant_auto(ch, 2, tol), t3_variant_auto(ch, 3, tol)};
}

double rho_for_gap(double delta_bits, double b, double p3) {
    if (delta_bits < 0.0) throw std::invalid_argument("delta_bits must be >= 0");
    if (delta_bits == 0.0) return 0.0;
    const double e = std::exp2(2.0 * delta_bits);
    const double rho2 = (e - 1.0) / (e - 1.0 / (1.0 + b * b * p3));
    // The exact value approaches but never reaches 1; keep the result inside
    // [0,1) when rounding lands on 1.
    return std::min(rho2, std::nexttoward(1.0, 0.0));
}

Certificate check_t5(const StandardChannel& ch, double tol) {
    require_standard(ch);
    Certificate cert;
    cert.theorem_id = TheoremId::T5;
    for (int i = 2; i <= ch.K; ++i) {
        const double hi = ch.cross_gain(i);
        cert.conditions.push_back(
            make_cond("h_" + std::to_string(i) + "^2 <= 1", hi * hi, 1.0, false, /*geq=*/false));
    }
    cert.holds = all_satisfied(cert.conditions, tol);
    return cert;
}

GapReport t6_gap(const StandardChannel& ch, double tol) {
    Certificate region = check_t5(ch, tol);
    if (!region.holds) {
        for (const auto& c : region.conditions)
            if (!c.satisfied(tol)) throw std::domain_error("t6_gap region violation: " + c.description);
    }
    TiVector tv = TiVector::from(ch);
    double gap = 0.0;
    for (int i = 2; i <= ch.K - 1; ++i) {
        const double hi = ch.cross_gain(i);
        const double pi = ch.power(i);
        gap += 0.5 * std::log2(1.0 + hi * hi * pi / (tv.at(i + 1) * (1.0 + pi)));
    }
    const double bound = 0.5 * ch.K - 1.0;
    if (gap > bound + tol) throw std::logic_error("t6 gap exceeds K/2 - 1");

    GapReport rep;
    rep.achievable_bits = sum_rate_m1(ch).sum_rate_bits;
    rep.gap_bits = gap;
    rep.outer_bound_bits = rep.achievable_bits + gap;
    return rep;
}

Certificate check_t6(const StandardChannel& ch, double tol) {
    Certificate cert = check_t5(ch, tol);
    cert.theorem_id = TheoremId::T6;
    if (cert.holds) cert.gap_bits = t6_gap(ch, tol).gap_bits;
    return cert;
}

Certificate check_t7(const StandardChannel& ch, const std::vector<int>& decoded_set, double tol) {
    return t7_core(ch, decoded_set, TheoremId::T7, tol);
}

T8Result check_t8(const StandardChannel& ch, double tol) {
    require_standard(ch);
    std::vector<int> base;
    for (int j = 2; j <= ch.K; ++j) base.push_back(j);

    T8Result res;
    res.cert.theorem_id = TheoremId::T8;

    std::vector<Condition> best_conds;
    double best_min = -kInf;
    std::vector<int> best_perm;
    bool any = false;
    std::vector<int> holding_perm;
    std::vector<Condition> holding_conds;
    double holding_gap = kInf;

    if (base.size() > 8) {
        // Enumeration capped at 8 interferers; fall back to the identity order.
        std::vector<Condition> conds = t8_conditions_for_perm(ch, base);
        res.cert.conditions = conds;
        res.cert.holds = all_satisfied(conds, tol);
        if (res.cert.holds) res.cert.witness = base;
        const double gap = t8_gap_for_perm(ch, base);
        if (res.cert.holds) res.cert.gap_bits = gap;
        RateReport mi1 = sum_rate_m1(ch);
        res.gap = {mi1.sum_rate_bits, mi1.sum_rate_bits + gap, gap, std::nullopt};
        return res;
    }

    std::vector<int> perm = base;
    do {
        std::vector<Condition> conds = t8_conditions_for_perm(ch, perm);
        const double mm = min_margin_of(conds);
        if (mm > best_min) {
            best_min = mm;
            best_conds = conds;
            best_perm = perm;
        }
        if (all_satisfied(conds, tol)) {
            const double gap = t8_gap_for_perm(ch, perm);
            if (!any || gap < holding_gap) {
                any = true;
                holding_gap = gap;
                holding_perm = perm;
                holding_conds = conds;
            }
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    res.cert.holds = any;
    res.cert.conditions = any ? holding_conds : best_conds;
    if (any) {
        res.cert.witness = holding_perm;
        res.cert.gap_bits = holding_gap;
    }
    RateReport mi1 = sum_rate_m1(ch);
    const double gap = any ? holding_gap : t8_gap_for_perm(ch, best_perm);
    res.gap = {mi1.sum_rate_bits, mi1.sum_rate_bits + gap, gap, std::nullopt};
    return res;
}

namespace {

// Deterministic preference: higher rate, then smaller set, then lexicographic.
bool strictly_better(const RateReport& a, const RateReport& b) {
    if (a.sum_rate_bits != b.sum_rate_bits) return a.sum_rate_bits > b.sum_rate_bits;
    if (a.strategy.mac_set.size() != b.strategy.mac_set.size())
        return a.strategy.mac_set.size() < b.strategy.mac_set.size();
    return a.strategy.mac_set < b.strategy.mac_set;
}

std::vector<std::vector<int>> enumerate_subsets(const std::vector<int>& pool) {
    std::vector<std::vector<int>> out;
    const size_t n = pool.size();
    for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
        std::vector<int> s;
        for (size_t b = 0; b < n; ++b)
            if (mask & (size_t{1} << b)) s.push_back(pool[b]);
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

}  // namespace

Recommendation recommend(const StandardChannel& ch, ChannelMode mode, const RecommendOptions& opts) {
    require_standard(ch);
    if (ch.K > 12) throw std::invalid_argument("recommend: K exceeds the enumeration cap of 12");
    const double tol = opts.tol;

    Recommendation rec;
    bool have_best = false;

    if (mode == ChannelMode::XC) {
        std::vector<int> pool;
        for (int j = 2; j <= ch.K; ++j)
            if (ch.power(j) > 0.0) pool.push_back(j);  // zero-power transmitters cannot carry a cross message
        for (auto& subset : enumerate_subsets(pool)) {
            std::vector<int> mac = {1};
            mac.insert(mac.end(), subset.begin(), subset.end());
            RateReport r = sum_rate_mac_subset(ch, mac);
            if (!have_best || strictly_better(r, rec.best)) {
                rec.best = r;
                have_best = true;
            }
        }

        std::optional<Certificate> exact;
        Certificate t1 = check_t1(ch, tol);
        if (t1.holds) exact = t1;
        for (int k = 2; k <= ch.K && !exact; ++k) {
            Certificate c = check_t2_t4(ch, k, tol);
            if (c.holds) exact = c;
        }
        if (exact) {
            rec.certificate = exact;
            return rec;
        }

        std::optional<Certificate> gap_cert;
        std::optional<GapReport> gap_rep;
        auto consider = [&](const Certificate& c, const GapReport& g) {
            if (!c.holds || !c.gap_bits) return;
            if (!gap_cert || *c.gap_bits < *gap_cert->gap_bits) {
                gap_cert = c;
                gap_rep = g;
            }
        };
        if (ch.K == 3) {
            T3Gap t3 = opts.rho2 ? t3_gap(ch, *opts.rho2, tol) : t3_gap_auto(ch, tol);
            consider(t3.primary.cert, t3.primary.gap);
            consider(t3.symmetric.cert, t3.symmetric.gap);
        }
        Certificate t6 = check_t6(ch, tol);
        if (t6.holds) consider(t6, t6_gap(ch, tol));
        rec.certificate = gap_cert;
        rec.gap = gap_rep;
        return rec;
    }

    // IC mode: only SIC-feasible strategies are achievable as specified.
    std::vector<int> pool;
    for (int j = 2; j <= ch.K; ++j) pool.push_back(j);
    for (auto& subset : enumerate_subsets(pool)) {
        OrderSearch s = best_decoding_order(ch, subset, tol);
        if (!s.found) continue;
        RateReport r = sum_rate_mi_k(ch, subset, s.order);
        if (!have_best || strictly_better(r, rec.best)) {
            rec.best = r;
            have_best = true;
        }
    }

    std::optional<Certificate> exact;
    for (auto& subset : enumerate_subsets(pool)) {
        Certificate c = check_t7(ch, subset, tol);
        if (c.holds) {
            exact = c;
            break;
        }
    }
    if (exact) {
        rec.certificate = exact;
        return rec;
    }
    T8Result t8 = check_t8(ch, tol);
    if (t8.cert.holds) {
        rec.certificate = t8.cert;
        rec.gap = t8.gap;
    }
    return rec;
}

}  // namespace m21
