// SPDX-License-Identifier: Apache-2.0

#include "m21/rates.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace m21 {

namespace {

double half_log2_1p(double x) { return 0.5 * std::log2(1.0 + x); }

std::set<int> as_set(const std::vector<int>& v) { return {v.begin(), v.end()}; }

void check_interferer_set(const StandardChannel& ch, const std::vector<int>& set, const char* what) {
    std::set<int> seen;
    for (int j : set) {
        if (j < 2 || j > ch.K)
            throw std::invalid_argument(std::string(what) + ": index " + std::to_string(j) + " out of range 2.." +
                                        std::to_string(ch.K));
        if (!seen.insert(j).second)
            throw std::invalid_argument(std::string(what) + ": duplicate index " + std::to_string(j));
    }
}

}  // namespace

TiVector TiVector::from(const StandardChannel& ch) {
    require_standard(ch);
    TiVector tv;
    tv.t.assign(static_cast<size_t>(ch.K) - 1, 1.0);
    double acc = 1.0;
    for (int i = ch.K; i >= 2; --i) {
        const double hi = ch.cross_gain(i);
        acc += hi * hi * ch.power(i);
        tv.t[static_cast<size_t>(i) - 2] = acc;
    }
    return tv;
}

double TiVector::at(int i) const {
    const int K = static_cast<int>(t.size()) + 1;
    if (i == K + 1) return 1.0;
    if (i < 2 || i > K) throw std::out_of_range("t_i index " + std::to_string(i) + " out of range");
    return t[static_cast<size_t>(i) - 2];
}

RateReport sum_rate_m1(const StandardChannel& ch) { return sum_rate_mac_subset(ch, {1}); }

RateReport sum_rate_mac_subset(const StandardChannel& ch, const std::vector<int>& mac_set) {
    require_standard(ch);
    std::set<int> mac = as_set(mac_set);
    if (mac.find(1) == mac.end()) throw std::invalid_argument("mac_set must contain transmitter 1");
    for (int i : mac)
        if (i < 1 || i > ch.K)
            throw std::invalid_argument("mac_set: index " + std::to_string(i) + " out of range 1.." + std::to_string(ch.K));

    double mac_power = ch.power(1);
    double residual = 0.0;
    for (int j = 2; j <= ch.K; ++j) {
        const double hj = ch.cross_gain(j);
        if (mac.count(j))
            mac_power += hj * hj * ch.power(j);
        else
            residual += hj * hj * ch.power(j);
    }

    RateReport rep;
    rep.strategy.mode = ChannelMode::XC;
    rep.strategy.mac_set.assign(mac.begin(), mac.end());

    const double r1 = half_log2_1p(mac_power / (1.0 + residual));
    rep.per_receiver_rates.emplace_back(1, r1);
    rep.inn_terms.emplace_back(1, 1.0 + residual);
    rep.sum_rate_bits = r1;
    for (int i = 2; i <= ch.K; ++i) {
        // MAC members other than 1 carry only the cross message: zero own rate.
        const double ri = mac.count(i) ? 0.0 : half_log2_1p(ch.power(i));
        rep.per_receiver_rates.emplace_back(i, ri);
        rep.inn_terms.emplace_back(i, 1.0);
        rep.sum_rate_bits += ri;
    }
    return rep;
}

RateReport sum_rate_mi_k(const StandardChannel& ch, const std::vector<int>& decoded_set,
                         const std::vector<int>& order) {
    require_standard(ch);
    check_interferer_set(ch, decoded_set, "decoded_set");
    std::set<int> dec = as_set(decoded_set);

    std::vector<int> eff_order = order;
    if (eff_order.empty() && !dec.empty()) {
        OrderSearch s = best_decoding_order(ch, decoded_set);
        if (s.found)
            eff_order = s.order;
        else
            eff_order.assign(dec.begin(), dec.end());
    }
    if (as_set(eff_order) != dec || eff_order.size() != dec.size())
        throw std::invalid_argument("order must be a permutation of decoded_set");

    double residual = 0.0;
    for (int j = 2; j <= ch.K; ++j)
        if (!dec.count(j)) {
            const double hj = ch.cross_gain(j);
            residual += hj * hj * ch.power(j);
        }

    RateReport rep;
    rep.strategy.mode = ChannelMode::IC;
    rep.strategy.mac_set.assign(dec.begin(), dec.end());
    rep.strategy.decoding_order = eff_order;

    const double r1 = half_log2_1p(ch.power(1) / (1.0 + residual));
    rep.per_receiver_rates.emplace_back(1, r1);
    rep.inn_terms.emplace_back(1, 1.0 + residual);
    rep.sum_rate_bits = r1;
    for (int i = 2; i <= ch.K; ++i) {
        const double ri = half_log2_1p(ch.power(i));
        rep.per_receiver_rates.emplace_back(i, ri);
        rep.inn_terms.emplace_back(i, 1.0);
        rep.sum_rate_bits += ri;
    }
    rep.sic_feasible = sic_feasible(ch, decoded_set, eff_order).feasible;
    return rep;
}

SicCheck sic_feasible(const StandardChannel& ch, const std::vector<int>& decoded_set,
                      const std::vector<int>& order, double tol) {
    require_standard(ch);
    check_interferer_set(ch, decoded_set, "decoded_set");
    std::set<int> dec = as_set(decoded_set);
    if (as_set(order) != dec || order.size() != dec.size())
        throw std::invalid_argument("order must be a permutation of decoded_set");

    double residual = 0.0;
    for (int j = 2; j <= ch.K; ++j)
        if (!dec.count(j)) {
            const double hj = ch.cross_gain(j);
            residual += hj * hj * ch.power(j);
        }

    // pending[l] = power of decoded interferers not yet cancelled after stage l
    double pending = 0.0;
    for (int j : order) {
        const double hj = ch.cross_gain(j);
        pending += hj * hj * ch.power(j);
    }

    SicCheck chk;
    for (int j : order) {
        const double hj = ch.cross_gain(j);
        pending -= hj * hj * ch.power(j);
        const double required = 1.0 + ch.power(1) + pending + residual;
        const double margin = hj * hj - required;
        chk.stage_margins.push_back(margin);
        if (margin < -tol) chk.feasible = false;
    }
    return chk;
}

OrderSearch best_decoding_order(const StandardChannel& ch, const std::vector<int>& decoded_set,
                                double tol) {
    require_standard(ch);
    check_interferer_set(ch, decoded_set, "decoded_set");
    OrderSearch res;
    std::vector<int> sorted(decoded_set.begin(), decoded_set.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.empty()) {
        res.found = true;
        return res;
    }
    if (sorted.size() <= 8) {
        std::vector<int> perm = sorted;
        do {
            if (sic_feasible(ch, sorted, perm, tol).feasible) {
                res.found = true;
                res.order = perm;
                return res;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        return res;
    }
    // Too many orders to enumerate: try strongest-first (descending h^2 P).
    res.exhaustive = false;
    std::vector<int> greedy = sorted;
    std::stable_sort(greedy.begin(), greedy.end(), [&](int a, int b) {
        const double wa = ch.cross_gain(a) * ch.cross_gain(a) * ch.power(a);
        const double wb = ch.cross_gain(b) * ch.cross_gain(b) * ch.power(b);
        return wa > wb;
    });
    if (sic_feasible(ch, sorted, greedy, tol).feasible) {
        res.found = true;
        res.order = greedy;
    }
    return res;
}

}  // namespace m21
