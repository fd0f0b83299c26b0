// SPDX-License-Identifier: Apache-2.0

#include "m21/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace m21 {

namespace {

double entropy_of_variance(double v) {
    return 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e * v);
}

}  // namespace

LemmaLiReport verify_lemma_li(std::span<const double> powers, std::span<const double> coeffs,
                              double sigma2) {
    if (powers.size() != coeffs.size()) throw std::invalid_argument("powers and coeffs must have equal length");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
    const size_t n = powers.size();

    double c2 = 0.0;
    for (double c : coeffs) c2 += c * c;
    LemmaLiReport rep;
    rep.precondition_met = c2 <= sigma2 + 1e-12;
    if (!rep.precondition_met) return rep;

    // Route 1: direct per-letter closed form.
    double combined_var = sigma2;
    double direct = 0.0;
    for (size_t i = 0; i < n; ++i) {
        direct += entropy_of_variance(powers[i] + 1.0);
        combined_var += coeffs[i] * coeffs[i] * powers[i];
    }
    direct -= entropy_of_variance(combined_var);
    rep.direct_bits = direct;

    // Route 2: the scaled-sum decomposition.  With u_i = w_i + n_i,
    // sum c_i w_i + n_1 has the law of sum c_i u_i + n~ where
    // n~ ~ N(0, sigma2 - sum c_i^2), so both terms come out of one joint
    // covariance assembled by the system builder.
    GaussianSystem sys;
    std::vector<std::pair<std::string, double>> combo;
    std::vector<std::string> u_names;
    for (size_t i = 0; i < n; ++i) {
        const std::string w = "w" + std::to_string(i + 1);
        const std::string nn = "n" + std::to_string(i + 1);
        const std::string u = "u" + std::to_string(i + 1);
        sys.add_variable(w, powers[i]);
        sys.add_variable(nn, 1.0);
        sys.add_combination(u, {{w, 1.0}, {nn, 1.0}});
        u_names.push_back(u);
        if (coeffs[i] != 0.0) combo.emplace_back(u, coeffs[i]);
    }
    sys.add_combination("v", combo, sigma2 - c2);
    double decomposed = 0.0;
    for (const auto& u : u_names) decomposed += gaussian_entropy(sys, std::span(&u, 1));
    const std::string v = "v";
    decomposed -= gaussian_entropy(sys, std::span(&v, 1));
    rep.decomposed_bits = decomposed;
    rep.diff = rep.direct_bits - rep.decomposed_bits;
    return rep;
}

GaussianSystem make_t3_genie_system(const StandardChannel& ch, double rho2, int partner,
                                    double eta_scale) {
    require_standard(ch);
    if (ch.K != 3) throw std::invalid_argument("genie system applies to K=3 channels");
    if (!(rho2 > 0.0 && rho2 < 1.0)) throw std::invalid_argument("rho2 must lie in (0,1)");
    if (partner != 2 && partner != 3) throw std::invalid_argument("partner must be 2 or 3");
    const int other = partner == 2 ? 3 : 2;
    const double ho = ch.cross_gain(other);
    const double rho = std::sqrt(rho2);
    const double eta = eta_scale * (1.0 + ho * ho * ch.power(other)) / rho;

    GaussianSystem sys;
    sys.add_variable("x1", ch.power(1));
    sys.add_variable("x2", ch.power(2));
    sys.add_variable("x3", ch.power(3));
    sys.add_variable("n1", 1.0);
    sys.add_variable("z1", 1.0, {{"n1", rho}});
    sys.add_combination("y1", {{"x1", 1.0}, {"x2", ch.cross_gain(2)}, {"x3", ch.cross_gain(3)}, {"n1", 1.0}});
    sys.add_combination("s1", {{"x1", 1.0}, {"x" + std::to_string(partner), ch.cross_gain(partner)}, {"z1", eta}});
    return sys;
}

T3Direct t3_gap_direct(const StandardChannel& ch, double rho2, int partner) {
    const int other = partner == 2 ? 3 : 2;
    GaussianSystem sys = make_t3_genie_system(ch, rho2, partner);
    const double ho = ch.cross_gain(other);
    const double rho = std::sqrt(rho2);
    T3Direct out;
    out.eta = (1.0 + ho * ho * ch.power(other)) / rho;
    const double hp = ch.cross_gain(partner);
    out.eta_within_useful = out.eta * out.eta <= hp * hp + kBoundaryTol;

    const std::vector<std::string> a = {"x" + std::to_string(other)};
    const std::vector<std::string> b = {"s1"};
    const std::vector<std::string> c = {"y1", "x1", "x" + std::to_string(partner)};
    MiResult mi = gaussian_mi(sys, a, b, c);
    out.gap_bits = mi.bits;
    out.degenerate = mi.degenerate_conditioning;
    return out;
}

MiResult smart_genie_mi(const StandardChannel& ch, double rho2, int partner, double eta_scale) {
    GaussianSystem sys = make_t3_genie_system(ch, rho2, partner, eta_scale);
    const std::vector<std::string> a = {"x1", "x" + std::to_string(partner)};
    const std::vector<std::string> b = {"s1"};
    const std::vector<std::string> c = {"y1"};
    return gaussian_mi(sys, a, b, c);
}

Certificate brute_force_t7(const StandardChannel& ch, const std::vector<int>& decoded_set,
                           double tol) {
    require_standard(ch);
    if (decoded_set.size() > 8) throw std::invalid_argument("brute_force_t7: decoded set larger than 8");
    std::set<int> dec(decoded_set.begin(), decoded_set.end());

    double residual_power = 0.0;
    double residual_gain2 = 0.0;
    for (int j = 2; j <= ch.K; ++j)
        if (!dec.count(j)) {
            const double hj = ch.cross_gain(j);
            residual_power += hj * hj * ch.power(j);
            residual_gain2 += hj * hj;
        }

    Certificate cert;
    cert.theorem_id = TheoremId::T7;
    bool any = false;
    std::vector<int> witness;
    std::vector<int> perm(dec.begin(), dec.end());
    if (perm.empty()) {
        any = true;
    } else {
        std::sort(perm.begin(), perm.end());
        do {
            bool ok = true;
            for (size_t l = 0; l < perm.size() && ok; ++l) {
                double later = 0.0;
                for (size_t m = l + 1; m < perm.size(); ++m) {
                    const double hm = ch.cross_gain(perm[m]);
                    later += hm * hm * ch.power(perm[m]);
                }
                const double hl = ch.cross_gain(perm[l]);
                if (hl * hl < 1.0 + ch.power(1) + later + residual_power - tol) ok = false;
            }
            if (ok) {
                any = true;
                witness = perm;
                break;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    }

    Condition resc;
    resc.description = "sum over undecoded j of h_j^2 <= 1";
    resc.lhs = residual_gain2;
    resc.rhs = 1.0;
    resc.margin = 1.0 - residual_gain2;
    cert.conditions.push_back(resc);
    cert.holds = any && residual_gain2 <= 1.0 + tol;
    cert.witness = witness;
    return cert;
}

double mi_rate_rx1_mac(const StandardChannel& ch, const std::vector<int>& mac_set) {
    GaussianSystem sys = make_channel_system(ch);
    std::vector<std::string> a;
    for (int i : mac_set) a.push_back("x" + std::to_string(i));
    const std::vector<std::string> b = {"y1"};
    return gaussian_mi(sys, a, b).bits;
}

double mi_rate_rx1_after_sic(const StandardChannel& ch, const std::vector<int>& decoded_set) {
    GaussianSystem sys = make_channel_system(ch);
    const std::vector<std::string> a = {"x1"};
    const std::vector<std::string> b = {"y1"};
    std::vector<std::string> c;
    for (int j : decoded_set) c.push_back("x" + std::to_string(j));
    return gaussian_mi(sys, a, b, c).bits;
}

double mi_rate_own(const StandardChannel& ch, int i) {
    GaussianSystem sys = make_channel_system(ch);
    const std::vector<std::string> a = {"x" + std::to_string(i)};
    const std::vector<std::string> b = {"y" + std::to_string(i)};
    return gaussian_mi(sys, a, b).bits;
}

}  // namespace m21
