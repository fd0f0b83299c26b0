// SPDX-License-Identifier: Apache-2.0

#include "m21/verify_suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>

#include "m21/certificates.hpp"
#include "m21/monte_carlo.hpp"
#include "m21/oracle.hpp"
#include "m21/philox.hpp"

namespace m21 {

namespace {

std::string fmt12(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

StandardChannel random_channel(SeededRng& rng, int K, double h_max = 3.0) {
    std::vector<double> h, P;
    for (int j = 2; j <= K; ++j) h.push_back(rng.uniform(0.0, h_max));
    for (int i = 1; i <= K; ++i) P.push_back(rng.log_uniform(0.01, 50.0));
    return StandardChannel::unit_noise(std::move(h), std::move(P));
}

std::vector<int> random_interferer_subset(SeededRng& rng, int K) {
    std::vector<int> out;
    for (int j = 2; j <= K; ++j)
        if (rng.uniform() < 0.5) out.push_back(j);
    return out;
}

// Independent restatement of the T8 existence test: a permutation of {2..K}
// whose every prefix element satisfies h^2 P <= (1+P)(1 + later h^2 P sums)
// and whose last element has gain at most 1.
bool t8_exists_reference(const StandardChannel& ch, double tol) {
    std::vector<int> perm;
    for (int j = 2; j <= ch.K; ++j) perm.push_back(j);
    do {
        bool ok = true;
        for (size_t i = 0; i + 1 < perm.size() && ok; ++i) {
            double tail = 1.0;
            for (size_t l = i + 1; l < perm.size(); ++l) {
                const double hl = ch.cross_gain(perm[l]);
                tail += hl * hl * ch.power(perm[l]);
            }
            const double hi = ch.cross_gain(perm[i]);
            const double pi = ch.power(perm[i]);
            if (hi * hi * pi > (1.0 + pi) * tail + tol) ok = false;
        }
        const double hl = ch.cross_gain(perm.back());
        if (hl * hl > 1.0 + tol) ok = false;
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

GaussianSystem random_system(SeededRng& rng, int d) {
    // A random PD covariance via a random square root plus a diagonal bump.
    Eigen::MatrixXd a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
    Eigen::MatrixXd cov = a * a.transpose() + 0.2 * Eigen::MatrixXd::Identity(d, d);
    GaussianSystem sys;
    for (int i = 0; i < d; ++i) {
        std::vector<std::pair<std::string, double>> cross;
        for (int j = 0; j < i; ++j) cross.emplace_back("v" + std::to_string(j), cov(i, j));
        sys.add_variable("v" + std::to_string(i), cov(i, i), cross);
    }
    return sys;
}

}  // namespace

std::string CheckResult::line() const {
    return std::string(pass ? "PASS" : "FAIL") + " " + name + " lhs=" + fmt12(lhs) + " rhs=" + fmt12(rhs) +
           " tol=" + fmt12(tol);
}

std::vector<CheckResult> run_verify_suite(const VerifyOptions& opts) {
    if (opts.suite != "all" && opts.suite != "exact" && opts.suite != "mc")
        throw std::invalid_argument("unknown suite \"" + opts.suite + "\" (expected all, exact or mc)");
    const bool exact = opts.suite != "mc";
    const bool mc = opts.suite != "exact";
    const double tol = opts.tolerance;

    std::vector<CheckResult> results;
    auto closeness = [&](std::string name, double lhs, double rhs, double t) {
        results.push_back({std::move(name), std::abs(lhs - rhs) <= t, lhs, rhs, t});
    };
    auto at_most = [&](std::string name, double lhs, double rhs) {
        results.push_back({std::move(name), lhs <= rhs, lhs, rhs, 0.0});
    };

    if (exact) {
        {
            GaussianSystem sys;
            sys.add_variable("x", 1.0);
            sys.add_variable("y", 4.0);
            const std::vector<std::string> vx = {"x"}, vy = {"y"};
            const double h1 = gaussian_entropy(sys, vx);
            closeness("entropy-unit-variance", h1, 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e), 1e-12);
            closeness("entropy-variance-scaling", gaussian_entropy(sys, vy) - h1, 1.0, 1e-12);
        }
        {
            GaussianSystem sys;
            sys.add_variable("x", 1.0);
            sys.add_variable("n", 1.0);
            sys.add_combination("y", {{"x", 1.0}, {"n", 1.0}});
            const std::vector<std::string> a = {"x"}, b = {"y"};
            closeness("mi-point-to-point", gaussian_mi(sys, a, b).bits, 0.5, 1e-12);
        }
        {
            SeededRng rng(opts.seed ^ 0x11);
            double worst_sym = 0.0, worst_chain = 0.0;
            for (int trial = 0; trial < 50; ++trial) {
                GaussianSystem sys = random_system(rng, 5);
                const std::vector<std::string> a = {"v0", "v1"}, b = {"v2"}, c = {"v3"}, bc = {"v2", "v3"};
                worst_sym = std::max(worst_sym,
                                     std::abs(gaussian_mi(sys, a, b, c).bits - gaussian_mi(sys, b, a, c).bits));
                const double joint = gaussian_mi(sys, a, bc).bits;
                const double chain = gaussian_mi(sys, a, b).bits + gaussian_mi(sys, a, c, b).bits;
                worst_chain = std::max(worst_chain, std::abs(joint - chain));
            }
            closeness("mi-symmetry", worst_sym, 0.0, 1e-12);
            closeness("mi-chain-rule", worst_chain, 0.0, tol);
        }
        {
            SeededRng rng(opts.seed ^ 0x22);
            double worst = 0.0;
            for (int trial = 0; trial < 100; ++trial) {
                const int K = rng.uniform_int(2, 5);
                StandardChannel ch = random_channel(rng, K);
                RateReport m1 = sum_rate_m1(ch);
                double mi_total = mi_rate_rx1_mac(ch, {1});
                for (int i = 2; i <= K; ++i) mi_total += mi_rate_own(ch, i);
                worst = std::max(worst, std::abs(m1.sum_rate_bits - mi_total));
            }
            closeness("rate-m1-vs-mi", worst, 0.0, tol);
        }
        {
            SeededRng rng(opts.seed ^ 0x33);
            double worst = 0.0;
            for (int trial = 0; trial < 100; ++trial) {
                const int K = rng.uniform_int(2, 5);
                StandardChannel ch = random_channel(rng, K);
                std::vector<int> mac = {1};
                for (int j : random_interferer_subset(rng, K)) mac.push_back(j);
                RateReport r = sum_rate_mac_subset(ch, mac);
                double mi_total = mi_rate_rx1_mac(ch, mac);
                std::set<int> in_mac(mac.begin(), mac.end());
                for (int i = 2; i <= K; ++i)
                    if (!in_mac.count(i)) mi_total += mi_rate_own(ch, i);
                worst = std::max(worst, std::abs(r.sum_rate_bits - mi_total));
            }
            closeness("rate-mac-vs-mi", worst, 0.0, tol);
        }
        {
            SeededRng rng(opts.seed ^ 0x44);
            double worst = 0.0;
            for (int trial = 0; trial < 100; ++trial) {
                const int K = rng.uniform_int(2, 5);
                StandardChannel ch = random_channel(rng, K);
                std::vector<int> dec = random_interferer_subset(rng, K);
                RateReport r = sum_rate_mi_k(ch, dec, dec);
                double mi_total = mi_rate_rx1_after_sic(ch, dec);
                for (int i = 2; i <= K; ++i) mi_total += mi_rate_own(ch, i);
                worst = std::max(worst, std::abs(r.sum_rate_bits - mi_total));
            }
            closeness("rate-mik-vs-mi", worst, 0.0, tol);
        }
        {
            SeededRng rng(opts.seed ^ 0x55);
            double worst_zero = 0.0;
            double min_perturbed = std::numeric_limits<double>::infinity();
            for (int trial = 0; trial < 200; ++trial) {
                StandardChannel ch = StandardChannel::unit_noise(
                    {rng.uniform(0.5, 1.5), rng.uniform(0.5, 1.5)},
                    {rng.uniform(0.5, 4.0), rng.uniform(0.5, 4.0), rng.uniform(0.5, 4.0)});
                const double rho2 = rng.uniform(0.3, 0.9);
                worst_zero = std::max(worst_zero, std::abs(smart_genie_mi(ch, rho2).bits));
                min_perturbed = std::min(min_perturbed, smart_genie_mi(ch, rho2, 2, 1.1).bits);
            }
            closeness("smart-genie-zero-mi", worst_zero, 0.0, tol);
            results.push_back({"smart-genie-perturbed-mi", min_perturbed > 1e-6, min_perturbed, 1e-6, 0.0});
        }
        {
            SeededRng rng(opts.seed ^ 0x66);
            double worst = 0.0;
            for (int trial = 0; trial < 100; ++trial) {
                const int n = rng.uniform_int(2, 6);
                std::vector<double> P, c;
                const double sigma2 = rng.uniform(0.5, 4.0);
                double c2 = 0.0;
                for (int i = 0; i < n; ++i) {
                    P.push_back(rng.log_uniform(0.1, 50.0));
                    c.push_back(rng.uniform(-1.0, 1.0));
                    c2 += c.back() * c.back();
                }
                const double shrink = std::sqrt(rng.uniform(0.0, 1.0) * sigma2 / std::max(c2, 1e-12));
                for (double& v : c) v *= shrink;
                LemmaLiReport rep = verify_lemma_li(P, c, sigma2);
                if (rep.precondition_met) worst = std::max(worst, std::abs(rep.diff));
            }
            closeness("lemma-li-equality", worst, 0.0, tol);
        }
        {
            SeededRng rng(opts.seed ^ 0x77);
            double worst_gap = 0.0, worst_inv = 0.0;
            for (int trial = 0; trial < 200; ++trial) {
                StandardChannel ch = StandardChannel::unit_noise(
                    {rng.uniform(0.1, 5.0), rng.uniform(0.1, 5.0)},
                    {rng.log_uniform(0.1, 100.0), rng.log_uniform(0.1, 100.0), rng.log_uniform(0.1, 100.0)});
                const double rho2 = rng.uniform(0.01, 0.99);
                T3Gap g = t3_gap(ch, rho2);
                T3Direct d = t3_gap_direct(ch, rho2);
                worst_gap = std::max(worst_gap, std::abs(g.primary.gap.gap_bits - d.gap_bits));
                const double back = rho_for_gap(g.primary.gap.gap_bits, ch.cross_gain(3), ch.power(3));
                worst_inv = std::max(worst_inv, std::abs(back - rho2));
            }
            closeness("t3-closed-vs-direct", worst_gap, 0.0, tol);
            closeness("rho-gap-inverse", worst_inv, 0.0, tol);
        }
        {
            SeededRng rng(opts.seed ^ 0x88);
            double worst_excess = -std::numeric_limits<double>::infinity();
            double worst_restate = 0.0;
            for (int trial = 0; trial < 400; ++trial) {
                const int K = rng.uniform_int(3, 6);
                StandardChannel ch = random_channel(rng, K, 1.0);
                GapReport g = t6_gap(ch);
                worst_excess = std::max(worst_excess, g.gap_bits - (0.5 * K - 1.0));
                // Independent restatement of the gap sum.
                double gap = 0.0;
                for (int i = 2; i <= K - 1; ++i) {
                    double t_next = 1.0;
                    for (int j = i + 1; j <= K; ++j) {
                        const double hj = ch.cross_gain(j);
                        t_next += hj * hj * ch.power(j);
                    }
                    const double hi = ch.cross_gain(i);
                    gap += 0.5 * std::log2(1.0 + hi * hi * ch.power(i) / (t_next * (1.0 + ch.power(i))));
                }
                worst_restate = std::max(worst_restate, std::abs(gap - g.gap_bits));
            }
            at_most("t6-gap-within-bound", worst_excess, 0.0);
            closeness("t6-gap-restatement", worst_restate, 0.0, tol);
        }
        {
            SeededRng rng(opts.seed ^ 0x99);
            int disagreements_t7 = 0, disagreements_t8 = 0;
            for (int trial = 0; trial < 200; ++trial) {
                const int K = rng.uniform_int(2, 5);
                StandardChannel ch = random_channel(rng, K);
                std::vector<int> dec = random_interferer_subset(rng, K);
                if (check_t7(ch, dec).holds != brute_force_t7(ch, dec).holds) ++disagreements_t7;
                if (check_t8(ch).cert.holds != t8_exists_reference(ch, kBoundaryTol)) ++disagreements_t8;
            }
            at_most("t7-vs-brute-force", disagreements_t7, 0.0);
            at_most("t8-vs-exhaustive", disagreements_t8, 0.0);
        }
    }

    if (mc) {
        GaussianSystem sys;
        sys.add_variable("x", 1.0);
        sys.add_variable("y", 4.0);
        const std::vector<std::string> vx = {"x"}, vy = {"y"};
        const double closed1 = gaussian_entropy(sys, vx);
        const double closed4 = gaussian_entropy(sys, vy);

        McConfig cfg{opts.seed, opts.samples, 3.0};
        McEstimate e1 = mc_entropy(sys, vx, cfg);
        closeness("mc-entropy-unit-variance", e1.value_bits, closed1, cfg.confidence_sigma * e1.std_error);
        McEstimate e4 = mc_entropy(sys, vy, cfg);
        closeness("mc-entropy-variance-4", e4.value_bits, closed4, cfg.confidence_sigma * e4.std_error);
        McEstimate e1b = mc_entropy(sys, vx, cfg);
        closeness("mc-determinism", e1.value_bits, e1b.value_bits, 0.0);

        const std::int64_t trial_samples = std::max<std::int64_t>(10'000, opts.samples / 10);
        int outside = 0;
        for (int t = 0; t < 50; ++t) {
            McConfig c{opts.seed * 1000 + static_cast<std::uint64_t>(t), trial_samples, 3.0};
            McEstimate e = mc_entropy(sys, vx, c);
            if (!e.brackets(closed1, c.confidence_sigma)) ++outside;
        }
        at_most("mc-bracket-trials-outside-3sigma", outside, 1.0);
    }

    return results;
}

}  // namespace m21
