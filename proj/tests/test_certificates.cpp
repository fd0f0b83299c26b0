// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "m21/certificates.hpp"
#include "m21/json_io.hpp"
#include "m21/philox.hpp"

using namespace m21;

namespace {

StandardChannel k3(double a, double b, double p1 = 1.0, double p2 = 1.0, double p3 = 1.0) {
    return StandardChannel::unit_noise({a, b}, {p1, p2, p3});
}

StandardChannel random_channel(SeededRng& rng, int K, double h_max = 3.0) {
    std::vector<double> h, P;
    for (int j = 2; j <= K; ++j) h.push_back(rng.uniform(0.0, h_max));
    for (int i = 1; i <= K; ++i) P.push_back(rng.log_uniform(0.01, 50.0));
    return StandardChannel::unit_noise(std::move(h), std::move(P));
}

}  // namespace

TEST_CASE("noisy-interference condition") {
    Certificate boundary = check_t1(k3(0.6, 0.8));
    CHECK(boundary.holds);
    CHECK(boundary.conditions[0].margin == doctest::Approx(0.0).epsilon(1e-15));

    Certificate inside = check_t1(k3(0.5, 0.5));
    CHECK(inside.holds);
    CHECK(inside.conditions[0].margin == doctest::Approx(0.5).epsilon(1e-15));

    // Z-channel reduction: with b = 0 the condition is exactly a^2 <= 1.
    Certificate z = check_t1(k3(1.2, 0.0));
    CHECK_FALSE(z.holds);
    CHECK(z.conditions[0].rhs == 1.0);
    CHECK(z.conditions[0].lhs == doctest::Approx(1.44).epsilon(1e-15));
}

TEST_CASE("two-user MAC optimality condition") {
    // Threshold at b=0.6, P3=1: (1+0.36)^2/(1-0.36) = 1.8496/0.64 = 2.89.
    Certificate strong = check_t2_t4(k3(1.8, 0.6), 2);
    CHECK(strong.holds);  // 3.24 >= 2.89
    CHECK(strong.theorem_id == TheoremId::T2);
    CHECK(strong.witness == std::vector<int>{2});
    const double threshold = strong.conditions[0].rhs / (1.0 - 0.36);
    CHECK(threshold == doctest::Approx(2.89).epsilon(1e-12));

    CHECK_FALSE(check_t2_t4(k3(1.6, 0.6), 2).holds);  // 2.56 < 2.89

    // Z-channel reduction: threshold exactly a^2 >= 1.
    Certificate z = check_t2_t4(k3(1.1, 0.0), 2);
    CHECK(z.holds);
    CHECK(z.conditions[0].rhs == 1.0);
    CHECK(z.conditions[0].lhs == doctest::Approx(1.21).epsilon(1e-15));

    // Interference gain at 1 denies the region no matter how strong the partner is.
    CHECK_FALSE(check_t2_t4(k3(100.0, 1.0), 2).holds);
    CHECK_FALSE(check_t2_t4(k3(100.0, 1.3), 2).holds);

    CHECK_THROWS_AS(check_t2_t4(k3(1.0, 1.0), 4), std::out_of_range);

    // K=4 channels report the K-user theorem id.
    StandardChannel k4 = StandardChannel::unit_noise({3.0, 0.1, 0.1}, {1.0, 1.0, 1.0, 1.0});
    CHECK(check_t2_t4(k4, 2).theorem_id == TheoremId::T4);
}

TEST_CASE("full-MAC gap certificate") {
    StandardChannel ch = k3(8.0, 1.5);  // a^2 = 64 >= 3.25^2/rho2 for rho2 >= 0.165

    T3Gap mid = t3_gap(ch, 13.0 / 22.0);
    CHECK(mid.primary.cert.holds);  // 64 >= 10.5625/0.5909 = 17.87 and b^2 = 2.25 >= 1
    CHECK(mid.primary.gap.gap_bits == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mid.primary.cert.variant == 2);
    REQUIRE(mid.primary.cert.gap_bits.has_value());
    CHECK(*mid.primary.cert.gap_bits == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mid.primary.gap.outer_bound_bits ==
          doctest::Approx(sum_rate_mac_subset(ch, {1, 2, 3}).sum_rate_bits + 0.5).epsilon(1e-12));

    T3Gap one = t3_gap(ch, 0.8125);
    CHECK(one.primary.gap.gap_bits == doctest::Approx(1.0).epsilon(1e-12));

    T3Gap tiny = t3_gap(ch, 1e-12);
    CHECK(std::abs(tiny.primary.gap.gap_bits) < 1e-9);

    // The symmetric variant is the primary one of the swapped channel.
    StandardChannel sw = k3(1.5, 8.0, 1.0, 2.0, 3.0);
    StandardChannel orig = k3(8.0, 1.5, 1.0, 3.0, 2.0);
    T3Gap g_orig = t3_gap(orig, 0.4);
    T3Gap g_sw = t3_gap(sw, 0.4);
    CHECK(g_sw.symmetric.gap.gap_bits == doctest::Approx(g_orig.primary.gap.gap_bits).epsilon(1e-12));
    CHECK(g_sw.symmetric.cert.holds == g_orig.primary.cert.holds);
    CHECK(g_sw.symmetric.cert.variant == 3);

    CHECK_FALSE(t3_gap(k3(8.0, 0.9), 0.5).primary.cert.holds);  // b^2 < 1
    CHECK_THROWS_AS(t3_gap(ch, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(t3_gap(ch, 1.0), std::invalid_argument);
    StandardChannel k4 = StandardChannel::unit_noise({1.0, 1.0, 1.0}, {1.0, 1.0, 1.0, 1.0});
    CHECK_THROWS_AS(t3_gap(k4, 0.5), std::invalid_argument);
}

TEST_CASE("rho as a function of the gap budget") {
    CHECK(rho_for_gap(0.0, 1.5, 1.0) == 0.0);
    CHECK(rho_for_gap(0.5, 1.5, 1.0) == doctest::Approx(13.0 / 22.0).epsilon(1e-14));
    CHECK(rho_for_gap(1.0, 1.5, 1.0) == doctest::Approx(0.8125).epsilon(1e-14));
    const double near_one = rho_for_gap(30.0, 1.5, 1.0);
    CHECK(near_one < 1.0);
    CHECK(near_one > 0.9999999);
    CHECK_THROWS_AS(rho_for_gap(-0.1, 1.5, 1.0), std::invalid_argument);
}

TEST_CASE("rho_for_gap is strictly increasing in the gap and decreasing in P3") {
    // A larger interference power shrinks 1/(1+b^2 P3), so the same gap budget
    // is met with a smaller rho^2.
    SeededRng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const double b = rng.uniform(0.1, 5.0);
        const double p3 = rng.log_uniform(0.1, 100.0);
        const double d1 = rng.uniform(0.01, 2.0);
        const double d2 = d1 + rng.uniform(0.01, 1.0);
        CHECK(rho_for_gap(d1, b, p3) < rho_for_gap(d2, b, p3));
        const double p3_hi = p3 * rng.uniform(1.1, 5.0);
        CHECK(rho_for_gap(d1, b, p3) > rho_for_gap(d1, b, p3_hi));
    }
}

TEST_CASE("gap inverse consistency") {
    SeededRng rng(32);
    for (int trial = 0; trial < 500; ++trial) {
        StandardChannel ch = k3(rng.uniform(0.1, 5.0), rng.uniform(0.1, 5.0), rng.log_uniform(0.1, 100.0),
                                rng.log_uniform(0.1, 100.0), rng.log_uniform(0.1, 100.0));
        const double rho2 = rng.uniform(0.01, 0.99);
        T3Gap g = t3_gap(ch, rho2);
        CHECK(rho_for_gap(g.primary.gap.gap_bits, ch.cross_gain(3), ch.power(3)) ==
              doctest::Approx(rho2).epsilon(1e-9));
        CHECK(rho_for_gap(g.symmetric.gap.gap_bits, ch.cross_gain(2), ch.power(2)) ==
              doctest::Approx(rho2).epsilon(1e-9));
    }
}

TEST_CASE("XC-as-IC region") {
    Certificate boundary = check_t5(k3(1.0, 1.0));
    CHECK(boundary.holds);

    Certificate off = check_t5(k3(0.5, 1.1));
    CHECK_FALSE(off.holds);
    CHECK(off.conditions[1].description.find("h_3") != std::string::npos);
    CHECK(off.conditions[1].margin < 0.0);

    StandardChannel k5 = StandardChannel::unit_noise({0.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 1.0, 1.0, 1.0});
    CHECK(check_t5(k5).holds);
}

TEST_CASE("treat-as-noise gap inside the XC-as-IC region") {
    GapReport g = t6_gap(k3(1.0, 1.0, 7.7, 1.0, 1.0));
    // t_3 = 2, so the single term is 0.5*log2(1 + 1/(2*2)).
    CHECK(g.gap_bits == doctest::Approx(0.5 * std::log2(1.25)).epsilon(1e-15));
    CHECK(g.gap_bits == doctest::Approx(0.16096404744368117).epsilon(1e-12));
    CHECK(g.gap_bits <= 0.5);
    CHECK(g.outer_bound_bits == doctest::Approx(g.achievable_bits + g.gap_bits).epsilon(1e-15));

    CHECK(t6_gap(k3(0.0, 0.0)).gap_bits == 0.0);
    CHECK_THROWS_AS(t6_gap(k3(1.1, 0.5)), std::domain_error);

    SeededRng rng(33);
    for (int trial = 0; trial < 1000; ++trial) {
        StandardChannel ch = StandardChannel::unit_noise(
            {rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)},
            {rng.log_uniform(0.01, 100.0), rng.log_uniform(0.01, 100.0), rng.log_uniform(0.01, 100.0),
             rng.log_uniform(0.01, 100.0)});
        GapReport r = t6_gap(ch);
        CHECK(r.gap_bits < 1.0);  // K/2 - 1 for K=4, strict for finite powers
    }

    Certificate wrapped = check_t6(k3(1.0, 1.0));
    CHECK(wrapped.theorem_id == TheoremId::T6);
    CHECK(wrapped.holds);
    CHECK(wrapped.gap_bits.has_value());
    CHECK_FALSE(check_t6(k3(1.2, 0.2)).gap_bits.has_value());
}

TEST_CASE("outer bound dominates every enumerated XC strategy in the T5 region") {
    SeededRng rng(34);
    for (int trial = 0; trial < 1000; ++trial) {
        const int K = rng.uniform_int(3, 5);
        std::vector<double> h, P;
        for (int j = 2; j <= K; ++j) h.push_back(rng.uniform(0.0, 1.0));
        for (int i = 1; i <= K; ++i) P.push_back(rng.log_uniform(0.1, 50.0));
        StandardChannel ch = StandardChannel::unit_noise(std::move(h), std::move(P));
        GapReport g = t6_gap(ch);
        Recommendation rec = recommend(ch, ChannelMode::XC);
        CHECK(g.outer_bound_bits >= rec.best.sum_rate_bits - 1e-9);
    }
}

TEST_CASE("partial-cancellation optimality certificate") {
    Certificate both = check_t7(k3(3.0, 2.0), {2, 3});
    CHECK(both.holds);
    CHECK(both.witness == std::vector<int>{2, 3});

    // Decoding only transmitter 2: the tabulated K=3 conditions are
    // a^2 >= 1 + P1 + b^2 P3 and b^2 <= 1.
    SeededRng rng(35);
    for (int trial = 0; trial < 300; ++trial) {
        StandardChannel ch = k3(rng.uniform(0.0, 3.0), rng.uniform(0.0, 3.0), rng.log_uniform(0.1, 10.0),
                                rng.log_uniform(0.1, 10.0), rng.log_uniform(0.1, 10.0));
        const double a2 = ch.cross_gain(2) * ch.cross_gain(2);
        const double b2 = ch.cross_gain(3) * ch.cross_gain(3);
        const bool table = a2 >= 1.0 + ch.power(1) + b2 * ch.power(3) - kBoundaryTol && b2 <= 1.0 + kBoundaryTol;
        CHECK(check_t7(ch, {2}).holds == table);
    }
}

TEST_CASE("empty decoded set reduces to the noisy-interference certificate") {
    SeededRng rng(36);
    for (int trial = 0; trial < 100; ++trial) {
        StandardChannel ch = random_channel(rng, rng.uniform_int(2, 6));
        Certificate t1 = check_t1(ch);
        Certificate t7 = check_t7(ch, {});
        CHECK(t7.theorem_id == TheoremId::T7);
        CHECK(t7.holds == t1.holds);
        CHECK(t7.witness == t1.witness);
        REQUIRE(t7.conditions.size() == t1.conditions.size());
        CHECK(t7.conditions[0].description == t1.conditions[0].description);
        CHECK(t7.conditions[0].lhs == t1.conditions[0].lhs);
        CHECK(t7.conditions[0].rhs == t1.conditions[0].rhs);
        CHECK(t7.conditions[0].margin == t1.conditions[0].margin);
    }
}

TEST_CASE("treating-interference-as-noise gap region for the IC") {
    // K=3 instantiation: holds iff some ordering satisfies
    // h^2 P <= (1+P)(1 + other h^2 P) with the last gain at most 1.
    SeededRng rng(37);
    for (int trial = 0; trial < 300; ++trial) {
        StandardChannel ch = k3(rng.uniform(0.0, 3.0), rng.uniform(0.0, 3.0), rng.log_uniform(0.1, 10.0),
                                rng.log_uniform(0.1, 10.0), rng.log_uniform(0.1, 10.0));
        const double a2 = ch.cross_gain(2) * ch.cross_gain(2);
        const double b2 = ch.cross_gain(3) * ch.cross_gain(3);
        const double p2 = ch.power(2), p3 = ch.power(3);
        const bool order23 = a2 * p2 <= (1.0 + p2) * (1.0 + b2 * p3) + kBoundaryTol && b2 <= 1.0 + kBoundaryTol;
        const bool order32 = b2 * p3 <= (1.0 + p3) * (1.0 + a2 * p2) + kBoundaryTol && a2 <= 1.0 + kBoundaryTol;
        CHECK(check_t8(ch).cert.holds == (order23 || order32));
    }

    // P2 = P3 = 2, b = 1: the identity ordering caps a^2 at (1+2)(1+1/2) = 4.5.
    CHECK(check_t8(k3(2.1, 1.0, 1.0, 2.0, 2.0)).cert.holds);   // 4.41 <= 4.5
    CHECK_FALSE(check_t8(k3(2.13, 1.0, 1.0, 2.0, 2.0)).cert.holds);  // 4.5369 > 4.5, and a^2 > 1

    T8Result quiet = check_t8(k3(0.0, 0.0));
    CHECK(quiet.cert.holds);
    CHECK(quiet.gap.gap_bits == 0.0);
}

TEST_CASE("the TIN gap region strictly contains the XC-as-IC square") {
    SeededRng rng(38);
    for (int trial = 0; trial < 300; ++trial) {
        const int K = rng.uniform_int(2, 5);
        std::vector<double> h, P;
        for (int j = 2; j <= K; ++j) h.push_back(rng.uniform(0.0, 1.0));
        for (int i = 1; i <= K; ++i) P.push_back(rng.log_uniform(0.1, 50.0));
        StandardChannel ch = StandardChannel::unit_noise(std::move(h), std::move(P));
        REQUIRE(check_t5(ch).holds);
        CHECK(check_t8(ch).cert.holds);
    }
    // A point outside the square but inside the TIN gap region.
    const double p = db_to_linear(3.0);
    StandardChannel outside = k3(1.4, 0.5, p, p, p);
    CHECK_FALSE(check_t5(outside).holds);
    CHECK(check_t8(outside).cert.holds);
}

TEST_CASE("T8 gap matches the permuted T6 sum on its witness") {
    SeededRng rng(39);
    for (int trial = 0; trial < 200; ++trial) {
        StandardChannel ch = random_channel(rng, rng.uniform_int(3, 5));
        T8Result r = check_t8(ch);
        if (!r.cert.holds) continue;
        const std::vector<int>& perm = r.cert.witness;
        double gap = 0.0;
        for (size_t i = 0; i + 1 < perm.size(); ++i) {
            double tail = 1.0;
            for (size_t l = i + 1; l < perm.size(); ++l)
                tail += ch.cross_gain(perm[l]) * ch.cross_gain(perm[l]) * ch.power(perm[l]);
            const double hi = ch.cross_gain(perm[i]);
            const double pi = ch.power(perm[i]);
            gap += 0.5 * std::log2(1.0 + hi * hi * pi / (tail * (1.0 + pi)));
        }
        CHECK(*r.cert.gap_bits == doctest::Approx(gap).epsilon(1e-12));
        CHECK(*r.cert.gap_bits <= 0.5 * ch.K - 1.0 + 1e-12);
    }
}

TEST_CASE("noisy-interference and MAC regions are disjoint") {
    SeededRng rng(40);
    for (int trial = 0; trial < 10000; ++trial) {
        StandardChannel ch = k3(rng.uniform(0.0, 3.0), rng.uniform(0.0, 3.0), rng.log_uniform(0.1, 10.0),
                                rng.log_uniform(0.1, 10.0), rng.log_uniform(0.1, 10.0));
        const bool t1 = check_t1(ch).holds;
        const bool t2 = check_t2_t4(ch, 2).holds || check_t2_t4(ch, 3).holds;
        CHECK_FALSE((t1 && t2));
    }
}

TEST_CASE("recommendation picks the best strategy with the strongest certificate") {
    Recommendation low = recommend(k3(0.5, 0.5), ChannelMode::XC);
    CHECK(low.best.strategy.label() == "M1");
    REQUIRE(low.certificate.has_value());
    CHECK(low.certificate->theorem_id == TheoremId::T1);
    CHECK(low.certificate->holds);

    Recommendation mac = recommend(k3(2.0, 0.6), ChannelMode::XC);
    CHECK(mac.best.strategy.label() == "M2:2");
    REQUIRE(mac.certificate.has_value());
    CHECK(mac.certificate->theorem_id == TheoremId::T2);

    Recommendation quiet_xc = recommend(k3(0.0, 0.0), ChannelMode::XC);
    CHECK(quiet_xc.best.sum_rate_bits == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(quiet_xc.best.strategy.label() == "M1");
    CHECK(quiet_xc.certificate->theorem_id == TheoremId::T1);
    Recommendation quiet_ic = recommend(k3(0.0, 0.0), ChannelMode::IC);
    CHECK(quiet_ic.best.sum_rate_bits == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(quiet_ic.best.strategy.label() == "MI1");
    CHECK(quiet_ic.certificate->theorem_id == TheoremId::T7);
    CHECK(quiet_ic.certificate->holds);

    Recommendation sic = recommend(k3(3.0, 2.0), ChannelMode::IC);
    CHECK(sic.best.strategy.label() == "MI:2,3@2,3");
    CHECK(sic.best.sum_rate_bits == doctest::Approx(1.5).epsilon(1e-12));
    REQUIRE(sic.certificate.has_value());
    CHECK(sic.certificate->theorem_id == TheoremId::T7);

    // Deep full-MAC region: no exact certificate, the tightest gap certificate wins.
    Recommendation deep = recommend(k3(8.0, 1.5), ChannelMode::XC);
    REQUIRE(deep.certificate.has_value());
    CHECK(deep.certificate->theorem_id == TheoremId::T3);
    CHECK(deep.certificate->gap_bits.has_value());
    REQUIRE(deep.gap.has_value());
    CHECK(deep.gap->rho2.has_value());
    // Smallest feasible rho^2 = (1+b^2P3)^2/a^2 = 10.5625/64.
    CHECK(*deep.gap->rho2 == doctest::Approx(10.5625 / 64.0).epsilon(1e-12));

    StandardChannel big = StandardChannel::unit_noise(std::vector<double>(12, 0.1), std::vector<double>(13, 1.0));
    CHECK_THROWS_AS(recommend(big, ChannelMode::XC), std::invalid_argument);
}

TEST_CASE("zero-power transmitters are excluded from MAC enumeration") {
    StandardChannel ch = k3(5.0, 0.5, 1.0, 0.0, 1.0);  // transmitter 2 is silent
    Recommendation rec = recommend(ch, ChannelMode::XC);
    const auto& mac = rec.best.strategy.mac_set;
    CHECK(std::find(mac.begin(), mac.end(), 2) == mac.end());

    StrategySpec bad;
    bad.mode = ChannelMode::XC;
    bad.mac_set = {1, 2};
    CHECK_FALSE(validate_strategy(ch, bad).ok());
}

TEST_CASE("certificate JSON carries the spec field names") {
    Certificate c = check_t2_t4(k3(2.0, 0.6), 2);
    Json j = to_json(c);
    CHECK(j["theorem_id"] == "T2");
    CHECK(j["holds"] == true);
    CHECK(j["conditions"].is_array());
    CHECK(j["conditions"][0].contains("description"));
    CHECK(j["conditions"][0].contains("lhs"));
    CHECK(j["conditions"][0].contains("rhs"));
    CHECK(j["conditions"][0].contains("margin"));
    CHECK(j["witness"] == Json::array({2}));
    CHECK_FALSE(j.contains("gap_bits"));

    T3Gap g = t3_gap(k3(8.0, 1.5), 0.5);
    Json jg = to_json(g.primary.gap);
    CHECK(jg.contains("achievable_bits"));
    CHECK(jg.contains("outer_bound_bits"));
    CHECK(jg.contains("gap_bits"));
    CHECK(jg.contains("rho2"));
    Json jc = to_json(g.primary.cert);
    CHECK(jc.contains("gap_bits"));
    CHECK(jc["variant"] == 2);
}
