// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "m21/scan.hpp"

using namespace m21;

namespace {

ScanSpec basic_spec(double lo, double hi, double step, std::vector<std::string> labels,
                    std::vector<double> P = {1.0, 1.0, 1.0}) {
    ScanSpec spec;
    spec.base = StandardChannel::unit_noise({0.0, 0.0}, std::move(P));
    spec.axis_x = {"h2", lo, hi, step};
    spec.axis_y = {"h3", lo, hi, step};
    for (const auto& l : labels) spec.labels.push_back(LabelSpec::parse(l));
    return spec;
}

int cell_index_near(const std::vector<double>& centers, double v) {
    int best = 0;
    for (size_t i = 0; i < centers.size(); ++i)
        if (std::abs(centers[i] - v) < std::abs(centers[static_cast<size_t>(best)] - v)) best = static_cast<int>(i);
    return best;
}

bool has_label(const RegionMap& map, int ix, int iy, const std::string& id) {
    const auto& labels = map.cell_labels[map.at(ix, iy)];
    return std::find(labels.begin(), labels.end(), id) != labels.end();
}

}  // namespace

TEST_CASE("label parsing") {
    CHECK(LabelSpec::parse("T1").theorem == TheoremId::T1);
    CHECK(LabelSpec::parse("best").best);
    LabelSpec t3 = LabelSpec::parse("T3@rho2=0.59");
    CHECK(t3.theorem == TheoremId::T3);
    CHECK(*t3.rho2 == doctest::Approx(0.59));
    CHECK(t3.id == "T3@rho2=0.59");
    CHECK_THROWS_AS(LabelSpec::parse("T9"), std::invalid_argument);
    CHECK_THROWS_AS(LabelSpec::parse("T3"), std::invalid_argument);
    CHECK_THROWS_AS(LabelSpec::parse("T3@rho2=1.5"), std::invalid_argument);
    CHECK_THROWS_AS(LabelSpec::parse("T1@rho2=0.5"), std::invalid_argument);
}

TEST_CASE("degenerate single-cell scan at the origin") {
    ScanSpec spec = basic_spec(-0.005, 0.005, 0.01, {"T1", "best"});
    RegionMap map = scan(spec);
    REQUIRE(map.nx == 1);
    REQUIRE(map.ny == 1);
    CHECK(map.xs[0] == doctest::Approx(0.0));
    CHECK(has_label(map, 0, 0, "T1"));
    CHECK(map.best_strategy[0] == "M1");
    CHECK(map.best_rate[0] == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("scan spec validation") {
    ScanSpec spec = basic_spec(0.0, 3.0, 0.01, {"T1"});
    spec.axis_y.selector = "h2";
    CHECK_THROWS_AS(scan(spec), std::invalid_argument);
    spec = basic_spec(0.0, 3.0, 0.01, {"T1"});
    spec.axis_x.selector = "h9";
    CHECK_THROWS_AS(scan(spec), std::invalid_argument);
    spec = basic_spec(0.0, 3.0, -0.01, {"T1"});
    CHECK_THROWS_AS(scan(spec), std::invalid_argument);
    spec = basic_spec(0.0, 4000.0, 0.001, {"T1"});
    CHECK_THROWS_AS(scan(spec), std::invalid_argument);  // over the cell cap
}

TEST_CASE("region labels land where the point predicates say") {
    ScanSpec spec = basic_spec(0.0, 2.0, 0.05, {"T1", "T2", "T5"});
    RegionMap map = scan(spec);
    const int i_half = cell_index_near(map.xs, 0.5);
    CHECK(has_label(map, i_half, i_half, "T1"));
    CHECK(has_label(map, i_half, i_half, "T5"));
    CHECK_FALSE(has_label(map, i_half, i_half, "T2"));

    const int ix = cell_index_near(map.xs, 1.8);
    const int iy = cell_index_near(map.ys, 0.6);
    CHECK(has_label(map, ix, iy, "T2"));
    CHECK_FALSE(has_label(map, ix, iy, "T1"));

    // Spot check: every labeled cell re-evaluates to a holding certificate.
    int checked = 0;
    for (int cy = 0; cy < map.ny && checked < 50; cy += 7) {
        for (int cx = 0; cx < map.nx && checked < 50; cx += 7) {
            StandardChannel ch = spec.base;
            ch.h[0] = map.xs[static_cast<size_t>(cx)];
            ch.h[1] = map.ys[static_cast<size_t>(cy)];
            if (has_label(map, cx, cy, "T1")) CHECK(check_t1(ch).holds);
            if (has_label(map, cx, cy, "T2"))
                CHECK((check_t2_t4(ch, 2).holds || check_t2_t4(ch, 3).holds));
            if (has_label(map, cx, cy, "T5")) CHECK(check_t5(ch).holds);
            ++checked;
        }
    }
}

TEST_CASE("scan output is deterministic and follows the CSV schema") {
    ScanSpec spec = basic_spec(0.0, 1.0, 0.25, {"T1", "T5", "best"});
    RegionMap a = scan(spec);
    RegionMap b = scan(spec);
    const std::string csv_a = region_map_csv(a);
    CHECK(csv_a == region_map_csv(b));
    CHECK(csv_a.rfind("x,y,labels,best_strategy,best_sum_rate_bits\n", 0) == 0);
    CHECK(csv_a.find("0.125,0.125,T1;T5,M1,") != std::string::npos);
    CHECK(csv_a.find("\r") == std::string::npos);  // LF endings only

    // Without "best" the trailing columns stay empty.
    ScanSpec no_best = basic_spec(0.0, 1.0, 0.5, {"T1"});
    const std::string csv = region_map_csv(scan(no_best));
    CHECK(csv.find("0.25,0.25,T1,,\n") != std::string::npos);
}

TEST_CASE("rho-delta curve hits the tabulated points") {
    auto curve = rho_delta_curve(1.5, 1.0, 0.0, 1.0, 0.5);
    REQUIRE(curve.size() == 3);
    CHECK(curve[0].delta_bits == 0.0);
    CHECK(curve[0].rho2 == 0.0);
    CHECK(curve[1].rho2 == doctest::Approx(13.0 / 22.0).epsilon(1e-12));
    CHECK(curve[2].rho2 == doctest::Approx(0.8125).epsilon(1e-12));
    for (size_t i = 1; i < curve.size(); ++i) CHECK(curve[i].rho2 > curve[i - 1].rho2);

    auto richer = rho_delta_curve(1.5, 10.0, 0.0, 1.0, 0.5);
    CHECK(richer[1].rho2 < curve[1].rho2);  // larger P3 meets the same gap with smaller rho^2
    CHECK(richer[1].rho2 == doctest::Approx(0.51086956521739135).epsilon(1e-12));

    CHECK(curve_csv(curve) == "delta_bits,rho2\n0,0\n0.5,0.590909091\n1,0.8125\n");
    CHECK_THROWS_AS(rho_delta_curve(1.5, 1.0, 1.0, 0.0, 0.5), std::invalid_argument);
}

TEST_CASE("traced noisy-interference boundary is the unit circle") {
    ScanSpec spec = basic_spec(0.0, 1.5, 0.01, {"T1"});
    RegionMap map = scan(spec);
    auto lines = boundary_trace(map, "T1");
    REQUIRE_FALSE(lines.empty());
    size_t vertices = 0;
    for (const auto& line : lines)
        for (const auto& v : line) {
            const double r = std::hypot(v[0], v[1]);
            CHECK(std::abs(r - 1.0) <= 0.01);
            ++vertices;
        }
    CHECK(vertices > 50);
    CHECK_THROWS_AS(boundary_trace(map, "T2"), std::invalid_argument);
}

TEST_CASE("traced XC-as-IC boundary follows the unit square edges") {
    ScanSpec spec = basic_spec(0.0, 2.0, 0.02, {"T5"});
    RegionMap map = scan(spec);
    auto lines = boundary_trace(map, "T5");
    REQUIRE_FALSE(lines.empty());
    for (const auto& line : lines)
        for (const auto& v : line) {
            const double d_right = std::abs(v[0] - 1.0);
            const double d_top = std::abs(v[1] - 1.0);
            const double dist = std::min(v[1] <= 1.0 + 0.04 ? d_right : 1e9, v[0] <= 1.0 + 0.04 ? d_top : 1e9);
            CHECK(dist <= 0.02);
        }
}

TEST_CASE("empty regions trace to an empty polyline list") {
    ScanSpec spec = basic_spec(0.0, 0.5, 0.05, {"T2"});
    RegionMap map = scan(spec);
    for (int iy = 0; iy < map.ny; ++iy)
        for (int ix = 0; ix < map.nx; ++ix) CHECK(map.cell_labels[map.at(ix, iy)].empty());
    CHECK(boundary_trace(map, "T2").empty());
}

TEST_CASE("full-MAC gap regions nest as the gap budget grows") {
    std::vector<std::string> ids;
    ScanSpec spec = basic_spec(0.0, 3.0, 0.05, {});
    for (double delta : {0.1, 0.2, 0.4}) {
        const double rho2 = rho_for_gap(delta, 1.5, 1.0);
        LabelSpec l = LabelSpec::parse("T3@rho2=" + std::to_string(rho2));
        spec.labels.push_back(l);
        ids.push_back(l.id);
    }
    RegionMap map = scan(spec);
    for (int iy = 0; iy < map.ny; ++iy)
        for (int ix = 0; ix < map.nx; ++ix) {
            // region(delta small) contained in region(delta large)
            if (has_label(map, ix, iy, ids[0])) CHECK(has_label(map, ix, iy, ids[1]));
            if (has_label(map, ix, iy, ids[1])) CHECK(has_label(map, ix, iy, ids[2]));
        }
}

TEST_CASE("the TIN gap region strictly contains the unit square in a 3 dB scan") {
    const double p = db_to_linear(3.0);
    ScanSpec spec = basic_spec(0.0, 2.0, 0.05, {"T5", "T8"}, {p, p, p});
    spec.mode = ChannelMode::IC;
    RegionMap map = scan(spec);
    bool extra = false;
    for (int iy = 0; iy < map.ny; ++iy)
        for (int ix = 0; ix < map.nx; ++ix) {
            const bool t5 = has_label(map, ix, iy, "T5");
            const bool t8 = has_label(map, ix, iy, "T8");
            if (t5) CHECK(t8);
            if (t8 && !t5) extra = true;
        }
    CHECK(extra);
}
