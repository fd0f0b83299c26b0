// SPDX-License-Identifier: Apache-2.0

#include "m21/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace m21 {

namespace {

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

struct Selector {
    bool is_gain = false;  // otherwise power
    int index = 0;
};

Selector parse_selector(const std::string& s, int K) {
    if (s.size() < 2) throw std::invalid_argument("selector \"" + s + "\" malformed (expected h<j> or P<i>)");
    Selector sel;
    if (s[0] == 'h')
        sel.is_gain = true;
    else if (s[0] == 'P' || s[0] == 'p')
        sel.is_gain = false;
    else
        throw std::invalid_argument("selector \"" + s + "\" malformed (expected h<j> or P<i>)");
    try {
        sel.index = std::stoi(s.substr(1));
    } catch (const std::exception&) {
        throw std::invalid_argument("selector \"" + s + "\" malformed (expected h<j> or P<i>)");
    }
    if (sel.is_gain && (sel.index < 2 || sel.index > K))
        throw std::invalid_argument("selector \"" + s + "\": gain index out of range 2.." + std::to_string(K));
    if (!sel.is_gain && (sel.index < 1 || sel.index > K))
        throw std::invalid_argument("selector \"" + s + "\": power index out of range 1.." + std::to_string(K));
    return sel;
}

void apply_selector(StandardChannel& ch, const Selector& sel, double value) {
    if (sel.is_gain)
        ch.h[static_cast<size_t>(sel.index) - 2] = value;
    else
        ch.P[static_cast<size_t>(sel.index) - 1] = value;
}

int cell_count(const AxisSpec& axis) {
    if (!(std::isfinite(axis.min) && std::isfinite(axis.max) && std::isfinite(axis.step)))
        throw std::invalid_argument("axis range must be finite");
    if (!(axis.step > 0.0)) throw std::invalid_argument("axis step must be positive");
    if (!(axis.min < axis.max)) throw std::invalid_argument("axis range must have min < max");
    const double n = std::floor((axis.max - axis.min) / axis.step + 1e-9);
    if (n < 1.0) throw std::invalid_argument("axis range produces no cells");
    return static_cast<int>(n);
}

struct LabelEval {
    bool holds = false;
    double margin = 0.0;
};

LabelEval eval_certificate_label(const StandardChannel& ch, const LabelSpec& label, double tol) {
    LabelEval ev;
    switch (label.theorem) {
        case TheoremId::T1: {
            Certificate c = check_t1(ch, tol);
            ev = {c.holds, c.min_margin()};
            break;
        }
        case TheoremId::T2:
        case TheoremId::T4: {
            bool holds = false;
            double best = -std::numeric_limits<double>::infinity();
            for (int k = 2; k <= ch.K; ++k) {
                Certificate c = check_t2_t4(ch, k, tol);
                holds = holds || c.holds;
                best = std::max(best, c.min_margin());
            }
            ev = {holds, best};
            break;
        }
        case TheoremId::T3: {
            T3Gap g = t3_gap(ch, *label.rho2, tol);
            ev.holds = g.primary.cert.holds || g.symmetric.cert.holds;
            ev.margin = std::max(g.primary.cert.min_margin(), g.symmetric.cert.min_margin());
            break;
        }
        case TheoremId::T5: {
            Certificate c = check_t5(ch, tol);
            ev = {c.holds, c.min_margin()};
            break;
        }
        case TheoremId::T6: {
            Certificate c = check_t6(ch, tol);
            ev = {c.holds, c.min_margin()};
            break;
        }
        case TheoremId::T7: {
            // Existential over nonempty decoded sets (the empty set is the T1 region).
            bool holds = false;
            double best = -std::numeric_limits<double>::infinity();
            std::vector<int> pool;
            for (int j = 2; j <= ch.K; ++j) pool.push_back(j);
            const size_t n = pool.size();
            for (size_t mask = 1; mask < (size_t{1} << n); ++mask) {
                std::vector<int> dec;
                for (size_t b = 0; b < n; ++b)
                    if (mask & (size_t{1} << b)) dec.push_back(pool[b]);
                Certificate c = check_t7(ch, dec, tol);
                holds = holds || c.holds;
                best = std::max(best, c.min_margin());
            }
            ev = {holds, best};
            break;
        }
        case TheoremId::T8: {
            T8Result r = check_t8(ch, tol);
            ev = {r.cert.holds, r.cert.min_margin()};
            break;
        }
    }
    return ev;
}

}  // namespace

LabelSpec LabelSpec::parse(const std::string& text) {
    LabelSpec spec;
    spec.id = text;
    if (text == "best") {
        spec.best = true;
        return spec;
    }
    std::string head = text;
    std::optional<std::string> arg;
    if (auto at = text.find('@'); at != std::string::npos) {
        head = text.substr(0, at);
        arg = text.substr(at + 1);
    }
    static const std::map<std::string, TheoremId> ids = {
        {"T1", TheoremId::T1}, {"T2", TheoremId::T2}, {"T3", TheoremId::T3}, {"T4", TheoremId::T4},
        {"T5", TheoremId::T5}, {"T6", TheoremId::T6}, {"T7", TheoremId::T7}, {"T8", TheoremId::T8}};
    auto it = ids.find(head);
    if (it == ids.end()) throw std::invalid_argument("label \"" + text + "\" unknown (expected T1..T8 or best)");
    spec.theorem = it->second;
    if (spec.theorem == TheoremId::T3) {
        if (!arg || arg->rfind("rho2=", 0) != 0)
            throw std::invalid_argument("label \"" + text + "\": T3 requires @rho2=<value>");
        try {
            spec.rho2 = std::stod(arg->substr(5));
        } catch (const std::exception&) {
            throw std::invalid_argument("label \"" + text + "\": bad rho2 value");
        }
        if (!(*spec.rho2 > 0.0 && *spec.rho2 < 1.0))
            throw std::invalid_argument("label \"" + text + "\": rho2 must lie in (0,1)");
    } else if (arg) {
        throw std::invalid_argument("label \"" + text + "\": only T3 takes an argument");
    }
    return spec;
}

RegionMap scan(const ScanSpec& spec) {
    require_standard(spec.base);
    const Selector sx = parse_selector(spec.axis_x.selector, spec.base.K);
    const Selector sy = parse_selector(spec.axis_y.selector, spec.base.K);
    if (sx.is_gain == sy.is_gain && sx.index == sy.index)
        throw std::invalid_argument("axis selectors must be distinct");

    RegionMap map;
    map.spec = spec;
    map.nx = cell_count(spec.axis_x);
    map.ny = cell_count(spec.axis_y);
    if (static_cast<double>(map.nx) * static_cast<double>(map.ny) > 1e7)
        throw std::invalid_argument("grid too large: more than 10^7 cells");

    // Cell centers avoid sampling exactly on condition boundaries.
    for (int ix = 0; ix < map.nx; ++ix) map.xs.push_back(spec.axis_x.min + (ix + 0.5) * spec.axis_x.step);
    for (int iy = 0; iy < map.ny; ++iy) map.ys.push_back(spec.axis_y.min + (iy + 0.5) * spec.axis_y.step);

    for (const auto& l : spec.labels)
        if (!l.best)
            map.margins[l.id].assign(static_cast<size_t>(map.nx) * static_cast<size_t>(map.ny), 0.0);

    const size_t ncells = static_cast<size_t>(map.nx) * static_cast<size_t>(map.ny);
    map.cell_labels.resize(ncells);
    map.best_strategy.assign(ncells, "");
    map.best_rate.assign(ncells, 0.0);

    for (int iy = 0; iy < map.ny; ++iy) {
        for (int ix = 0; ix < map.nx; ++ix) {
            StandardChannel ch = spec.base;
            apply_selector(ch, sx, map.xs[static_cast<size_t>(ix)]);
            apply_selector(ch, sy, map.ys[static_cast<size_t>(iy)]);
            const size_t cell = map.at(ix, iy);
            for (const auto& l : spec.labels) {
                if (l.best) {
                    Recommendation rec = recommend(ch, spec.mode, {.tol = spec.tol});
                    map.best_strategy[cell] = rec.best.strategy.label();
                    map.best_rate[cell] = rec.best.sum_rate_bits;
                    continue;
                }
                LabelEval ev = eval_certificate_label(ch, l, spec.tol);
                map.margins[l.id][cell] = ev.margin;
                if (ev.holds) map.cell_labels[cell].push_back(l.id);
            }
            std::sort(map.cell_labels[cell].begin(), map.cell_labels[cell].end());
        }
    }
    return map;
}

std::string region_map_csv(const RegionMap& map) {
    std::ostringstream os;
    os << "x,y,labels,best_strategy,best_sum_rate_bits\n";
    bool want_best = false;
    for (const auto& l : map.spec.labels)
        if (l.best) want_best = true;
    for (int iy = 0; iy < map.ny; ++iy) {
        for (int ix = 0; ix < map.nx; ++ix) {
            const size_t cell = map.at(ix, iy);
            os << fmt9(map.xs[static_cast<size_t>(ix)]) << "," << fmt9(map.ys[static_cast<size_t>(iy)]) << ",";
            const auto& labels = map.cell_labels[cell];
            for (size_t i = 0; i < labels.size(); ++i) {
                if (i) os << ";";
                os << labels[i];
            }
            os << ",";
            if (want_best) os << map.best_strategy[cell];
            os << ",";
            if (want_best) os << fmt9(map.best_rate[cell]);
            os << "\n";
        }
    }
    return os.str();
}

std::vector<CurvePoint> rho_delta_curve(double b, double p3, double delta_min, double delta_max,
                                        double delta_step) {
    if (!(delta_step > 0.0) || !(delta_min <= delta_max) || delta_min < 0.0)
        throw std::invalid_argument("invalid delta range");
    if ((delta_max - delta_min) / delta_step > 1e7) throw std::invalid_argument("delta range produces too many rows");
    std::vector<CurvePoint> out;
    for (int k = 0;; ++k) {
        const double d = delta_min + k * delta_step;
        if (d > delta_max + delta_step * 1e-9) break;
        out.push_back({d, rho_for_gap(d, b, p3)});
    }
    return out;
}

std::string curve_csv(const std::vector<CurvePoint>& curve) {
    std::ostringstream os;
    os << "delta_bits,rho2\n";
    for (const auto& p : curve) os << fmt9(p.delta_bits) << "," << fmt9(p.rho2) << "\n";
    return os.str();
}

namespace {

// Edge identifiers for marching squares on the cell-center grid.
// dir 0: horizontal edge from (i,j) to (i+1,j); dir 1: vertical from (i,j) to (i,j+1).
std::int64_t edge_key(int i, int j, int dir, int nx) {
    return (static_cast<std::int64_t>(dir) << 40) | (static_cast<std::int64_t>(j) * nx + i);
}

}  // namespace

std::vector<Polyline> boundary_trace(const ScanSpec& spec, const std::string& label_id) {
    return boundary_trace(scan(spec), label_id);
}

std::vector<Polyline> boundary_trace(const RegionMap& map, const std::string& label_id) {
    auto it = map.margins.find(label_id);
    if (it == map.margins.end()) throw std::invalid_argument("label \"" + label_id + "\" absent from scan");
    const std::vector<double>& m = it->second;
    const int nx = map.nx, ny = map.ny;

    auto value = [&](int i, int j) { return m[map.at(i, j)]; };
    auto inside = [&](int i, int j) { return value(i, j) >= 0.0; };
    auto vertex_on_edge = [&](int i, int j, int dir) -> std::array<double, 2> {
        const double v0 = value(i, j);
        const double v1 = dir == 0 ? value(i + 1, j) : value(i, j + 1);
        double t = v0 / (v0 - v1);
        if (!std::isfinite(t)) t = 0.5;
        t = std::clamp(t, 0.0, 1.0);
        if (dir == 0) return {map.xs[static_cast<size_t>(i)] + t * (map.xs[static_cast<size_t>(i) + 1] - map.xs[static_cast<size_t>(i)]), map.ys[static_cast<size_t>(j)]};
        return {map.xs[static_cast<size_t>(i)], map.ys[static_cast<size_t>(j)] + t * (map.ys[static_cast<size_t>(j) + 1] - map.ys[static_cast<size_t>(j)])};
    };

    struct Segment {
        std::int64_t e0, e1;
    };
    std::vector<Segment> segments;
    std::map<std::int64_t, std::array<double, 2>> vertices;

    for (int j = 0; j + 1 < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            const bool b00 = inside(i, j), b10 = inside(i + 1, j);
            const bool b11 = inside(i + 1, j + 1), b01 = inside(i, j + 1);
            const int code = (b00 ? 1 : 0) | (b10 ? 2 : 0) | (b11 ? 4 : 0) | (b01 ? 8 : 0);
            if (code == 0 || code == 15) continue;

            const std::int64_t eb = edge_key(i, j, 0, nx);          // bottom
            const std::int64_t er = edge_key(i + 1, j, 1, nx);      // right
            const std::int64_t et = edge_key(i, j + 1, 0, nx);      // top
            const std::int64_t el = edge_key(i, j, 1, nx);          // left
            auto add_vertex = [&](std::int64_t key, int vi, int vj, int dir) {
                if (!vertices.count(key)) vertices[key] = vertex_on_edge(vi, vj, dir);
            };
            auto emit = [&](std::int64_t a, int ai, int aj, int adir, std::int64_t b, int bi, int bj, int bdir) {
                add_vertex(a, ai, aj, adir);
                add_vertex(b, bi, bj, bdir);
                segments.push_back({a, b});
            };
            auto B = [&](std::int64_t other, int oi, int oj, int od) { emit(eb, i, j, 0, other, oi, oj, od); };

            switch (code) {
                case 1: case 14: emit(el, i, j, 1, eb, i, j, 0); break;
                case 2: case 13: B(er, i + 1, j, 1); break;
                case 4: case 11: emit(er, i + 1, j, 1, et, i, j + 1, 0); break;
                case 8: case 7: emit(el, i, j, 1, et, i, j + 1, 0); break;
                case 3: case 12: emit(el, i, j, 1, er, i + 1, j, 1); break;
                case 6: case 9: emit(eb, i, j, 0, et, i, j + 1, 0); break;
                case 5: case 10: {
                    const double center = 0.25 * (value(i, j) + value(i + 1, j) + value(i, j + 1) + value(i + 1, j + 1));
                    const bool center_inside = center >= 0.0;
                    const bool diag_case5 = (code == 5);
                    // code 5: corners 00 and 11 inside; code 10: corners 10 and 01 inside.
                    if (diag_case5 == center_inside) {
                        emit(el, i, j, 1, et, i, j + 1, 0);
                        B(er, i + 1, j, 1);
                    } else {
                        emit(el, i, j, 1, eb, i, j, 0);
                        emit(er, i + 1, j, 1, et, i, j + 1, 0);
                    }
                    break;
                }
                default: break;
            }
        }
    }

    // Stitch segments sharing edge endpoints into ordered polylines.
    std::map<std::int64_t, std::vector<size_t>> by_edge;
    for (size_t s = 0; s < segments.size(); ++s) {
        by_edge[segments[s].e0].push_back(s);
        by_edge[segments[s].e1].push_back(s);
    }
    std::vector<bool> used(segments.size(), false);
    std::vector<Polyline> out;
    for (size_t s0 = 0; s0 < segments.size(); ++s0) {
        if (used[s0]) continue;
        // Walk backwards to find a chain start (an endpoint with no unused continuation).
        std::vector<std::int64_t> chain = {segments[s0].e0, segments[s0].e1};
        used[s0] = true;
        auto extend = [&](bool front) {
            for (;;) {
                const std::int64_t tip = front ? chain.front() : chain.back();
                size_t next = SIZE_MAX;
                for (size_t cand : by_edge[tip])
                    if (!used[cand]) {
                        next = cand;
                        break;
                    }
                if (next == SIZE_MAX) break;
                used[next] = true;
                const std::int64_t other = segments[next].e0 == tip ? segments[next].e1 : segments[next].e0;
                if (front)
                    chain.insert(chain.begin(), other);
                else
                    chain.push_back(other);
            }
        };
        extend(false);
        extend(true);
        Polyline line;
        for (std::int64_t e : chain) line.push_back(vertices.at(e));
        out.push_back(std::move(line));
    }
    return out;
}

}  // namespace m21
