// SPDX-License-Identifier: Apache-2.0
//
// 2-D parameter sweeps over channel gains/powers: per-cell certificate
// labels, best-strategy recommendation, region boundary extraction by
// marching squares, and the rho^2 vs gap curve.

#ifndef M21_SCAN_HPP
#define M21_SCAN_HPP

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "m21/certificates.hpp"

namespace m21 {

struct AxisSpec {
    std::string selector;  // "h2".."hK" or "P1".."PK"
    double min = 0.0;
    double max = 0.0;
    double step = 0.0;
};

struct LabelSpec {
    std::string id;              // as requested, e.g. "T1" or "T3@rho2=0.59"
    bool best = false;           // the "best" pseudo-label
    TheoremId theorem = TheoremId::T1;
    std::optional<double> rho2;  // required for T3

    static LabelSpec parse(const std::string& text);  // throws on malformed labels
};

struct ScanSpec {
    StandardChannel base;
    AxisSpec axis_x, axis_y;
    std::vector<LabelSpec> labels;
    ChannelMode mode = ChannelMode::XC;  // used by the "best" label
    double tol = kBoundaryTol;
};

struct RegionMap {
    ScanSpec spec;
    int nx = 0, ny = 0;
    std::vector<double> xs, ys;  // cell centers
    // Row-major (y outer, x inner) per-cell data.
    std::vector<std::vector<std::string>> cell_labels;  // sorted held label ids
    std::vector<std::string> best_strategy;             // empty when "best" not requested
    std::vector<double> best_rate;
    // Per requested certificate label: min-condition margin per cell
    // (maximized over existential choices), used for boundary tracing.
    std::map<std::string, std::vector<double>> margins;

    size_t at(int ix, int iy) const { return static_cast<size_t>(iy) * static_cast<size_t>(nx) + static_cast<size_t>(ix); }
};

/// Evaluates every requested label at each grid cell.  Cells sit at
/// min + (k + 0.5) * step so condition boundaries never land exactly on a
/// sample point.  Throws on invalid selectors or grids above 10^7 cells.
RegionMap scan(const ScanSpec& spec);

/// CSV per the fixed schema: x,y,labels,best_strategy,best_sum_rate_bits with
/// semicolon-joined sorted label ids, 9-significant-digit floats, LF endings.
std::string region_map_csv(const RegionMap& map);

struct CurvePoint {
    double delta_bits = 0.0;
    double rho2 = 0.0;
};

/// Tabulates rho_for_gap over an inclusive delta grid (endpoints included).
std::vector<CurvePoint> rho_delta_curve(double b, double p3, double delta_min, double delta_max,
                                        double delta_step);

std::string curve_csv(const std::vector<CurvePoint>& curve);

using Polyline = std::vector<std::array<double, 2>>;

/// Marching-squares zero-level contour of the label's margin field.
/// Throws when the label was not part of the scan.
std::vector<Polyline> boundary_trace(const RegionMap& map, const std::string& label_id);

/// Convenience form that evaluates the scan first.
std::vector<Polyline> boundary_trace(const ScanSpec& spec, const std::string& label_id);

}  // namespace m21

#endif
