// SPDX-License-Identifier: Apache-2.0
//
// Transmission strategy descriptions.  XC strategies pick the MAC subset
// jointly decoded at receiver 1; IC strategies pick the interferer set
// decoded-and-cancelled plus its decoding order.

#ifndef M21_STRATEGY_HPP
#define M21_STRATEGY_HPP

#include <string>
#include <vector>

#include "m21/channel.hpp"

namespace m21 {

enum class ChannelMode { XC, IC };

std::string to_string(ChannelMode mode);
ChannelMode mode_from_string(const std::string& s);  // throws on unknown

struct StrategySpec {
    ChannelMode mode = ChannelMode::XC;
    // XC: transmitters decoded at receiver 1, always contains 1, sorted.
    // IC: decoded interferers (indices >= 2), possibly empty, sorted.
    std::vector<int> mac_set;
    // IC only: permutation of mac_set giving the SIC order at receiver 1.
    std::vector<int> decoding_order;

    /// Canonical CLI label: M1, M2:3, M3, MAC:1,2, MI1, MI:2,3@3,2.
    std::string label() const;

    /// Parses the CLI strategy syntax.  Shorthands: M1, M2:k, M3 (K=3 only).
    /// MI with no "@order" leaves decoding_order empty (callers may search).
    static StrategySpec parse(const std::string& text, int K);
};

/// Structural checks plus the zero-power rule: MAC members other than 1 must
/// have positive power (they carry a cross message).
ValidationReport validate_strategy(const StandardChannel& ch, const StrategySpec& s);

}  // namespace m21

#endif
