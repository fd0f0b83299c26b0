// SPDX-License-Identifier: Apache-2.0
//
// JSON ingestion of channel files (strict schema, unknown keys rejected) and
// serialization of rate reports, certificates and gap reports.  Floats are
// rounded to 12 significant digits before emission so outputs are stable
// regression fixtures.

#ifndef M21_JSON_IO_HPP
#define M21_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "m21/certificates.hpp"
#include "m21/channel.hpp"
#include "m21/rates.hpp"

namespace m21 {

using Json = nlohmann::ordered_json;

/// Round-trips v through a %.12g representation.
double round_sig12(double v);

/// Parses `{"form":"standard","K":..,"h":[..],"P":[..]}` or the raw variant
/// with direct_gains/cross_gains_to_rx1/noise_vars.  Raw channels are
/// converted to standard form.  Throws std::invalid_argument naming the
/// offending field on any schema violation.
StandardChannel channel_from_json(const Json& j);
StandardChannel load_channel_file(const std::string& path);

Json to_json(const StandardChannel& ch);
Json to_json(const StrategySpec& s);
Json to_json(const RateReport& r);
Json to_json(const Certificate& c);
Json to_json(const GapReport& g);

}  // namespace m21

#endif
