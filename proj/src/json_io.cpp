// SPDX-License-Identifier: Apache-2.0

#include "m21/json_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <stdexcept>

namespace m21 {

double round_sig12(double v) {
    if (!std::isfinite(v)) return v;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

namespace {

void require_keys(const Json& j, const std::set<std::string>& required,
                  const std::set<std::string>& optional) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!required.count(it.key()) && !optional.count(it.key()))
            throw std::invalid_argument("channel: unknown key \"" + it.key() + "\"");
    }
    for (const auto& k : required)
        if (!j.contains(k)) throw std::invalid_argument("channel: missing key \"" + k + "\"");
}

std::vector<double> number_array(const Json& j, const std::string& key, size_t expected) {
    const Json& a = j.at(key);
    if (!a.is_array()) throw std::invalid_argument("channel: \"" + key + "\" must be an array");
    std::vector<double> out;
    for (const auto& v : a) {
        if (!v.is_number()) throw std::invalid_argument("channel: \"" + key + "\" must contain numbers only");
        out.push_back(v.get<double>());
    }
    if (out.size() != expected)
        throw std::invalid_argument("channel: \"" + key + "\" expected " + std::to_string(expected) +
                                    " entries, got " + std::to_string(out.size()));
    return out;
}

}  // namespace

StandardChannel channel_from_json(const Json& j) {
    if (!j.is_object()) throw std::invalid_argument("channel: top-level JSON must be an object");
    if (!j.contains("form")) throw std::invalid_argument("channel: missing key \"form\"");
    const std::string form = j.at("form").is_string() ? j.at("form").get<std::string>() : "";
    if (!j.contains("K") || !j.at("K").is_number_integer())
        throw std::invalid_argument("channel: \"K\" must be an integer");
    const int K = j.at("K").get<int>();
    if (K < 2) throw std::invalid_argument("channel: \"K\" must be >= 2");
    const size_t k = static_cast<size_t>(K);

    if (form == "standard") {
        require_keys(j, {"form", "K", "h", "P"}, {});
        StandardChannel ch = StandardChannel::unit_noise(number_array(j, "h", k - 1), number_array(j, "P", k));
        ValidationReport rep = validate(ch);
        if (!rep.ok()) throw std::invalid_argument("channel: " + rep.joined());
        return ch;
    }
    if (form == "raw") {
        require_keys(j, {"form", "K", "P", "direct_gains", "cross_gains_to_rx1"}, {"noise_vars"});
        RawChannel raw;
        raw.K = K;
        raw.powers = number_array(j, "P", k);
        raw.direct_gains = number_array(j, "direct_gains", k);
        raw.cross_gains_to_rx1 = number_array(j, "cross_gains_to_rx1", k - 1);
        if (j.contains("noise_vars")) raw.noise_vars = number_array(j, "noise_vars", k);
        return to_standard_form(raw);
    }
    throw std::invalid_argument("channel: \"form\" must be \"standard\" or \"raw\"");
}

StandardChannel load_channel_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("channel: cannot open \"" + path + "\"");
    Json j;
    try {
        in >> j;
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument("channel: malformed JSON in \"" + path + "\": " + e.what());
    }
    return channel_from_json(j);
}

Json to_json(const StandardChannel& ch) {
    Json j;
    j["form"] = "standard";
    j["K"] = ch.K;
    Json h = Json::array(), p = Json::array();
    for (double v : ch.h) h.push_back(round_sig12(v));
    for (double v : ch.P) p.push_back(round_sig12(v));
    j["h"] = std::move(h);
    j["P"] = std::move(p);
    return j;
}

Json to_json(const StrategySpec& s) {
    Json j;
    j["mode"] = to_string(s.mode);
    j["label"] = s.label();
    if (s.mode == ChannelMode::XC) {
        j["mac_set"] = s.mac_set;
    } else {
        j["decoded_set"] = s.mac_set;
        j["decoding_order"] = s.decoding_order;
    }
    return j;
}

Json to_json(const RateReport& r) {
    Json j;
    j["strategy"] = to_json(r.strategy);
    j["sum_rate_bits"] = round_sig12(r.sum_rate_bits);
    Json rates = Json::array();
    for (const auto& [rx, bits] : r.per_receiver_rates)
        rates.push_back(Json{{"receiver", rx}, {"rate_bits", round_sig12(bits)}});
    j["per_receiver_rates"] = std::move(rates);
    Json inns = Json::array();
    for (const auto& [rx, inn] : r.inn_terms)
        inns.push_back(Json{{"receiver", rx}, {"inn", round_sig12(inn)}});
    j["inn_terms"] = std::move(inns);
    if (r.strategy.mode == ChannelMode::IC) j["sic_feasible"] = r.sic_feasible;
    return j;
}

Json to_json(const Certificate& c) {
    Json j;
    j["theorem_id"] = to_string(c.theorem_id);
    j["holds"] = c.holds;
    Json conds = Json::array();
    for (const auto& cond : c.conditions)
        conds.push_back(Json{{"description", cond.description},
                             {"lhs", round_sig12(cond.lhs)},
                             {"rhs", round_sig12(cond.rhs)},
                             {"margin", round_sig12(cond.margin)}});
    j["conditions"] = std::move(conds);
    if (!c.witness.empty()) j["witness"] = c.witness;
    if (c.gap_bits) j["gap_bits"] = round_sig12(*c.gap_bits);
    if (c.variant) j["variant"] = *c.variant;
    return j;
}

Json to_json(const GapReport& g) {
    Json j;
    j["achievable_bits"] = round_sig12(g.achievable_bits);
    j["outer_bound_bits"] = round_sig12(g.outer_bound_bits);
    j["gap_bits"] = round_sig12(g.gap_bits);
    if (g.rho2) j["rho2"] = round_sig12(*g.rho2);
    return j;
}

}  // namespace m21
