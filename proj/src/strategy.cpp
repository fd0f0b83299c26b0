// SPDX-License-Identifier: Apache-2.0

#include "m21/strategy.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace m21 {

std::string to_string(ChannelMode mode) { return mode == ChannelMode::XC ? "XC" : "IC"; }

ChannelMode mode_from_string(const std::string& s) {
    if (s == "XC" || s == "xc") return ChannelMode::XC;
    if (s == "IC" || s == "ic") return ChannelMode::IC;
    throw std::invalid_argument("unknown mode \"" + s + "\" (expected XC or IC)");
}

namespace {

std::string join(const std::vector<int>& v) {
    std::ostringstream os;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        os << v[i];
    }
    return os.str();
}

std::vector<int> parse_index_list(const std::string& text, const std::string& what) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            size_t pos = 0;
            int v = std::stoi(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument("");
            out.push_back(v);
        } catch (const std::exception&) {
            throw std::invalid_argument("strategy: bad index \"" + tok + "\" in " + what);
        }
    }
    return out;
}

}  // namespace

std::string StrategySpec::label() const {
    if (mode == ChannelMode::XC) {
        if (mac_set.size() == 1) return "M1";
        if (mac_set.size() == 2) return "M2:" + std::to_string(mac_set[1]);
        // Full MAC on a 3-transmitter channel is the paper-table shorthand M3.
        if (mac_set.size() == 3 && mac_set[0] == 1 && mac_set[1] == 2 && mac_set[2] == 3) return "M3";
        return "MAC:" + join(mac_set);
    }
    if (mac_set.empty()) return "MI1";
    std::string s = "MI:" + join(mac_set);
    if (!decoding_order.empty()) s += "@" + join(decoding_order);
    return s;
}

StrategySpec StrategySpec::parse(const std::string& text, int K) {
    StrategySpec s;
    if (text == "M1") {
        s.mode = ChannelMode::XC;
        s.mac_set = {1};
        return s;
    }
    if (text.rfind("M2:", 0) == 0) {
        auto idx = parse_index_list(text.substr(3), "M2 partner");
        if (idx.size() != 1) throw std::invalid_argument("strategy: M2 takes exactly one partner index");
        s.mode = ChannelMode::XC;
        s.mac_set = {1, idx[0]};
        return s;
    }
    if (text == "M3") {
        if (K != 3) throw std::invalid_argument("strategy: shorthand M3 is defined for K=3; use MAC:... for K=" + std::to_string(K));
        s.mode = ChannelMode::XC;
        s.mac_set = {1, 2, 3};
        return s;
    }
    if (text.rfind("MAC:", 0) == 0) {
        s.mode = ChannelMode::XC;
        s.mac_set = parse_index_list(text.substr(4), "MAC set");
        std::sort(s.mac_set.begin(), s.mac_set.end());
        return s;
    }
    if (text == "MI1") {
        s.mode = ChannelMode::IC;
        return s;
    }
    if (text.rfind("MI:", 0) == 0) {
        s.mode = ChannelMode::IC;
        std::string body = text.substr(3);
        auto at = body.find('@');
        std::string set_part = body.substr(0, at);
        s.mac_set = parse_index_list(set_part, "MI decoded set");
        std::sort(s.mac_set.begin(), s.mac_set.end());
        if (at != std::string::npos) s.decoding_order = parse_index_list(body.substr(at + 1), "MI order");
        return s;
    }
    throw std::invalid_argument("strategy: unrecognized \"" + text + "\" (expected M1, M2:k, M3, MAC:..., MI1 or MI:set[@order])");
}

ValidationReport validate_strategy(const StandardChannel& ch, const StrategySpec& s) {
    ValidationReport rep;
    std::set<int> seen;
    for (int i : s.mac_set) {
        if (i < 1 || i > ch.K) rep.violations.push_back("index " + std::to_string(i) + " out of range 1.." + std::to_string(ch.K));
        if (!seen.insert(i).second) rep.violations.push_back("duplicate index " + std::to_string(i));
    }
    if (s.mode == ChannelMode::XC) {
        if (seen.find(1) == seen.end()) rep.violations.push_back("XC MAC set must contain transmitter 1");
        if (!s.decoding_order.empty()) rep.violations.push_back("XC strategies use joint MAC decoding; decoding_order must be empty");
        for (int i : s.mac_set)
            if (i >= 2 && i <= ch.K && !(ch.power(i) > 0.0))
                rep.violations.push_back("zero-power transmitter " + std::to_string(i) + " cannot be a MAC member");
    } else {
        if (seen.find(1) != seen.end()) rep.violations.push_back("IC decoded set lists interferers only (indices >= 2)");
        if (!s.decoding_order.empty()) {
            std::vector<int> a = s.decoding_order, b = s.mac_set;
            std::sort(a.begin(), a.end());
            if (a != b) rep.violations.push_back("decoding_order must be a permutation of the decoded set");
        }
    }
    return rep;
}

}  // namespace m21
