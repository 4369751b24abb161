// Copyright 2026 The specsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <charconv>
#include <cmath>
#include <limits>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "engine.hpp"
#include "metrics.hpp"

namespace specsim {

inline std::string format_double(double v) {
    if (std::isinf(v)) return "inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

inline const char* to_string(LockMode m) { return m == LockMode::kReadWrite ? "rw" : "mutex"; }
inline const char* to_string(CostProxy p) { return p == CostProxy::kGas ? "gas" : "instr"; }
inline const char* to_string(ClockMode c) { return c == ClockMode::kInstructions ? "instr" : "proxy"; }

inline LockMode parse_lock_mode(const std::string& s) {
    if (s == "rw") return LockMode::kReadWrite;
    if (s == "mutex") return LockMode::kMutex;
    throw std::invalid_argument("unknown lock mode '" + s + "' (expected rw|mutex)");
}

inline CostProxy parse_proxy(const std::string& s) {
    if (s == "gas") return CostProxy::kGas;
    if (s == "instr" || s == "instructions") return CostProxy::kInstructions;
    throw std::invalid_argument("unknown proxy '" + s + "' (expected gas|instr)");
}

inline ClockMode parse_clock(const std::string& s) {
    if (s == "instr" || s == "instructions") return ClockMode::kInstructions;
    if (s == "proxy") return ClockMode::kProxy;
    throw std::invalid_argument("unknown clock '" + s + "' (expected instr|proxy)");
}

inline nlohmann::json config_to_json(const SimConfig& c) {
    nlohmann::json j;
    j["threads"] = c.threads;
    j["locks"] = to_string(c.lock_mode);
    j["phases"] = c.phases;
    j["proxy"] = to_string(c.proxy);
    j["clock"] = to_string(c.clock);
    j["predictor"] = c.predictor;
    j["include_transfers"] = c.include_transfers;
    auto excl = nlohmann::json::array();
    for (const auto& a : c.excluded_contracts) excl.push_back(a.hex());
    j["excluded_contracts"] = std::move(excl);
    return j;
}

inline SimConfig config_from_json(const nlohmann::json& j) {
    SimConfig c;
    c.threads = j.at("threads").get<std::uint32_t>();
    c.lock_mode = parse_lock_mode(j.at("locks").get<std::string>());
    c.phases = j.at("phases").get<std::uint32_t>();
    c.proxy = parse_proxy(j.at("proxy").get<std::string>());
    c.clock = parse_clock(j.at("clock").get<std::string>());
    c.predictor = j.at("predictor").get<bool>();
    c.include_transfers = j.at("include_transfers").get<bool>();
    for (const auto& a : j.at("excluded_contracts")) {
        auto addr = Address::from_hex(a.get<std::string>());
        if (!addr) throw std::invalid_argument("bad excluded contract address");
        c.excluded_contracts.insert(*addr);
    }
    return c;
}

// nlohmann::json objects keep keys sorted, which gives the canonical order.
inline nlohmann::json report_to_json(const AggregateReport& r) {
    nlohmann::json j;
    j["blocks"] = r.blocks;
    j["active_blocks"] = r.active_blocks;
    j["total_calls"] = r.total_calls;
    j["total_aborts"] = r.total_aborts;
    j["weighted_speedup"] = r.weighted_speedup;
    j["weighted_conflict_rate"] = r.weighted_conflict_rate;
    j["slowdown_fraction"] = r.slowdown_fraction;
    j["bin_width"] = r.bin_width;
    j["cap"] = r.cap;
    auto bins = nlohmann::json::array();
    for (const auto& b : r.speedup_histogram) {
        nlohmann::json e;
        e["low"] = b.low;
        e["high"] = std::isinf(b.high) ? nlohmann::json(nullptr) : nlohmann::json(b.high);
        e["count"] = b.count;
        e["density"] = b.density;
        bins.push_back(std::move(e));
    }
    j["speedup_histogram"] = std::move(bins);
    auto hot = nlohmann::json::array();
    for (const auto& [conflicts, cells] : r.hotspot_histogram) {
        hot.push_back({{"conflicts", conflicts}, {"cells", cells}});
    }
    j["hotspot_histogram"] = std::move(hot);
    auto top = nlohmann::json::array();
    for (const auto& c : r.top_contracts) top.push_back({{"contract", c.contract.hex()}, {"conflicts", c.conflicts}});
    j["top_contracts"] = std::move(top);
    return j;
}

inline AggregateReport report_from_json(const nlohmann::json& j) {
    AggregateReport r;
    r.blocks = j.at("blocks").get<std::uint64_t>();
    r.active_blocks = j.at("active_blocks").get<std::uint64_t>();
    r.total_calls = j.at("total_calls").get<std::uint64_t>();
    r.total_aborts = j.at("total_aborts").get<std::uint64_t>();
    r.weighted_speedup = j.at("weighted_speedup").get<double>();
    r.weighted_conflict_rate = j.at("weighted_conflict_rate").get<double>();
    r.slowdown_fraction = j.at("slowdown_fraction").get<double>();
    r.bin_width = j.at("bin_width").get<double>();
    r.cap = j.at("cap").get<double>();
    for (const auto& e : j.at("speedup_histogram")) {
        HistogramBin b;
        b.low = e.at("low").get<double>();
        b.high = e.at("high").is_null() ? std::numeric_limits<double>::infinity() : e.at("high").get<double>();
        b.count = e.at("count").get<std::uint64_t>();
        b.density = e.at("density").get<double>();
        r.speedup_histogram.push_back(b);
    }
    for (const auto& e : j.at("hotspot_histogram")) {
        r.hotspot_histogram[e.at("conflicts").get<std::uint64_t>()] = e.at("cells").get<std::uint64_t>();
    }
    for (const auto& e : j.at("top_contracts")) {
        auto addr = Address::from_hex(e.at("contract").get<std::string>());
        if (!addr) throw std::invalid_argument("bad contract address in report");
        r.top_contracts.push_back({*addr, e.at("conflicts").get<std::uint64_t>()});
    }
    return r;
}

inline std::string speedup_csv(const AggregateReport& r) {
    std::string out = "bin_low,bin_high,density\n";
    for (const auto& b : r.speedup_histogram) {
        out += format_double(b.low) + "," + format_double(b.high) + "," + format_double(b.density) + "\n";
    }
    return out;
}

inline std::string hotspot_csv(const AggregateReport& r) {
    std::string out = "bin_low,bin_high,count\n";
    for (const auto& [conflicts, cells] : r.hotspot_histogram) {
        out += std::to_string(conflicts) + "," + std::to_string(conflicts + 1) + "," + std::to_string(cells) + "\n";
    }
    return out;
}

inline std::string blocks_csv(std::span<const BlockMetrics> metrics) {
    std::string out = "block,speedup_num,speedup_den,speedup,calls,aborts,conflicts\n";
    for (const auto& m : metrics) {
        std::uint64_t conflicts = 0;
        for (const auto& [cell, n] : m.conflicts_by_cell) conflicts += n;
        out += std::to_string(m.block_number) + "," + std::to_string(m.speedup.num()) + "," +
               std::to_string(m.speedup.den()) + "," + format_double(m.speedup.value()) + "," +
               std::to_string(m.calls) + "," + std::to_string(m.aborts) + "," + std::to_string(conflicts) + "\n";
    }
    return out;
}

}  // namespace specsim
