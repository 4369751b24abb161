// Copyright 2026 The specsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Manifest files are "key = value" lines; '#' starts a comment. List values
// are comma separated. Experiment manifest keys:
//
//   trace = corpus.jsonl           # relative to the manifest's directory
//   out = reports/
//   threads = 16, 32, 64
//   locks = rw, mutex
//   phases = 1, 2
//   proxies = gas, instr
//   clocks = instr, proxy
//   predictor = false, true
//   exclude = none, top5, kitties:06012c8cf97bead5deae237070f9587f8e7a266d;b1690c08e213a35ed9bab7b318de14420fb57d8c
//   stride = 10
//   include_transfers = false
//   top_k = 5
//   hist_cap = 16
//
// Generator manifests use the GenParams field names (calls_per_block takes
// "mean" or "mean, spread").

#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "experiments.hpp"
#include "geth_adapter.hpp"
#include "trace_io.hpp"
#include "workload.hpp"

namespace specsim {

class ManifestError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

using KeyValues = std::map<std::string, std::string>;

namespace detail {

    inline std::string trim(std::string_view s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string_view::npos) return {};
        const auto e = s.find_last_not_of(" \t\r");
        return std::string(s.substr(b, e - b + 1));
    }

    inline std::vector<std::string> split_list(const std::string& v) {
        std::vector<std::string> out;
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto t = trim(item);
            if (!t.empty()) out.push_back(std::move(t));
        }
        return out;
    }

    inline std::uint64_t to_u64(const std::string& key, const std::string& v) {
        try {
            std::size_t used = 0;
            if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
            const auto n = std::stoull(v, &used);
            if (used != v.size()) throw std::invalid_argument("trailing characters");
            return n;
        } catch (const std::exception&) {
            throw ManifestError("'" + key + "': expected a non-negative integer, got '" + v + "'");
        }
    }

    inline double to_double(const std::string& key, const std::string& v) {
        try {
            std::size_t used = 0;
            const auto d = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument("trailing characters");
            return d;
        } catch (const std::exception&) {
            throw ManifestError("'" + key + "': expected a number, got '" + v + "'");
        }
    }

    inline bool to_bool(const std::string& key, const std::string& v) {
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ManifestError("'" + key + "': expected true|false, got '" + v + "'");
    }

}  // namespace detail

inline KeyValues parse_key_values(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto t = detail::trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ManifestError("line " + std::to_string(lineno) + ": expected key = value");
        auto key = detail::trim(t.substr(0, eq));
        if (key.empty()) throw ManifestError("line " + std::to_string(lineno) + ": empty key");
        if (kv.contains(key)) throw ManifestError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        kv[key] = detail::trim(t.substr(eq + 1));
    }
    return kv;
}

inline ExclusionSpec parse_exclusion(const std::string& v) {
    if (v == "none") return ExclusionSpec::none();
    if (v.starts_with("top")) {
        const auto k = detail::to_u64("exclude", v.substr(3));
        if (k < 1) throw ManifestError("'exclude': top-k needs k >= 1");
        return ExclusionSpec::top(k);
    }
    const auto colon = v.find(':');
    if (colon == std::string::npos || colon == 0) {
        throw ManifestError("'exclude': expected none, top<k> or name:addr;addr, got '" + v + "'");
    }
    std::set<Address> contracts;
    std::stringstream ss(v.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ';')) {
        auto a = parse_address(detail::trim(item));
        if (!a) throw ManifestError("'exclude': bad contract address '" + item + "'");
        contracts.insert(*a);
    }
    return ExclusionSpec::named(v.substr(0, colon), std::move(contracts));
}

struct ExperimentManifest {
    std::string trace_path;
    std::string out_dir;
    ExperimentMatrix matrix;
};

inline ExperimentManifest manifest_from_key_values(const KeyValues& kv, const std::filesystem::path& base_dir = {}) {
    ExperimentManifest m;
    auto& mx = m.matrix;
    const auto list = [&](const std::string& key, auto&& parse) {
        const auto items = detail::split_list(kv.at(key));
        if (items.empty()) throw ManifestError("'" + key + "' needs at least one value");
        using T = decltype(parse(items[0]));
        std::vector<T> out;
        for (const auto& it : items) out.push_back(parse(it));
        return out;
    };
    const auto wrap = [](auto fn) {
        return [fn](const std::string& s) {
            try {
                return fn(s);
            } catch (const std::invalid_argument& e) {
                throw ManifestError(e.what());
            }
        };
    };
    for (const auto& [key, value] : kv) {
        if (key == "trace") {
            m.trace_path = (base_dir / value).string();
        } else if (key == "out") {
            m.out_dir = (base_dir / value).string();
        } else if (key == "threads") {
            mx.thread_counts =
                list(key, [&](const std::string& s) { return static_cast<std::uint32_t>(detail::to_u64(key, s)); });
        } else if (key == "locks") {
            mx.lock_modes = list(key, wrap(parse_lock_mode));
        } else if (key == "phases") {
            mx.phase_counts =
                list(key, [&](const std::string& s) { return static_cast<std::uint32_t>(detail::to_u64(key, s)); });
        } else if (key == "proxies") {
            mx.proxies = list(key, wrap(parse_proxy));
        } else if (key == "clocks") {
            mx.clocks = list(key, wrap(parse_clock));
        } else if (key == "predictor") {
            mx.predictor = list(key, [&](const std::string& s) { return detail::to_bool(key, s); });
        } else if (key == "exclude") {
            mx.exclusions = list(key, parse_exclusion);
        } else if (key == "stride") {
            mx.stride = detail::to_u64(key, value);
        } else if (key == "include_transfers") {
            mx.include_transfers = detail::to_bool(key, value);
        } else if (key == "top_k") {
            mx.report.top_k = detail::to_u64(key, value);
        } else if (key == "hist_cap") {
            mx.report.cap = detail::to_double(key, value);
        } else {
            throw ManifestError("unknown manifest key '" + key + "'");
        }
    }
    try {
        mx.validate();
    } catch (const std::invalid_argument& e) {
        throw ManifestError(e.what());
    }
    return m;
}

inline ExperimentManifest load_experiment_manifest(const std::string& path) {
    return manifest_from_key_values(parse_key_values(read_file(path)), std::filesystem::path(path).parent_path());
}

inline void apply_gen_key_values(GenParams& p, const KeyValues& kv) {
    const auto spread = [](const std::string& key, const std::string& v) {
        const auto items = detail::split_list(v);
        if (items.empty() || items.size() > 2) throw ManifestError("'" + key + "': expected mean[, spread]");
        return Spread{detail::to_double(key, items[0]), items.size() == 2 ? detail::to_double(key, items[1]) : 0.0};
    };
    for (const auto& [key, v] : kv) {
        if (key == "blocks") p.blocks = detail::to_u64(key, v);
        else if (key == "first_block") p.first_block = detail::to_u64(key, v);
        else if (key == "calls_per_block") p.calls_per_block = spread(key, v);
        else if (key == "transfers_per_block") p.transfers_per_block = spread(key, v);
        else if (key == "ops_per_call") p.ops_per_call = spread(key, v);
        else if (key == "contracts") p.contracts = detail::to_u64(key, v);
        else if (key == "keys_per_contract") p.keys_per_contract = detail::to_u64(key, v);
        else if (key == "contract_skew") p.contract_skew = detail::to_double(key, v);
        else if (key == "write_ratio") p.write_ratio = detail::to_double(key, v);
        else if (key == "other_gas") p.other_gas = spread(key, v);
        else if (key == "read_gas") p.read_gas = detail::to_u64(key, v);
        else if (key == "write_gas") p.write_gas = detail::to_u64(key, v);
        else if (key == "transfer_gas") p.transfer_gas = detail::to_u64(key, v);
        else if (key == "hot_fraction") p.hot_fraction = detail::to_double(key, v);
        else if (key == "hot_keys") p.hot_keys = detail::to_u64(key, v);
        else if (key == "seed") p.seed = detail::to_u64(key, v);
        else throw ManifestError("unknown generator key '" + key + "'");
    }
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ManifestError(e.what());
    }
}

}  // namespace specsim
