// Copyright 2026 The specsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "engine.hpp"
#include "metrics.hpp"
#include "parallel.hpp"
#include "report_io.hpp"
#include "trace_model.hpp"

namespace specsim {

class SimulationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A named set of contracts whose calls are dropped before simulation.
struct ExclusionSpec {
    enum class Kind { kNone, kExplicit, kTopK };

    Kind kind{Kind::kNone};
    std::string name{"none"};
    std::set<Address> contracts;
    std::size_t k{0};

    static ExclusionSpec none() { return {}; }
    static ExclusionSpec top(std::size_t k) { return {Kind::kTopK, "top" + std::to_string(k), {}, k}; }
    static ExclusionSpec named(std::string name, std::set<Address> contracts) {
        return {Kind::kExplicit, std::move(name), std::move(contracts), 0};
    }
};

struct ExperimentMatrix {
    std::vector<std::uint32_t> thread_counts{16, 32, 64};
    std::vector<LockMode> lock_modes{LockMode::kReadWrite};
    std::vector<std::uint32_t> phase_counts{1};
    std::vector<CostProxy> proxies{CostProxy::kGas};
    std::vector<ClockMode> clocks{ClockMode::kInstructions};
    std::vector<bool> predictor{false};
    std::vector<ExclusionSpec> exclusions{ExclusionSpec::none()};
    std::size_t stride{1};
    bool include_transfers{false};
    AggregateOptions report;

    void validate() const {
        if (thread_counts.empty() || lock_modes.empty() || phase_counts.empty() || proxies.empty() ||
            clocks.empty() || predictor.empty() || exclusions.empty()) {
            throw std::invalid_argument("every experiment axis needs at least one value");
        }
        if (stride < 1) throw std::invalid_argument("stride must be >= 1");
        for (auto t : thread_counts) {
            if (t < 1) throw std::invalid_argument("thread counts must be >= 1");
        }
        for (auto p : phase_counts) {
            if (p < 1) throw std::invalid_argument("phase counts must be >= 1");
        }
        for (const auto& e : exclusions) {
            if (e.kind == ExclusionSpec::Kind::kTopK && e.k < 1) throw std::invalid_argument("top-k needs k >= 1");
        }
    }
};

struct ExperimentResult {
    std::string key;
    SimConfig config;  // excluded_contracts resolved
    std::string exclusion;
    std::vector<BlockMetrics> blocks;
    AggregateReport report;
};

// Canonical configuration name, e.g. "t16-rw-p1-gas-clk_instr-pred0-excl_none".
inline std::string config_key(const SimConfig& c, const std::string& exclusion = "none") {
    std::string key = "t" + std::to_string(c.threads) + "-" + to_string(c.lock_mode) + "-p" +
                      std::to_string(c.phases) + "-" + to_string(c.proxy) + "-clk_" + to_string(c.clock) +
                      "-pred" + (c.predictor ? "1" : "0") + "-excl_" + exclusion;
    if (c.include_transfers) key += "-xfer";
    return key;
}

// Drops every contract call whose ops touch an excluded contract's storage.
// Surviving transactions are renumbered so block invariants still hold.
inline Trace apply_contract_filter(const Trace& trace, const std::set<Address>& excluded) {
    if (excluded.empty()) return trace;
    SimConfig probe;
    probe.include_transfers = true;
    probe.excluded_contracts = excluded;
    Trace out;
    out.reserve(trace.size());
    for (const auto& block : trace) {
        Block b;
        b.number = block.number;
        for (const auto& tx : block.transactions) {
            if (filtered_out(tx, probe)) continue;
            b.transactions.push_back(tx);
            b.transactions.back().index = static_cast<std::uint32_t>(b.transactions.size() - 1);
        }
        out.push_back(std::move(b));
    }
    return out;
}

// Blocks at positions 0, stride, 2*stride, ...
inline Trace sample_blocks(const Trace& trace, std::size_t stride) {
    if (stride < 1) throw std::invalid_argument("stride must be >= 1");
    Trace out;
    for (std::size_t i = 0; i < trace.size(); i += stride) out.push_back(trace[i]);
    return out;
}

inline std::vector<BlockMetrics> simulate_trace(const Trace& trace, const SimConfig& config, std::size_t jobs = 1) {
    config.validate();
    std::vector<BlockMetrics> metrics(trace.size());
    parallel_for(trace.size(), jobs, [&](std::size_t i) {
        try {
            validate_block(trace[i]);
            metrics[i] = block_metrics(simulate_block(trace[i], config));
        } catch (const std::exception& e) {
            throw SimulationError("block " + std::to_string(trace[i].number) + ": " + e.what());
        }
    });
    return metrics;
}

// One baseline pass under `base`, then the k contracts with the most conflicts.
inline std::set<Address> auto_top_k_exclusion(const Trace& trace, const SimConfig& base, std::size_t k,
                                              std::size_t jobs = 1) {
    const auto metrics = simulate_trace(trace, base, jobs);
    std::set<Address> out;
    for (const auto& c : top_conflicting_contracts(metrics, k)) out.insert(c.contract);
    return out;
}

using ProgressFn = std::function<void(const std::string&)>;

inline std::map<std::string, ExperimentResult> run_experiment(const Trace& full_trace, const ExperimentMatrix& matrix,
                                                              std::size_t jobs = 1, const ProgressFn& progress = {}) {
    matrix.validate();
    const Trace trace = matrix.stride == 1 ? full_trace : sample_blocks(full_trace, matrix.stride);
    std::map<std::string, ExperimentResult> results;

    for (auto threads : matrix.thread_counts)
        for (auto locks : matrix.lock_modes)
            for (auto phases : matrix.phase_counts)
                for (auto proxy : matrix.proxies)
                    for (auto clock : matrix.clocks)
                        for (bool pred : matrix.predictor)
                            for (const auto& excl : matrix.exclusions) {
                                SimConfig cfg;
                                cfg.threads = threads;
                                cfg.lock_mode = locks;
                                cfg.phases = phases;
                                cfg.proxy = proxy;
                                cfg.clock = clock;
                                cfg.predictor = pred;
                                cfg.include_transfers = matrix.include_transfers;
                                if (excl.kind == ExclusionSpec::Kind::kExplicit) {
                                    cfg.excluded_contracts = excl.contracts;
                                } else if (excl.kind == ExclusionSpec::Kind::kTopK) {
                                    cfg.excluded_contracts = auto_top_k_exclusion(trace, cfg, excl.k, jobs);
                                }
                                ExperimentResult r;
                                r.key = config_key(cfg, excl.name);
                                if (progress) progress(r.key);
                                r.config = cfg;
                                r.exclusion = excl.name;
                                r.blocks = simulate_trace(trace, cfg, jobs);
                                r.report = aggregate(r.blocks, matrix.report);
                                results.emplace(r.key, std::move(r));
                            }
    return results;
}

}  // namespace specsim
