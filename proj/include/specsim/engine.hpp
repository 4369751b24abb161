// Copyright 2026 The specsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Discrete-event model of the greedy speculative executor.
//
// A block runs in one or more concurrent phases followed by a sequential
// phase. In a concurrent phase every simulated thread pulls the next unstarted
// transaction (block order) from a shared queue and steps through its ops on a
// private virtual clock. Op events are processed in ascending (time, tx index)
// order; a thread that becomes idle at time t pulls before any op at t runs.
// Each SLOAD/SSTORE asks the phase's lock table for a read/write lock. A
// refused request aborts the transaction on the spot: it is charged for every
// op up to and including the refused one, keeps the locks it already holds,
// and is deferred. Deferred transactions feed the next concurrent phase (with
// a fresh lock table) or, after the last one, the sequential phase, which
// charges each of them in full.

#include <algorithm>
#include <cstdint>
#include <queue>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "lock_table.hpp"
#include "ratio.hpp"
#include "trace_model.hpp"

namespace specsim {

enum class CostProxy : std::uint8_t { kGas, kInstructions };
enum class ClockMode : std::uint8_t { kInstructions, kProxy };

struct SimConfig {
    std::uint32_t threads{16};
    LockMode lock_mode{LockMode::kReadWrite};
    std::uint32_t phases{1};
    CostProxy proxy{CostProxy::kGas};
    ClockMode clock{ClockMode::kInstructions};
    bool predictor{false};
    bool include_transfers{false};
    std::set<Address> excluded_contracts;

    void validate() const {
        if (threads < 1) throw std::invalid_argument("threads must be >= 1");
        if (phases < 1) throw std::invalid_argument("phases must be >= 1");
    }

    friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

struct ConflictEvent {
    StorageCell cell;
    TxIndex aborted_tx{0};
    TxIndex holder_tx{0};
    std::uint32_t phase{0};
    std::uint32_t op_position{0};

    friend bool operator==(const ConflictEvent&, const ConflictEvent&) = default;
};

struct PhaseOutcome {
    std::vector<TxIndex> committed;  // ascending
    std::vector<TxIndex> aborted;    // ascending
    std::vector<std::uint64_t> thread_cost;
    // Part of thread_cost spent on transactions that later aborted.
    std::vector<std::uint64_t> thread_abort_cost;
    std::vector<std::pair<TxIndex, std::uint64_t>> aborted_partial_cost;  // ascending by tx
    std::vector<ConflictEvent> conflicts;  // in event order

    [[nodiscard]] std::uint64_t max_thread_cost() const {
        return thread_cost.empty() ? 0 : *std::max_element(thread_cost.begin(), thread_cost.end());
    }

    // Max thread cost with aborted work removed (perfect conflict prediction).
    [[nodiscard]] std::uint64_t max_committed_thread_cost() const {
        std::uint64_t best = 0;
        for (std::size_t t = 0; t < thread_cost.size(); ++t) {
            best = std::max(best, thread_cost[t] - thread_abort_cost[t]);
        }
        return best;
    }

    friend bool operator==(const PhaseOutcome&, const PhaseOutcome&) = default;
};

struct BlockOutcome {
    std::uint64_t block_number{0};
    SimConfig config;
    std::vector<TxIndex> simulated;  // block order; survivors of the transfer/exclusion filters
    std::uint32_t calls{0};          // contract calls among `simulated`
    std::vector<PhaseOutcome> phases;
    std::vector<TxIndex> sequential_bin;
    std::uint64_t sequential_cost{0};
    std::uint64_t seq_baseline_cost{0};

    friend bool operator==(const BlockOutcome&, const BlockOutcome&) = default;
};

// Cost of a whole transaction under the given proxy.
inline std::uint64_t tx_cost(const Transaction& tx, CostProxy proxy) {
    return proxy == CostProxy::kGas ? tx.gas_total : tx.instr_total;
}

inline std::uint64_t op_cost(const Op& op, CostProxy proxy) {
    return proxy == CostProxy::kGas ? op.gas : op.instructions;
}

// True if the transaction is dropped before simulation under `config`.
inline bool filtered_out(const Transaction& tx, const SimConfig& config) {
    if (tx.kind == TxKind::kValueTransfer) return !config.include_transfers;
    if (config.excluded_contracts.empty()) return false;
    return std::any_of(tx.ops.begin(), tx.ops.end(), [&](const Op& op) {
        return op.touches_storage() && config.excluded_contracts.contains(op.cell.contract);
    });
}

namespace detail {

    struct Step {
        std::uint64_t cost{0};
        std::uint64_t ticks{0};
        bool storage{false};
        AccessMode access{AccessMode::kRead};
        std::uint32_t op_position{0};
    };

    // Ops as the clock and cost model see them. A transaction without ops
    // (a value transfer) becomes one cost-only step built from its totals.
    inline std::vector<Step> compile_steps(const Transaction& tx, const SimConfig& config) {
        std::vector<Step> steps;
        if (tx.ops.empty()) {
            const auto cost = tx_cost(tx, config.proxy);
            steps.push_back({cost, config.clock == ClockMode::kInstructions ? tx.instr_total : cost, false,
                             AccessMode::kRead, 0});
            return steps;
        }
        steps.reserve(tx.ops.size());
        for (std::uint32_t i = 0; i < tx.ops.size(); ++i) {
            const auto& op = tx.ops[i];
            const auto cost = op_cost(op, config.proxy);
            steps.push_back({cost, config.clock == ClockMode::kInstructions ? op.instructions : cost,
                             op.touches_storage(), op.kind == OpKind::kWrite ? AccessMode::kWrite : AccessMode::kRead,
                             i});
        }
        return steps;
    }

}  // namespace detail

// Runs one concurrent phase over `txs` (block indices, ascending).
inline PhaseOutcome run_concurrent_phase(const Block& block, const std::vector<TxIndex>& txs,
                                         const SimConfig& config, std::uint32_t phase = 0) {
    config.validate();
    const std::uint32_t nthreads = config.threads;

    PhaseOutcome out;
    out.thread_cost.assign(nthreads, 0);
    out.thread_abort_cost.assign(nthreads, 0);

    struct Running {
        std::vector<detail::Step> steps;
        std::size_t pos{0};
        std::uint64_t spent{0};
        std::uint32_t thread{0};
    };
    std::vector<Running> running(txs.size());

    // (time, kind, key): kind 0 = thread `key` goes idle and pulls work,
    // kind 1 = next op of queue slot `key` starts. Slots are in block order,
    // so ordering by slot is ordering by tx index.
    using Event = std::tuple<std::uint64_t, int, std::uint32_t>;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
    for (std::uint32_t t = 0; t < nthreads; ++t) events.emplace(0, 0, t);

    LockTable locks(config.lock_mode);
    std::size_t next_slot = 0;

    while (!events.empty()) {
        const auto [now, kind, key] = events.top();
        events.pop();

        if (kind == 0) {
            if (next_slot == txs.size()) continue;
            const auto slot = static_cast<std::uint32_t>(next_slot++);
            running[slot].steps = detail::compile_steps(block.transactions[txs[slot]], config);
            running[slot].thread = key;
            events.emplace(now, 1, slot);
            continue;
        }

        auto& r = running[key];
        const TxIndex tx = txs[key];
        const auto& step = r.steps[r.pos];
        const auto done_at = now + step.ticks;
        r.spent += step.cost;
        out.thread_cost[r.thread] += step.cost;

        if (step.storage) {
            const auto& cell = block.transactions[tx].ops[step.op_position].cell;
            const auto res = locks.request(cell, step.access, tx);
            if (!res.granted) {
                out.conflicts.push_back({cell, tx, *res.holder, phase, step.op_position});
                out.aborted.push_back(tx);
                out.aborted_partial_cost.emplace_back(tx, r.spent);
                out.thread_abort_cost[r.thread] += r.spent;
                events.emplace(done_at, 0, r.thread);
                r.steps.clear();
                continue;
            }
        }
        if (++r.pos == r.steps.size()) {
            out.committed.push_back(tx);
            events.emplace(done_at, 0, r.thread);
            r.steps.clear();
        } else {
            events.emplace(done_at, 1, key);
        }
    }
    locks.freeze();

    std::sort(out.committed.begin(), out.committed.end());
    std::sort(out.aborted.begin(), out.aborted.end());
    std::sort(out.aborted_partial_cost.begin(), out.aborted_partial_cost.end());
    return out;
}

inline BlockOutcome simulate_block(const Block& block, const SimConfig& config) {
    config.validate();
    BlockOutcome out;
    out.block_number = block.number;
    out.config = config;
    for (const auto& tx : block.transactions) {
        if (filtered_out(tx, config)) continue;
        out.simulated.push_back(tx.index);
        if (tx.is_call()) ++out.calls;
        out.seq_baseline_cost += tx_cost(tx, config.proxy);
    }

    std::vector<TxIndex> pending = out.simulated;
    for (std::uint32_t p = 0; p < config.phases; ++p) {
        out.phases.push_back(run_concurrent_phase(block, pending, config, p));
        pending = out.phases.back().aborted;
    }
    out.sequential_bin = pending;
    for (auto tx : out.sequential_bin) out.sequential_cost += tx_cost(block.transactions[tx], config.proxy);
    return out;
}

// Sequential cost over (sum of per-phase max thread cost + sequential cost).
// With the predictor enabled, work on aborted transactions is free. A block
// with nothing to run has speed-up 1.
inline Ratio compute_speedup(const BlockOutcome& outcome) {
    std::uint64_t denom = outcome.sequential_cost;
    for (const auto& ph : outcome.phases) {
        denom += outcome.config.predictor ? ph.max_committed_thread_cost() : ph.max_thread_cost();
    }
    if (outcome.simulated.empty() || denom == 0) return Ratio{1, 1};
    return Ratio{outcome.seq_baseline_cost, denom};
}

}  // namespace specsim
