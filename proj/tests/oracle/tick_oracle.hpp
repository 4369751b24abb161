// Copyright 2026 The specsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Brute-force reference for one concurrent phase. Walks virtual time one tick
// at a time instead of using an event queue, and keeps its own holder lists
// instead of the library's lock table. Only valid when every op takes at
// least one tick (instruction clock, no value transfers).

#include <map>
#include <optional>
#include <vector>

#include <specsim/trace_model.hpp>

namespace specsim::test {

struct OracleConflict {
    StorageCell cell;
    std::uint32_t aborted;
    std::uint32_t holder;
    std::uint32_t op_position;
};

struct OraclePhase {
    std::vector<std::uint32_t> committed;
    std::vector<std::uint32_t> aborted;
    std::vector<std::uint64_t> thread_cost;
    std::vector<OracleConflict> conflicts;
};

inline OraclePhase oracle_phase(const Block& block, const std::vector<std::uint32_t>& txs, std::uint32_t threads,
                                bool mutex, bool gas_proxy) {
    struct Thread {
        std::optional<std::size_t> slot;
        std::size_t op{0};
        std::uint64_t op_start{0};
        std::uint64_t free_at{0};
    };
    std::vector<Thread> th(threads);
    OraclePhase out;
    out.thread_cost.assign(threads, 0);
    std::map<StorageCell, std::map<std::uint32_t, bool>> holders;  // cell -> tx -> holds write
    std::size_t next = 0;

    for (std::uint64_t t = 0;; ++t) {
        for (auto& h : th) {
            if (!h.slot && h.free_at == t && next < txs.size()) {
                h.slot = next++;
                h.op = 0;
                h.op_start = t;
            }
        }
        std::vector<std::size_t> starting;
        for (std::size_t i = 0; i < th.size(); ++i) {
            if (th[i].slot && th[i].op_start == t) starting.push_back(i);
        }
        std::sort(starting.begin(), starting.end(), [&](auto a, auto b) { return *th[a].slot < *th[b].slot; });

        for (auto i : starting) {
            auto& h = th[i];
            const auto tx = txs[*h.slot];
            const auto& op = block.transactions[tx].ops[h.op];
            out.thread_cost[i] += gas_proxy ? op.gas : op.instructions;
            const auto end = t + op.instructions;
            bool conflict = false;
            if (op.touches_storage()) {
                const bool write = op.kind == OpKind::kWrite;
                auto& hs = holders[op.cell];
                std::optional<std::uint32_t> blocker;
                for (const auto& [other, wrote] : hs) {
                    if (other != tx && wrote) blocker = other;
                }
                if (!blocker && (write || mutex)) {
                    for (const auto& [other, wrote] : hs) {
                        if (other != tx) {
                            blocker = other;
                            break;
                        }
                    }
                }
                if (blocker) {
                    conflict = true;
                    out.conflicts.push_back({op.cell, tx, *blocker, static_cast<std::uint32_t>(h.op)});
                } else {
                    hs[tx] = hs[tx] || write || mutex;
                }
            }
            if (conflict) {
                out.aborted.push_back(tx);
                h.slot.reset();
                h.free_at = end;
            } else if (++h.op == block.transactions[tx].ops.size()) {
                out.committed.push_back(tx);
                h.slot.reset();
                h.free_at = end;
            } else {
                h.op_start = end;
            }
        }

        const bool busy = std::any_of(th.begin(), th.end(), [&](const Thread& h) { return h.slot.has_value(); });
        const bool pending = next < txs.size() &&
                             std::any_of(th.begin(), th.end(), [&](const Thread& h) { return h.free_at > t; });
        if (!busy && !pending) break;
    }
    std::sort(out.committed.begin(), out.committed.end());
    std::sort(out.aborted.begin(), out.aborted.end());
    return out;
}

}  // namespace specsim::test
