// Copyright 2026 The specsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "engine.hpp"
#include "ratio.hpp"
#include "trace_model.hpp"

namespace specsim {

struct BlockMetrics {
    std::uint64_t block_number{0};
    Ratio speedup;
    std::uint32_t simulated{0};  // transactions that entered the simulation
    std::uint32_t calls{0};
    std::uint32_t aborts{0};
    std::map<StorageCell, std::uint64_t> conflicts_by_cell;
    std::map<Address, std::uint64_t> conflicts_by_contract;

    [[nodiscard]] double conflict_rate() const {
        return calls == 0 ? 0.0 : static_cast<double>(aborts) / static_cast<double>(calls);
    }

    friend bool operator==(const BlockMetrics&, const BlockMetrics&) = default;
};

inline BlockMetrics block_metrics(const BlockOutcome& outcome) {
    BlockMetrics m;
    m.block_number = outcome.block_number;
    m.speedup = compute_speedup(outcome);
    m.simulated = static_cast<std::uint32_t>(outcome.simulated.size());
    m.calls = outcome.calls;
    m.aborts = static_cast<std::uint32_t>(outcome.sequential_bin.size());
    for (const auto& ph : outcome.phases) {
        for (const auto& ev : ph.conflicts) {
            ++m.conflicts_by_cell[ev.cell];
            ++m.conflicts_by_contract[ev.cell.contract];
        }
    }
    return m;
}

struct HistogramBin {
    double low{0};
    double high{0};  // +inf for the overflow bin
    std::uint64_t count{0};
    double density{0};

    friend bool operator==(const HistogramBin&, const HistogramBin&) = default;
};

struct ContractConflicts {
    Address contract;
    std::uint64_t conflicts{0};

    friend bool operator==(const ContractConflicts&, const ContractConflicts&) = default;
};

struct AggregateOptions {
    double bin_width{0.25};  // must be 1/n for integer n
    double cap{16.0};  // speed-ups >= cap share the last bin
    std::size_t top_k{5};
};

struct AggregateReport {
    std::uint64_t blocks{0};       // blocks aggregated
    std::uint64_t active_blocks{0};  // blocks with at least one simulated tx
    std::uint64_t total_calls{0};
    std::uint64_t total_aborts{0};
    double weighted_speedup{1.0};
    double weighted_conflict_rate{0.0};
    double slowdown_fraction{0.0};
    double bin_width{0.25};
    double cap{16.0};
    std::vector<HistogramBin> speedup_histogram;  // empty when no active blocks
    std::map<std::uint64_t, std::uint64_t> hotspot_histogram;  // conflicts per cell -> cells
    std::vector<ContractConflicts> top_contracts;

    // Share of conflicting cells with at least `threshold` conflicts.
    [[nodiscard]] double hotspot_tail_fraction(std::uint64_t threshold = 5) const {
        std::uint64_t total = 0;
        std::uint64_t tail = 0;
        for (const auto& [conflicts, cells] : hotspot_histogram) {
            total += cells;
            if (conflicts >= threshold) tail += cells;
        }
        return total == 0 ? 0.0 : static_cast<double>(tail) / static_cast<double>(total);
    }

    friend bool operator==(const AggregateReport&, const AggregateReport&) = default;
};

inline std::vector<ContractConflicts> top_conflicting_contracts(std::span<const BlockMetrics> metrics, std::size_t k) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    std::map<Address, std::uint64_t> totals;
    for (const auto& m : metrics) {
        for (const auto& [c, n] : m.conflicts_by_contract) totals[c] += n;
    }
    std::vector<ContractConflicts> ranked;
    ranked.reserve(totals.size());
    for (const auto& [c, n] : totals) ranked.push_back({c, n});
    // map order is ascending hex, so a stable sort on count keeps ties by address
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.conflicts > b.conflicts; });
    if (ranked.size() > k) ranked.resize(k);
    return ranked;
}

inline AggregateReport aggregate(std::span<const BlockMetrics> metrics, const AggregateOptions& opts = {}) {
    AggregateReport rep;
    rep.bin_width = opts.bin_width;
    rep.cap = opts.cap;
    rep.blocks = metrics.size();

    // Sum in block order so the floating-point result does not depend on the
    // order the caller produced the metrics in.
    std::vector<const BlockMetrics*> sorted;
    sorted.reserve(metrics.size());
    for (const auto& m : metrics) sorted.push_back(&m);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto* a, const auto* b) { return a->block_number < b->block_number; });

    const auto bins_per_unit = static_cast<std::uint64_t>(1.0 / opts.bin_width + 0.5);
    const auto nbins = static_cast<std::uint64_t>(opts.cap / opts.bin_width + 0.5);
    std::vector<std::uint64_t> counts(nbins + 1, 0);
    std::uint64_t slowdowns = 0;
    double weighted = 0.0;
    std::map<StorageCell, std::uint64_t> cells;

    for (const auto* m : sorted) {
        rep.total_calls += m->calls;
        rep.total_aborts += m->aborts;
        weighted += m->speedup.value() * m->calls;
        for (const auto& [cell, n] : m->conflicts_by_cell) cells[cell] += n;
        if (m->simulated == 0) continue;
        ++rep.active_blocks;
        ++counts[std::min(m->speedup.floor_scaled(bins_per_unit), nbins)];
        if (m->speedup < Ratio{1, 1}) ++slowdowns;
    }

    if (rep.total_calls > 0) {
        rep.weighted_speedup = weighted / static_cast<double>(rep.total_calls);
        rep.weighted_conflict_rate = static_cast<double>(rep.total_aborts) / static_cast<double>(rep.total_calls);
    }
    if (rep.active_blocks > 0) {
        const auto total = static_cast<double>(rep.active_blocks);
        rep.slowdown_fraction = static_cast<double>(slowdowns) / total;
        rep.speedup_histogram.reserve(counts.size());
        for (std::uint64_t i = 0; i < counts.size(); ++i) {
            HistogramBin bin;
            bin.low = static_cast<double>(i) * opts.bin_width;
            bin.high = i == nbins ? std::numeric_limits<double>::infinity() : static_cast<double>(i + 1) * opts.bin_width;
            bin.count = counts[i];
            bin.density = static_cast<double>(counts[i]) / (total * opts.bin_width);
            rep.speedup_histogram.push_back(bin);
        }
    }
    for (const auto& [cell, n] : cells) ++rep.hotspot_histogram[n];
    rep.top_contracts = top_conflicting_contracts(metrics, std::max<std::size_t>(opts.top_k, 1));
    return rep;
}

}  // namespace specsim
