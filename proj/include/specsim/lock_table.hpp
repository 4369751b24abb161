// Copyright 2026 The specsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "trace_model.hpp"

namespace specsim {

enum class LockMode : std::uint8_t { kReadWrite, kMutex };
enum class AccessMode : std::uint8_t { kRead, kWrite };

using TxIndex = std::uint32_t;

struct LockState {
    std::vector<TxIndex> readers;  // sorted
    std::optional<TxIndex> writer;
};

struct LockResult {
    bool granted{true};
    std::optional<TxIndex> holder;  // set when !granted

    static LockResult grant() { return {}; }
    static LockResult conflict(TxIndex h) { return {false, h}; }
};

// Per-phase lock table. Entries are only ever added or strengthened; a
// conflicting request leaves the table untouched, so locks taken by a
// transaction that later aborts stay held until the table is discarded.
class LockTable {
  public:
    explicit LockTable(LockMode mode = LockMode::kReadWrite) : mode_{mode} {}

    [[nodiscard]] LockMode mode() const noexcept { return mode_; }
    [[nodiscard]] bool frozen() const noexcept { return frozen_; }
    [[nodiscard]] std::size_t size() const noexcept { return cells_.size(); }

    // Ends the phase; any further request is a logic error.
    void freeze() noexcept { frozen_ = true; }

    [[nodiscard]] const LockState* find(const StorageCell& cell) const {
        auto it = cells_.find(cell);
        return it == cells_.end() ? nullptr : &it->second;
    }

    [[nodiscard]] LockResult check(const StorageCell& cell, AccessMode access, TxIndex tx) const {
        const auto* st = find(cell);
        return st == nullptr ? LockResult::grant() : decide(*st, access, tx);
    }

    LockResult request(const StorageCell& cell, AccessMode access, TxIndex tx) {
        if (frozen_) throw std::logic_error("lock request on a frozen lock table");
        auto& st = cells_[cell];
        const auto result = decide(st, access, tx);
        if (!result.granted) return result;
        if (mode_ == LockMode::kMutex || access == AccessMode::kWrite) {
            st.writer = tx;
        } else if (!st.writer) {
            auto pos = std::lower_bound(st.readers.begin(), st.readers.end(), tx);
            if (pos == st.readers.end() || *pos != tx) st.readers.insert(pos, tx);
        }
        return result;
    }

  private:
    [[nodiscard]] LockResult decide(const LockState& st, AccessMode access, TxIndex tx) const {
        if (st.writer && *st.writer != tx) return LockResult::conflict(*st.writer);
        if (mode_ == LockMode::kMutex) {
            // a mutex holder is always recorded as the writer
            return LockResult::grant();
        }
        if (access == AccessMode::kRead) return LockResult::grant();
        for (auto r : st.readers) {
            if (r != tx) return LockResult::conflict(r);
        }
        return LockResult::grant();
    }

    LockMode mode_;
    bool frozen_{false};
    std::unordered_map<StorageCell, LockState, CellHash> cells_;
};

}  // namespace specsim
