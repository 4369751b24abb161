// Copyright 2026 The specsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace specsim {

// Raised when a trace violates a data-model invariant.
class ValidationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

    inline int hex_digit(char c) noexcept {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        return -1;
    }

    inline constexpr char kHexChars[] = "0123456789abcdef";

}  // namespace detail

// Fixed-width big-endian byte string with a lowercase hex text form.
template <std::size_t N>
struct FixedBytes {
    static constexpr std::size_t kSize = N;
    std::array<std::uint8_t, N> bytes{};

    // Parses exactly 2*N lowercase hex characters, no prefix.
    static std::optional<FixedBytes> from_hex(std::string_view hex) {
        if (hex.size() != 2 * N) return std::nullopt;
        FixedBytes out;
        for (std::size_t i = 0; i < N; ++i) {
            const int hi = detail::hex_digit(hex[2 * i]);
            const int lo = detail::hex_digit(hex[2 * i + 1]);
            if (hi < 0 || lo < 0) return std::nullopt;
            out.bytes[i] = static_cast<std::uint8_t>((hi << 4) | lo);
        }
        return out;
    }

    [[nodiscard]] std::string hex() const {
        std::string s(2 * N, '0');
        for (std::size_t i = 0; i < N; ++i) {
            s[2 * i] = detail::kHexChars[bytes[i] >> 4];
            s[2 * i + 1] = detail::kHexChars[bytes[i] & 0xf];
        }
        return s;
    }

    // Big-endian integer placed in the low-order bytes.
    static constexpr FixedBytes from_u64(std::uint64_t v) noexcept {
        FixedBytes out;
        for (std::size_t i = 0; i < 8 && i < N; ++i) {
            out.bytes[N - 1 - i] = static_cast<std::uint8_t>(v >> (8 * i));
        }
        return out;
    }

    friend auto operator<=>(const FixedBytes&, const FixedBytes&) = default;
    friend bool operator==(const FixedBytes&, const FixedBytes&) = default;
};

using Address = FixedBytes<20>;
using StorageKey = FixedBytes<32>;

// A persistent storage location: the unit of locking and of conflict.
struct StorageCell {
    Address contract;
    StorageKey key;

    friend auto operator<=>(const StorageCell&, const StorageCell&) = default;
    friend bool operator==(const StorageCell&, const StorageCell&) = default;

    [[nodiscard]] std::string to_string() const { return contract.hex() + "." + key.hex(); }
};

enum class OpKind : std::uint8_t { kRead, kWrite, kOther };

// One step of a transaction trace. READ/WRITE stand for SLOAD/SSTORE; OTHER
// run-length-compresses a span of bytecodes that do not touch storage.
struct Op {
    OpKind kind{OpKind::kOther};
    StorageCell cell{};  // meaningful only for kRead/kWrite
    std::uint64_t gas{0};
    std::uint64_t instructions{1};

    static Op read(const StorageCell& c, std::uint64_t gas) { return {OpKind::kRead, c, gas, 1}; }
    static Op write(const StorageCell& c, std::uint64_t gas) { return {OpKind::kWrite, c, gas, 1}; }
    static Op other(std::uint64_t gas, std::uint64_t n = 1) { return {OpKind::kOther, {}, gas, n}; }

    [[nodiscard]] bool touches_storage() const noexcept { return kind != OpKind::kOther; }

    friend bool operator==(const Op& a, const Op& b) {
        if (a.kind != b.kind || a.gas != b.gas || a.instructions != b.instructions) return false;
        return a.kind == OpKind::kOther || a.cell == b.cell;
    }
};

enum class TxKind : std::uint8_t { kContractCall, kValueTransfer };

struct Transaction {
    std::string id;
    std::uint32_t index{0};
    TxKind kind{TxKind::kContractCall};
    std::vector<Op> ops;
    std::uint64_t gas_total{0};
    std::uint64_t instr_total{0};

    [[nodiscard]] bool is_call() const noexcept { return kind == TxKind::kContractCall; }

    // Fills gas_total and instr_total from the op list.
    void recompute_totals() {
        gas_total = 0;
        instr_total = 0;
        for (const auto& op : ops) {
            gas_total += op.gas;
            instr_total += op.instructions;
        }
    }

    friend bool operator==(const Transaction&, const Transaction&) = default;
};

struct Block {
    std::uint64_t number{0};
    std::vector<Transaction> transactions;

    friend bool operator==(const Block&, const Block&) = default;
};

using Trace = std::vector<Block>;

struct CellHash {
    std::size_t operator()(const StorageCell& c) const noexcept {
        // FNV-1a over the raw bytes
        std::uint64_t h = 1469598103934665603ull;
        for (auto b : c.contract.bytes) h = (h ^ b) * 1099511628211ull;
        for (auto b : c.key.bytes) h = (h ^ b) * 1099511628211ull;
        return static_cast<std::size_t>(h);
    }
};

struct AddressHash {
    std::size_t operator()(const Address& a) const noexcept {
        std::uint64_t h = 1469598103934665603ull;
        for (auto b : a.bytes) h = (h ^ b) * 1099511628211ull;
        return static_cast<std::size_t>(h);
    }
};

// Read and write sets of one transaction, kept sorted and deduplicated.
struct AccessSets {
    std::vector<StorageCell> reads;
    std::vector<StorageCell> writes;

    friend bool operator==(const AccessSets&, const AccessSets&) = default;
};

inline AccessSets derive_access_sets(const Transaction& tx) {
    AccessSets sets;
    for (const auto& op : tx.ops) {
        if (op.kind == OpKind::kRead) sets.reads.push_back(op.cell);
        if (op.kind == OpKind::kWrite) sets.writes.push_back(op.cell);
    }
    for (auto* v : {&sets.reads, &sets.writes}) {
        std::sort(v->begin(), v->end());
        v->erase(std::unique(v->begin(), v->end()), v->end());
    }
    return sets;
}

namespace detail {

    inline bool sorted_intersect(const std::vector<StorageCell>& a, const std::vector<StorageCell>& b) {
        auto i = a.begin();
        auto j = b.begin();
        while (i != a.end() && j != b.end()) {
            if (*i < *j) {
                ++i;
            } else if (*j < *i) {
                ++j;
            } else {
                return true;
            }
        }
        return false;
    }

}  // namespace detail

// True iff the two transactions touch a common cell and at least one of the
// accesses is a write.
inline bool sets_conflict(const AccessSets& a, const AccessSets& b) {
    return detail::sorted_intersect(a.writes, b.reads) || detail::sorted_intersect(a.writes, b.writes) ||
           detail::sorted_intersect(b.writes, a.reads);
}

inline bool touches_contract(const Transaction& tx, const Address& contract) {
    return std::any_of(tx.ops.begin(), tx.ops.end(),
                       [&](const Op& op) { return op.touches_storage() && op.cell.contract == contract; });
}

// Checks every data-model invariant of a block. Throws ValidationError naming
// the offending block and transaction.
inline void validate_block(const Block& block) {
    for (std::size_t i = 0; i < block.transactions.size(); ++i) {
        const auto& tx = block.transactions[i];
        const auto where = [&] { return "block " + std::to_string(block.number) + " tx '" + tx.id + "'"; };
        if (tx.index != i) {
            throw ValidationError(where() + ": index " + std::to_string(tx.index) + " at position " +
                                  std::to_string(i));
        }
        std::uint64_t gas = 0;
        std::uint64_t instr = 0;
        for (std::size_t k = 0; k < tx.ops.size(); ++k) {
            const auto& op = tx.ops[k];
            if (op.touches_storage() && op.instructions != 1) {
                throw ValidationError(where() + ": storage op " + std::to_string(k) + " must count 1 instruction");
            }
            if (op.kind == OpKind::kOther && op.instructions < 1) {
                throw ValidationError(where() + ": op " + std::to_string(k) + " has zero instructions");
            }
            gas += op.gas;
            instr += op.instructions;
        }
        if (tx.kind == TxKind::kValueTransfer) {
            if (!tx.ops.empty()) throw ValidationError(where() + ": value transfer carries ops");
            if (tx.instr_total != 0) throw ValidationError(where() + ": value transfer has instr_total != 0");
            continue;
        }
        if (tx.gas_total != gas) {
            throw ValidationError(where() + ": gas_total " + std::to_string(tx.gas_total) + " != sum of op gas " +
                                  std::to_string(gas));
        }
        if (tx.instr_total != instr) {
            throw ValidationError(where() + ": instr_total " + std::to_string(tx.instr_total) +
                                  " != sum of op instructions " + std::to_string(instr));
        }
    }
}

inline void validate_trace(const Trace& trace) {
    for (std::size_t i = 0; i < trace.size(); ++i) {
        validate_block(trace[i]);
        if (i > 0 && trace[i].number <= trace[i - 1].number) {
            throw ValidationError("block " + std::to_string(trace[i].number) + " does not follow block " +
                                  std::to_string(trace[i - 1].number));
        }
    }
}

}  // namespace specsim
