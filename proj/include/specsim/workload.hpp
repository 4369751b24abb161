// Copyright 2026 The specsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Seeded synthetic trace generator.
//
// Randomness: block b (0-based position) draws from its own std::mt19937_64
// seeded with stream_seed(seed, b), so blocks can be generated in any order
// or in parallel with identical output. Distributions are implemented here
// rather than taken from <random> because the standard distributions are not
// required to produce the same sequence across library implementations.
//
// Each contract call picks one contract (Zipf over contract rank, or the hot
// contract with probability hot_fraction), then draws `ops_per_call` storage
// accesses on keys uniform within that contract. Storage ops alternate with
// OTHER runs: OTHER, S, OTHER, S, ..., S, OTHER.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hash.hpp"
#include "parallel.hpp"
#include "trace_model.hpp"

namespace specsim {

// Integer drawn uniformly from [mean - spread, mean + spread].
struct Spread {
    double mean{0};
    double spread{0};
};

struct GenParams {
    std::uint64_t blocks{100};
    std::uint64_t first_block{1};
    Spread calls_per_block{10, 5};
    Spread transfers_per_block{0, 0};
    Spread ops_per_call{6, 4};  // storage accesses per call, at least 1
    std::uint64_t contracts{200};
    std::uint64_t keys_per_contract{64};
    double contract_skew{1.0};  // Zipf exponent; 0 is uniform
    double write_ratio{0.3};
    Spread other_gas{1500, 1000};  // gas of one OTHER run
    std::uint64_t read_gas{200};
    std::uint64_t write_gas{20000};
    std::uint64_t transfer_gas{21000};
    double hot_fraction{0.0};  // share of calls sent to the hot contract
    std::uint64_t hot_keys{4};
    std::uint64_t seed{0};

    void validate() const {
        if (write_ratio < 0 || write_ratio > 1) throw std::invalid_argument("write_ratio must be in [0,1]");
        if (hot_fraction < 0 || hot_fraction > 1) throw std::invalid_argument("hot_fraction must be in [0,1]");
        if (contract_skew < 0) throw std::invalid_argument("contract_skew must be >= 0");
        for (const auto* s : {&calls_per_block, &transfers_per_block, &ops_per_call, &other_gas}) {
            if (s->mean < 0 || s->spread < 0) throw std::invalid_argument("counts and spreads must be >= 0");
        }
        if (keys_per_contract < 1) throw std::invalid_argument("keys_per_contract must be >= 1");
        if (hot_fraction > 0 && hot_keys < 1) throw std::invalid_argument("hot_keys must be >= 1");
        if (hot_fraction < 1 && contracts < 1 && calls_per_block.mean + calls_per_block.spread > 0) {
            throw std::invalid_argument("contracts must be >= 1");
        }
    }
};

// Gas units per instruction assumed for OTHER runs (cheap stack/arithmetic ops).
inline constexpr std::uint64_t kOtherGasPerInstruction = 3;

inline Address synthetic_contract(std::uint64_t rank) {
    auto a = Address::from_u64(rank + 1);
    a.bytes[0] = 0xc0;
    return a;
}

inline Address hot_contract() {
    auto a = Address::from_u64(1);
    a.bytes[0] = 0xee;
    return a;
}

namespace detail {

    class Rng {
      public:
        explicit Rng(std::uint64_t seed) : eng_{seed} {}

        // Uniform on [lo, hi], unbiased.
        std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
            const std::uint64_t range = hi - lo;
            if (range == std::numeric_limits<std::uint64_t>::max()) return eng_();
            const std::uint64_t n = range + 1;
            const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                        std::numeric_limits<std::uint64_t>::max() % n;
            std::uint64_t x = 0;
            do {
                x = eng_();
            } while (x >= limit);
            return lo + x % n;
        }

        // Uniform on [0, 1).
        double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

        std::uint64_t spread(const Spread& s, std::uint64_t min_value = 0) {
            const double lo = std::max(static_cast<double>(min_value), std::round(s.mean - s.spread));
            const double hi = std::max(lo, std::round(s.mean + s.spread));
            return uniform(static_cast<std::uint64_t>(lo), static_cast<std::uint64_t>(hi));
        }

      private:
        std::mt19937_64 eng_;
    };

}  // namespace detail

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t block_position) {
    return splitmix64(splitmix64(seed) ^ block_position);
}

// Cumulative Zipf weights over ranks 1..n.
inline std::vector<double> zipf_cdf(std::uint64_t n, double s) {
    std::vector<double> cdf(n);
    double acc = 0;
    for (std::uint64_t k = 0; k < n; ++k) {
        acc += 1.0 / std::pow(static_cast<double>(k + 1), s);
        cdf[k] = acc;
    }
    return cdf;
}

inline Block generate_block(const GenParams& p, std::uint64_t position, const std::vector<double>& cdf) {
    detail::Rng rng(stream_seed(p.seed, position));
    Block block;
    block.number = p.first_block + position;

    const auto calls = rng.spread(p.calls_per_block);
    const auto transfers = rng.spread(p.transfers_per_block);
    std::vector<bool> is_call(calls + transfers, false);
    std::fill(is_call.begin(), is_call.begin() + static_cast<std::ptrdiff_t>(calls), true);
    for (std::size_t i = is_call.size(); i > 1; --i) {
        const auto j = rng.uniform(0, i - 1);
        const bool tmp = is_call[i - 1];
        is_call[i - 1] = is_call[j];
        is_call[j] = tmp;
    }

    const auto other_op = [&] {
        const auto gas = rng.spread(p.other_gas);
        return Op::other(gas, std::max<std::uint64_t>(1, gas / kOtherGasPerInstruction));
    };

    for (std::uint32_t i = 0; i < is_call.size(); ++i) {
        Transaction tx;
        tx.id = "b" + std::to_string(block.number) + "-" + std::to_string(i);
        tx.index = i;
        if (!is_call[i]) {
            tx.kind = TxKind::kValueTransfer;
            tx.gas_total = p.transfer_gas;
            block.transactions.push_back(std::move(tx));
            continue;
        }
        tx.kind = TxKind::kContractCall;
        Address contract;
        std::uint64_t keys = p.keys_per_contract;
        if (p.hot_fraction > 0 && rng.unit() < p.hot_fraction) {
            contract = hot_contract();
            keys = p.hot_keys;
        } else {
            const double u = rng.unit() * cdf.back();
            const auto rank = static_cast<std::uint64_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
            contract = synthetic_contract(std::min<std::uint64_t>(rank, cdf.size() - 1));
        }
        const auto accesses = rng.spread(p.ops_per_call, 1);
        tx.ops.reserve(2 * accesses + 1);
        tx.ops.push_back(other_op());
        for (std::uint64_t k = 0; k < accesses; ++k) {
            const StorageCell cell{contract, StorageKey::from_u64(rng.uniform(0, keys - 1))};
            if (rng.unit() < p.write_ratio) {
                tx.ops.push_back(Op::write(cell, p.write_gas));
            } else {
                tx.ops.push_back(Op::read(cell, p.read_gas));
            }
            tx.ops.push_back(other_op());
        }
        tx.recompute_totals();
        block.transactions.push_back(std::move(tx));
    }
    return block;
}

inline Trace generate(const GenParams& p, std::size_t jobs = 1) {
    p.validate();
    const auto cdf = zipf_cdf(std::max<std::uint64_t>(p.contracts, 1), p.contract_skew);
    Trace trace(p.blocks);
    parallel_for(p.blocks, jobs, [&](std::size_t i) { trace[i] = generate_block(p, i, cdf); });
    return trace;
}

}  // namespace specsim
