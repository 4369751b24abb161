// Copyright 2026 The specsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "support/fixtures.hpp"

namespace specsim {

namespace {

    std::string bytes(const Trace& t) {
        std::ostringstream out;
        write_trace(t, out);
        return out.str();
    }

    std::uint64_t total_conflicts(const Trace& t, const SimConfig& cfg) {
        std::uint64_t n = 0;
        for (const auto& m : simulate_trace(t, cfg)) {
            for (const auto& [c, k] : m.conflicts_by_cell) n += k;
        }
        return n;
    }

}  // namespace

TEST_CASE("zero blocks", "[workload]") {
    GenParams p;
    p.blocks = 0;
    CHECK(generate(p).empty());
}

TEST_CASE("generated traces are valid and deterministic", "[workload]") {
    GenParams p;
    p.blocks = 30;
    p.seed = 7;
    p.transfers_per_block = {5, 5};
    const auto a = generate(p);
    CHECK_NOTHROW(validate_trace(a));
    CHECK(bytes(a) == bytes(generate(p)));
    CHECK(bytes(a) == bytes(generate(p, 4)));
    CHECK(a.front().number == 1);

    p.seed = 8;
    CHECK(bytes(a) != bytes(generate(p)));

    // block i depends only on (seed, i)
    p.seed = 7;
    p.blocks = 10;
    const auto prefix = generate(p);
    for (std::size_t i = 0; i < prefix.size(); ++i) CHECK(prefix[i] == a[i]);
}

TEST_CASE("read-only uniform workload never conflicts", "[workload]") {
    GenParams p;
    p.blocks = 20;
    p.contract_skew = 0;
    p.keys_per_contract = 1u << 20;
    p.write_ratio = 0;
    SimConfig cfg;
    CHECK(total_conflicts(generate(p), cfg) == 0);
}

TEST_CASE("mean ops and gas per call track the parameters", "[workload][statistics]") {
    GenParams p;
    p.blocks = 500;
    p.calls_per_block = {40, 20};
    p.ops_per_call = {6, 4};
    p.other_gas = {1500, 1000};
    p.write_ratio = 0.3;
    const auto trace = generate(p);
    std::uint64_t calls = 0;
    std::uint64_t storage = 0;
    std::uint64_t gas = 0;
    for (const auto& b : trace) {
        for (const auto& tx : b.transactions) {
            ++calls;
            gas += tx.gas_total;
            for (const auto& op : tx.ops) storage += op.touches_storage() ? 1 : 0;
        }
    }
    REQUIRE(calls >= 10000);
    const double mean_ops = static_cast<double>(storage) / static_cast<double>(calls);
    CHECK(std::abs(mean_ops - 6.0) / 6.0 < 0.05);
    // (k + 1) OTHER runs and k storage ops per call
    const double expected_gas = 7.0 * 1500 + 6.0 * (0.3 * 20000 + 0.7 * 200);
    const double mean_gas = static_cast<double>(gas) / static_cast<double>(calls);
    CHECK(std::abs(mean_gas - expected_gas) / expected_gas < 0.05);
}

TEST_CASE("contract popularity follows the Zipf law", "[workload][statistics]") {
    GenParams p;
    p.blocks = 400;
    p.calls_per_block = {40, 20};
    p.contracts = 50;
    p.contract_skew = 1.2;
    std::map<Address, std::uint64_t> counts;
    std::uint64_t calls = 0;
    for (const auto& b : generate(p)) {
        for (const auto& tx : b.transactions) {
            ++counts[tx.ops[1].cell.contract];
            ++calls;
        }
    }
    double h = 0;
    for (int k = 1; k <= 50; ++k) h += std::pow(k, -1.2);
    for (std::uint64_t rank : {0u, 1u, 4u}) {
        const double expected = std::pow(static_cast<double>(rank) + 1.0, -1.2) / h;
        const double got = static_cast<double>(counts[synthetic_contract(rank)]) / static_cast<double>(calls);
        CAPTURE(rank);
        CHECK(got == Catch::Approx(expected).epsilon(0.05));
    }
}

TEST_CASE("hot contract mode", "[workload]") {
    GenParams p;
    p.blocks = 200;
    p.calls_per_block = {40, 20};
    p.hot_fraction = 0.31;
    p.hot_keys = 4;
    std::uint64_t hot = 0;
    std::uint64_t calls = 0;
    for (const auto& b : generate(p)) {
        for (const auto& tx : b.transactions) {
            ++calls;
            if (tx.ops[1].cell.contract == hot_contract()) {
                ++hot;
                for (const auto& op : tx.ops) {
                    if (op.touches_storage()) CHECK(op.cell.key < StorageKey::from_u64(4));
                }
            }
        }
    }
    CHECK(static_cast<double>(hot) / static_cast<double>(calls) == Catch::Approx(0.31).epsilon(0.05));
}

TEST_CASE("more skew means more conflicts across seeds", "[workload][statistics]") {
    SimConfig cfg;
    std::uint64_t prev = 0;
    for (double s : {0.0, 0.5, 1.0, 1.5}) {
        std::uint64_t total = 0;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            GenParams p;
            p.blocks = 40;
            p.calls_per_block = {40, 20};
            p.contract_skew = s;
            p.seed = seed;
            total += total_conflicts(generate(p), cfg);
        }
        CAPTURE(s);
        CHECK(total >= prev);
        prev = total;
    }
}

TEST_CASE("invalid generator parameters", "[workload]") {
    GenParams p;
    p.write_ratio = 1.5;
    CHECK_THROWS_AS(generate(p), std::invalid_argument);
    p = {};
    p.contract_skew = -1;
    CHECK_THROWS_AS(generate(p), std::invalid_argument);
    p = {};
    p.keys_per_contract = 0;
    CHECK_THROWS_AS(generate(p), std::invalid_argument);
}

}  // namespace specsim
