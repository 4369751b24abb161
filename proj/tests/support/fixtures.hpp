// Copyright 2026 The specsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <unistd.h>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <specsim/specsim.hpp>

namespace specsim::test {

inline Address contract(std::uint64_t n) { return Address::from_u64(0xc000 + n); }
inline StorageCell cell(std::uint64_t contract_no, std::uint64_t key) {
    return {contract(contract_no), StorageKey::from_u64(key)};
}

inline Transaction call(std::string id, std::vector<Op> ops) {
    Transaction tx;
    tx.id = std::move(id);
    tx.kind = TxKind::kContractCall;
    tx.ops = std::move(ops);
    tx.recompute_totals();
    return tx;
}

inline Transaction transfer(std::string id, std::uint64_t gas) {
    Transaction tx;
    tx.id = std::move(id);
    tx.kind = TxKind::kValueTransfer;
    tx.gas_total = gas;
    return tx;
}

inline Block make_block(std::uint64_t number, std::vector<Transaction> txs) {
    Block b;
    b.number = number;
    for (std::uint32_t i = 0; i < txs.size(); ++i) txs[i].index = i;
    b.transactions = std::move(txs);
    return b;
}

// Golden micro-trace G1:
//   T1 [OTHER g5 n1, WRITE C1.k1 g20, OTHER g5 n1]
//   T2 [READ C1.k1 g2, OTHER g8 n1]
//   T3 [OTHER g10 n2]
inline Block g1_block() {
    const auto c1k1 = cell(1, 1);
    return make_block(1, {
                             call("T1", {Op::other(5, 1), Op::write(c1k1, 20), Op::other(5, 1)}),
                             call("T2", {Op::read(c1k1, 2), Op::other(8, 1)}),
                             call("T3", {Op::other(10, 2)}),
                         });
}

inline SimConfig g1_config() {
    SimConfig c;
    c.threads = 2;
    c.lock_mode = LockMode::kReadWrite;
    c.phases = 1;
    c.proxy = CostProxy::kGas;
    c.clock = ClockMode::kInstructions;
    return c;
}

// M1: two single-READ transactions on one cell.
inline Block m1_block() {
    const auto c = cell(1, 7);
    return make_block(1, {call("R1", {Op::read(c, 200)}), call("R2", {Op::read(c, 200)})});
}

// Three single writes to one cell with gas 10/20/30.
inline Block three_writers_block() {
    const auto c = cell(1, 1);
    return make_block(1, {call("W1", {Op::write(c, 10)}), call("W2", {Op::write(c, 20)}), call("W3", {Op::write(c, 30)})});
}

// Small random block over a tiny cell space so conflicts are common.
inline Block random_block(std::mt19937_64& rng, std::uint64_t number, std::size_t max_txs = 8,
                          std::size_t cells = 4) {
    std::uniform_int_distribution<std::size_t> ntx(1, max_txs);
    std::uniform_int_distribution<std::size_t> nops(1, 5);
    std::uniform_int_distribution<std::uint64_t> pick(0, cells - 1);
    std::uniform_int_distribution<int> kind(0, 2);
    std::uniform_int_distribution<std::uint64_t> gas(0, 50);
    std::uniform_int_distribution<std::uint64_t> instr(1, 4);
    std::vector<Transaction> txs;
    const auto n = ntx(rng);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Op> ops;
        const auto k = nops(rng);
        for (std::size_t j = 0; j < k; ++j) {
            const auto c = cell(pick(rng) % 2, pick(rng));
            switch (kind(rng)) {
                case 0: ops.push_back(Op::read(c, gas(rng))); break;
                case 1: ops.push_back(Op::write(c, gas(rng))); break;
                default: ops.push_back(Op::other(gas(rng), instr(rng))); break;
            }
        }
        txs.push_back(call("r" + std::to_string(i), std::move(ops)));
    }
    return make_block(number, std::move(txs));
}

// Per-test scratch directory, removed on destruction.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("specsim-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    [[nodiscard]] const std::filesystem::path& path() const { return path_; }
    [[nodiscard]] std::string operator/(const std::string& name) const { return (path_ / name).string(); }

  private:
    std::filesystem::path path_;
};

}  // namespace specsim::test
