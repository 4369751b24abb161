// Copyright 2026 The specsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Conversion of debug_traceTransaction structLog output into canonical
// transactions.
//
// Storage context: a stack of contract addresses, one per call depth, starts
// as [to]. CALL and STATICCALL enter the callee (second stack word from the
// top, low 20 bytes); DELEGATECALL and CALLCODE keep the caller's storage;
// CREATE and CREATE2 enter a synthetic address derived from
// "create:<txid>:<n>". Leaving a frame pops. SLOAD/SSTORE address the slot on
// top of the stack within the current context. Everything else, including
// BALANCE, CREATE and SELFDESTRUCT, folds into OTHER runs.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hash.hpp"
#include "trace_io.hpp"
#include "trace_model.hpp"

namespace specsim {

class AdapterError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct StructLogRecord {
    std::uint64_t pc{0};
    std::string op;
    std::uint64_t gas{0};
    std::uint64_t gas_cost{0};
    std::uint32_t depth{1};
    std::vector<std::string> stack;  // top is last
};

struct TxEnvelope {
    std::string id;
    std::optional<Address> to;
    std::uint64_t block_number{0};
    std::uint32_t index{0};
    TxKind kind{TxKind::kContractCall};
    std::uint64_t gas{0};  // gas_total for value transfers
};

// Accepts "0x"-prefixed or bare hex of any case, up to 64 digits.
inline std::optional<StorageKey> parse_word(std::string_view text) {
    if (text.starts_with("0x") || text.starts_with("0X")) text.remove_prefix(2);
    if (text.empty() || text.size() > 64) return std::nullopt;
    std::string padded(64 - text.size(), '0');
    for (char c : text) padded.push_back(static_cast<char>(c >= 'A' && c <= 'F' ? c - 'A' + 'a' : c));
    return StorageKey::from_hex(padded);
}

inline Address word_to_address(const StorageKey& word) {
    Address a;
    std::copy(word.bytes.end() - 20, word.bytes.end(), a.bytes.begin());
    return a;
}

inline std::optional<Address> parse_address(std::string_view text) {
    if (text.starts_with("0x") || text.starts_with("0X")) text.remove_prefix(2);
    if (text.size() != 40) return std::nullopt;
    auto w = parse_word(text);
    if (!w) return std::nullopt;
    return word_to_address(*w);
}

inline Address synthetic_create_address(const std::string& tx_id, std::uint64_t n) {
    const std::string label = "create:" + tx_id + ":" + std::to_string(n);
    std::uint64_t h[3];
    h[0] = fnv1a64(label);
    h[1] = splitmix64(h[0]);
    h[2] = splitmix64(h[1]);
    Address a;
    for (std::size_t i = 0; i < 20; ++i) a.bytes[i] = static_cast<std::uint8_t>(h[i / 8] >> (56 - 8 * (i % 8)));
    return a;
}

inline std::vector<StructLogRecord> parse_struct_logs(const nlohmann::json& doc) {
    const nlohmann::json* logs = &doc;
    if (doc.is_object()) {
        const auto& body = doc.contains("result") ? doc.at("result") : doc;
        if (!body.contains("structLogs")) throw AdapterError("trace document has no structLogs");
        logs = &body.at("structLogs");
    }
    if (!logs->is_array()) throw AdapterError("structLogs must be an array");
    std::vector<StructLogRecord> out;
    out.reserve(logs->size());
    try {
        for (const auto& r : *logs) {
            StructLogRecord rec;
            rec.pc = r.at("pc").get<std::uint64_t>();
            rec.op = r.at("op").get<std::string>();
            rec.gas = r.at("gas").get<std::uint64_t>();
            rec.gas_cost = r.at("gasCost").get<std::uint64_t>();
            const auto depth = r.at("depth").get<std::int64_t>();
            if (depth < 1) throw AdapterError("pc " + std::to_string(rec.pc) + ": depth below 1");
            rec.depth = static_cast<std::uint32_t>(depth);
            if (r.contains("stack") && !r.at("stack").is_null()) rec.stack = r.at("stack").get<std::vector<std::string>>();
            out.push_back(std::move(rec));
        }
    } catch (const nlohmann::json::exception& e) {
        throw AdapterError(std::string("malformed structLog record: ") + e.what());
    }
    return out;
}

inline Transaction convert_tx(const TxEnvelope& env, const std::vector<StructLogRecord>& records) {
    Transaction tx;
    tx.id = env.id;
    tx.index = env.index;
    tx.kind = env.kind;
    if (env.kind == TxKind::kValueTransfer) {
        if (!records.empty()) throw AdapterError("tx " + env.id + ": value transfer with bytecode trace");
        tx.gas_total = env.gas;
        return tx;
    }
    if (records.empty()) return tx;
    if (!env.to) throw AdapterError("tx " + env.id + ": contract call without recipient");

    std::vector<Address> context{*env.to};
    std::optional<Address> entering;
    std::uint64_t creates = 0;
    std::optional<Op> run;

    const auto fail = [&](const StructLogRecord& r, const std::string& why) {
        return AdapterError("tx " + env.id + " pc " + std::to_string(r.pc) + ": " + why);
    };
    const auto flush = [&] {
        if (run) tx.ops.push_back(*run);
        run.reset();
    };
    const auto stack_word = [&](const StructLogRecord& r, std::size_t from_top) {
        if (r.stack.size() <= from_top) throw fail(r, r.op + " is missing a stack operand");
        auto w = parse_word(r.stack[r.stack.size() - 1 - from_top]);
        if (!w) throw fail(r, "bad stack word '" + r.stack[r.stack.size() - 1 - from_top] + "'");
        return *w;
    };

    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        const std::uint32_t expected = static_cast<std::uint32_t>(context.size());
        if (r.depth == expected + 1) {
            if (!entering) throw fail(r, "depth increased without a call");
            context.push_back(*entering);
        } else if (r.depth + 1 == expected && r.depth >= 1) {
            context.pop_back();
        } else if (r.depth != expected) {
            throw fail(r, "depth jumped from " + std::to_string(expected) + " to " + std::to_string(r.depth));
        }
        entering.reset();

        if (r.op == "SLOAD" || r.op == "SSTORE") {
            flush();
            const StorageCell cell{context.back(), stack_word(r, 0)};
            tx.ops.push_back(r.op == "SLOAD" ? Op::read(cell, r.gas_cost) : Op::write(cell, r.gas_cost));
            continue;
        }
        if (r.op == "CALL" || r.op == "STATICCALL") {
            entering = word_to_address(stack_word(r, 1));
        } else if (r.op == "DELEGATECALL" || r.op == "CALLCODE") {
            entering = context.back();
        } else if (r.op == "CREATE" || r.op == "CREATE2") {
            entering = synthetic_create_address(env.id, creates++);
        }
        if (!run) run = Op::other(0, 0);
        run->gas += r.gas_cost;
        run->instructions += 1;
    }
    flush();
    tx.recompute_totals();
    return tx;
}

inline Block convert_block(std::uint64_t number, const std::vector<TxEnvelope>& envelopes,
                           const std::vector<std::vector<StructLogRecord>>& records) {
    if (envelopes.size() != records.size()) throw AdapterError("envelope and trace counts differ");
    Block block;
    block.number = number;
    for (std::size_t i = 0; i < envelopes.size(); ++i) {
        if (envelopes[i].index != i) {
            throw AdapterError("block " + std::to_string(number) + ": tx " + envelopes[i].id + " has index " +
                               std::to_string(envelopes[i].index) + " at position " + std::to_string(i));
        }
        try {
            block.transactions.push_back(convert_tx(envelopes[i], records[i]));
        } catch (const AdapterError&) {
            throw;
        } catch (const std::exception& e) {
            throw AdapterError("tx " + envelopes[i].id + ": " + e.what());
        }
    }
    try {
        validate_block(block);
    } catch (const ValidationError& e) {
        throw AdapterError(e.what());
    }
    return block;
}

// Block sidecar: {"number": N, "transactions": [{"id", "index", "kind":
// "call"|"transfer", "to", "trace": <path relative to the sidecar>, "gas"}]}.
// "trace" defaults to "<id>.json"; transfers need only "gas".
inline Block convert_sidecar(const std::string& sidecar_path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(sidecar_path));
    } catch (const nlohmann::json::exception& e) {
        throw AdapterError("'" + sidecar_path + "': " + e.what());
    }
    const auto dir = std::filesystem::path(sidecar_path).parent_path();
    std::vector<TxEnvelope> envs;
    std::vector<std::vector<StructLogRecord>> recs;
    try {
        const auto number = doc.at("number").get<std::uint64_t>();
        for (const auto& t : doc.at("transactions")) {
            TxEnvelope env;
            env.id = t.at("id").get<std::string>();
            env.block_number = number;
            env.index = t.at("index").get<std::uint32_t>();
            const auto kind = t.at("kind").get<std::string>();
            if (kind == "transfer") {
                env.kind = TxKind::kValueTransfer;
                env.gas = t.value("gas", std::uint64_t{0});
                envs.push_back(env);
                recs.emplace_back();
                continue;
            }
            if (kind != "call") throw AdapterError("tx " + env.id + ": unknown kind '" + kind + "'");
            env.to = parse_address(t.at("to").get<std::string>());
            if (!env.to) throw AdapterError("tx " + env.id + ": bad recipient address");
            const auto trace_path = dir / t.value("trace", env.id + ".json");
            nlohmann::json trace_doc;
            try {
                trace_doc = nlohmann::json::parse(read_file(trace_path.string()));
            } catch (const nlohmann::json::exception& e) {
                throw AdapterError("'" + trace_path.string() + "': " + e.what());
            }
            envs.push_back(env);
            recs.push_back(parse_struct_logs(trace_doc));
        }
        return convert_block(number, envs, recs);
    } catch (const nlohmann::json::exception& e) {
        throw AdapterError("'" + sidecar_path + "': " + e.what());
    }
}

}  // namespace specsim
