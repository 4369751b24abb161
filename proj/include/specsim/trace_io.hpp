// Copyright 2026 The specsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Line-delimited trace codec. One block per line, keys in canonical order:
//   {"number":N,"transactions":[{"id":..,"index":..,"kind":"call"|"transfer",
//    "gas_total":..,"instr_total":..,"ops":[{"kind":"r"|"w"|"o","contract":..,
//    "key":..,"gas":..,"n":..}]}]}
// OTHER ops ("o") omit contract and key. Paths ending in ".gz" are gzip streams.

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>
#include <zlib.h>

#include "trace_model.hpp"

namespace specsim {

// Malformed input line; carries the 1-based line number.
class TraceFormatError : public std::runtime_error {
  public:
    TraceFormatError(std::size_t line, const std::string& reason)
        : std::runtime_error("line " + std::to_string(line) + ": " + reason), line_{line} {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

// I/O failure on a named path.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

    using ojson = nlohmann::ordered_json;

    inline const nlohmann::json& field(const nlohmann::json& obj, const char* name) {
        if (!obj.is_object()) throw std::invalid_argument("expected an object");
        auto it = obj.find(name);
        if (it == obj.end()) throw std::invalid_argument(std::string("missing field '") + name + "'");
        return *it;
    }

    inline std::uint64_t uint_field(const nlohmann::json& obj, const char* name) {
        const auto& v = field(obj, name);
        if (!v.is_number_unsigned()) {
            if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
            throw std::invalid_argument(std::string("field '") + name + "' must be a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    inline std::string string_field(const nlohmann::json& obj, const char* name) {
        const auto& v = field(obj, name);
        if (!v.is_string()) throw std::invalid_argument(std::string("field '") + name + "' must be a string");
        return v.get<std::string>();
    }

    template <typename Bytes>
    Bytes hex_field(const nlohmann::json& obj, const char* name) {
        auto parsed = Bytes::from_hex(string_field(obj, name));
        if (!parsed) {
            throw std::invalid_argument(std::string("field '") + name + "' must be " +
                                        std::to_string(2 * Bytes::kSize) + " lowercase hex chars");
        }
        return *parsed;
    }

    inline Op op_from_json(const nlohmann::json& j) {
        const auto kind = string_field(j, "kind");
        Op op;
        if (kind == "r" || kind == "w") {
            op.kind = kind == "r" ? OpKind::kRead : OpKind::kWrite;
            op.cell.contract = hex_field<Address>(j, "contract");
            op.cell.key = hex_field<StorageKey>(j, "key");
        } else if (kind == "o") {
            op.kind = OpKind::kOther;
            if (j.contains("contract") || j.contains("key")) {
                throw std::invalid_argument("OTHER op must not carry a storage cell");
            }
        } else {
            throw std::invalid_argument("unknown op kind '" + kind + "'");
        }
        op.gas = uint_field(j, "gas");
        op.instructions = uint_field(j, "n");
        return op;
    }

    inline Transaction tx_from_json(const nlohmann::json& j) {
        Transaction tx;
        tx.id = string_field(j, "id");
        tx.index = static_cast<std::uint32_t>(uint_field(j, "index"));
        const auto kind = string_field(j, "kind");
        if (kind == "call") {
            tx.kind = TxKind::kContractCall;
        } else if (kind == "transfer") {
            tx.kind = TxKind::kValueTransfer;
        } else {
            throw std::invalid_argument("unknown tx kind '" + kind + "'");
        }
        tx.gas_total = uint_field(j, "gas_total");
        tx.instr_total = uint_field(j, "instr_total");
        const auto& ops = field(j, "ops");
        if (!ops.is_array()) throw std::invalid_argument("'ops' must be an array");
        tx.ops.reserve(ops.size());
        for (const auto& o : ops) tx.ops.push_back(op_from_json(o));
        return tx;
    }

    inline ojson op_to_json(const Op& op) {
        ojson j;
        switch (op.kind) {
            case OpKind::kRead: j["kind"] = "r"; break;
            case OpKind::kWrite: j["kind"] = "w"; break;
            case OpKind::kOther: j["kind"] = "o"; break;
        }
        if (op.touches_storage()) {
            j["contract"] = op.cell.contract.hex();
            j["key"] = op.cell.key.hex();
        }
        j["gas"] = op.gas;
        j["n"] = op.instructions;
        return j;
    }

}  // namespace detail

inline Block parse_block_line(const std::string& line) {
    const auto doc = nlohmann::json::parse(line);
    Block block;
    block.number = detail::uint_field(doc, "number");
    const auto& txs = detail::field(doc, "transactions");
    if (!txs.is_array()) throw std::invalid_argument("'transactions' must be an array");
    block.transactions.reserve(txs.size());
    for (const auto& t : txs) block.transactions.push_back(detail::tx_from_json(t));
    return block;
}

inline std::string format_block_line(const Block& block) {
    detail::ojson j;
    j["number"] = block.number;
    auto txs = detail::ojson::array();
    for (const auto& tx : block.transactions) {
        detail::ojson t;
        t["id"] = tx.id;
        t["index"] = tx.index;
        t["kind"] = tx.is_call() ? "call" : "transfer";
        t["gas_total"] = tx.gas_total;
        t["instr_total"] = tx.instr_total;
        auto ops = detail::ojson::array();
        for (const auto& op : tx.ops) ops.push_back(detail::op_to_json(op));
        t["ops"] = std::move(ops);
        txs.push_back(std::move(t));
    }
    j["transactions"] = std::move(txs);
    return j.dump();
}

// Reads every block in stream order. Blank lines are skipped.
inline Trace read_trace(std::istream& in) {
    Trace trace;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        Block block;
        try {
            block = parse_block_line(line);
        } catch (const nlohmann::json::exception& e) {
            throw TraceFormatError(lineno, e.what());
        } catch (const std::invalid_argument& e) {
            throw TraceFormatError(lineno, e.what());
        }
        validate_block(block);
        if (!trace.empty() && block.number <= trace.back().number) {
            throw ValidationError("block " + std::to_string(block.number) + " does not follow block " +
                                  std::to_string(trace.back().number));
        }
        trace.push_back(std::move(block));
    }
    return trace;
}

inline void write_trace(const Trace& trace, std::ostream& out) {
    for (const auto& block : trace) out << format_block_line(block) << '\n';
    if (!out) throw IoError("trace sink write failed");
}

namespace detail {

    inline bool has_gz_suffix(const std::string& path) {
        return path.size() >= 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
    }

    inline std::string read_gz(const std::string& path) {
        gzFile f = gzopen(path.c_str(), "rb");
        if (f == nullptr) throw IoError("cannot open '" + path + "'");
        std::string data;
        char buf[1 << 16];
        int n = 0;
        while ((n = gzread(f, buf, sizeof buf)) > 0) data.append(buf, static_cast<std::size_t>(n));
        const bool failed = n < 0;
        gzclose(f);
        if (failed) throw IoError("corrupt gzip stream in '" + path + "'");
        return data;
    }

    inline void write_gz(const std::string& path, const std::string& data) {
        gzFile f = gzopen(path.c_str(), "wb9");
        if (f == nullptr) throw IoError("cannot open '" + path + "' for writing");
        std::size_t off = 0;
        while (off < data.size()) {
            const auto chunk = static_cast<unsigned>(std::min<std::size_t>(data.size() - off, 1u << 20));
            if (gzwrite(f, data.data() + off, chunk) != static_cast<int>(chunk)) {
                gzclose(f);
                throw IoError("write failed on '" + path + "'");
            }
            off += chunk;
        }
        if (gzclose(f) != Z_OK) throw IoError("write failed on '" + path + "'");
    }

}  // namespace detail

inline std::string read_file(const std::string& path) {
    if (detail::has_gz_suffix(path)) return detail::read_gz(path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& data) {
    if (detail::has_gz_suffix(path)) {
        detail::write_gz(path, data);
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << data;
    if (!out.flush()) throw IoError("write failed on '" + path + "'");
}

inline Trace read_trace_file(const std::string& path) {
    std::istringstream in(read_file(path));
    return read_trace(in);
}

inline void write_trace_file(const std::string& path, const Trace& trace) {
    std::ostringstream out;
    write_trace(trace, out);
    write_file(path, out.str());
}

}  // namespace specsim
