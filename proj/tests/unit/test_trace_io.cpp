// Copyright 2026 The specsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "support/fixtures.hpp"

namespace specsim {

namespace {

    Trace read_string(const std::string& s) {
        std::istringstream in(s);
        return read_trace(in);
    }

    std::string write_string(const Trace& t) {
        std::ostringstream out;
        write_trace(t, out);
        return out.str();
    }

}  // namespace

TEST_CASE("read_trace on an empty stream", "[trace-io]") {
    CHECK(read_string("").empty());
    CHECK(read_string("\n\n").empty());
}

TEST_CASE("single value-transfer block", "[trace-io]") {
    const std::string line =
        R"({"number":1,"transactions":[{"id":"0xaa","index":0,"kind":"transfer","gas_total":21000,"instr_total":0,"ops":[]}]})";
    const auto trace = read_string(line + "\n");
    REQUIRE(trace.size() == 1);
    CHECK(trace[0].number == 1);
    REQUIRE(trace[0].transactions.size() == 1);
    CHECK(trace[0].transactions[0].kind == TxKind::kValueTransfer);
    CHECK(trace[0].transactions[0].gas_total == 21000);
    CHECK(write_string(trace) == line + "\n");
}

TEST_CASE("canonical key order", "[trace-io]") {
    const auto line = format_block_line(test::g1_block());
    CHECK(line.starts_with(R"({"number":1,"transactions":[{"id":"T1","index":0,"kind":"call","gas_total":30,"instr_total":3,"ops":[{"kind":"o","gas":5,"n":1},{"kind":"w","contract":"000000000000000000000000000000000000c001","key":"0000000000000000000000000000000000000000000000000000000000000001","gas":20,"n":1})"));
    CHECK(line.find(' ') == std::string::npos);
}

TEST_CASE("gas_total mismatch is a validation error naming the tx", "[trace-io]") {
    const std::string line =
        R"({"number":4,"transactions":[{"id":"0xbeef","index":0,"kind":"call","gas_total":99,"instr_total":1,"ops":[{"kind":"o","gas":5,"n":1}]}]})";
    CHECK_THROWS_MATCHES(read_string(line), ValidationError, Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("0xbeef")));
}

TEST_CASE("malformed lines carry their line number", "[trace-io]") {
    const auto good = format_block_line(test::g1_block());
    auto check_line = [](const std::string& text, std::size_t expected) {
        try {
            read_string(text);
            FAIL("expected TraceFormatError");
        } catch (const TraceFormatError& e) {
            CHECK(e.line() == expected);
        }
    };
    check_line(good + "\n{not json\n", 2);
    check_line(good + "\n\n" + R"({"number":5})" + "\n", 3);
    check_line(R"({"number":1,"transactions":[{"id":"a","index":0,"kind":"call","gas_total":1,"instr_total":1,"ops":[{"kind":"x","gas":1,"n":1}]}]})", 1);
    check_line(R"({"number":1,"transactions":[{"id":"a","index":0,"kind":"call","gas_total":1,"instr_total":1,"ops":[{"kind":"r","contract":"ABC","key":"00","gas":1,"n":1}]}]})", 1);
    check_line(R"({"number":-1,"transactions":[]})", 1);
}

TEST_CASE("write_trace is byte-stable", "[trace-io]") {
    const Trace g1{test::g1_block()};
    CHECK(write_string({}).empty());
    CHECK(write_string(g1) == write_string(g1));
}

TEST_CASE("read_trace(write_trace(B)) == B", "[trace-io][property]") {
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 50; ++iter) {
        Trace trace;
        for (std::uint64_t b = 0; b < 4; ++b) {
            auto block = test::random_block(rng, 10 * iter + b + 1, 6, 50);
            if (b == 2) {
                block.transactions.push_back(test::transfer("xfer", 21000 + b));
                block.transactions.back().index = static_cast<std::uint32_t>(block.transactions.size() - 1);
            }
            trace.push_back(std::move(block));
        }
        CHECK(read_string(write_string(trace)) == trace);
    }
}

TEST_CASE("gzip trace files", "[trace-io]") {
    test::TempDir dir("trace-io");
    GenParams p;
    p.blocks = 5;
    const auto trace = generate(p);
    write_trace_file(dir / "t.jsonl.gz", trace);
    write_trace_file(dir / "t.jsonl", trace);
    CHECK(read_trace_file(dir / "t.jsonl.gz") == trace);
    CHECK(read_file(dir / "t.jsonl.gz") == read_file(dir / "t.jsonl"));
    CHECK_THROWS_WITH(read_trace_file(dir / "missing.jsonl"), Catch::Matchers::ContainsSubstring("missing.jsonl"));
}

}  // namespace specsim
