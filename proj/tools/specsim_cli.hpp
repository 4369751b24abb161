// Copyright 2026 The specsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// specsim command line: convert, generate, simulate, report, sweep.
// Data goes to files (or stdout when no --out is given); progress and errors
// go to the diagnostic stream. Exit status: 0 ok, 1 input error, 2 usage.

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <specsim/specsim.hpp>

namespace specsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

    inline std::size_t default_jobs() {
        if (const char* env = std::getenv("SPECSIM_JOBS")) {
            try {
                const auto n = std::stoul(env);
                if (n >= 1) return n;
            } catch (const std::exception&) {
            }
        }
        return 1;
    }

    inline nlohmann::json result_document(const ExperimentResult& r) {
        nlohmann::json doc;
        doc["key"] = r.key;
        doc["exclusion"] = r.exclusion;
        doc["config"] = config_to_json(r.config);
        doc["report"] = report_to_json(r.report);
        return doc;
    }

    // Writes <key>.json, <key>.speedup.csv, <key>.hotspots.csv, <key>.blocks.csv
    // and returns the index entry.
    inline nlohmann::json write_result(const std::filesystem::path& dir, const ExperimentResult& r) {
        const auto file = [&](const std::string& suffix) { return r.key + suffix; };
        write_file((dir / file(".json")).string(), result_document(r).dump(2) + "\n");
        write_file((dir / file(".speedup.csv")).string(), speedup_csv(r.report));
        write_file((dir / file(".hotspots.csv")).string(), hotspot_csv(r.report));
        write_file((dir / file(".blocks.csv")).string(), blocks_csv(r.blocks));
        nlohmann::json entry;
        entry["key"] = r.key;
        entry["report"] = file(".json");
        entry["speedup_csv"] = file(".speedup.csv");
        entry["hotspots_csv"] = file(".hotspots.csv");
        entry["blocks_csv"] = file(".blocks.csv");
        return entry;
    }

    inline void ensure_dir(const std::string& dir) {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
    }

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Speculative parallel execution simulator for blockchain transaction traces", "specsim"};
    app.require_subcommand(1);
    app.fallthrough();

    std::uint64_t seed = 0;
    std::string out_path;
    bool quiet = false;
    std::size_t jobs = detail::default_jobs();
    app.add_option("--seed", seed, "Random seed for generate");
    app.add_option("--out", out_path, "Output file (convert, generate) or directory (simulate, sweep)");
    app.add_flag("--quiet", quiet, "Suppress progress output");
    app.add_option("--jobs", jobs, "Worker threads (default $SPECSIM_JOBS or 1)")->check(CLI::PositiveNumber);

    // convert
    auto* convert = app.add_subcommand("convert", "Convert structLog traces (one sidecar per block) to a trace file");
    std::vector<std::string> sidecars;
    convert->add_option("sidecars", sidecars, "Block sidecar JSON files, in block order")->required();

    // generate
    auto* gen = app.add_subcommand("generate", "Generate a seeded synthetic trace");
    std::string gen_manifest;
    gen->add_option("--manifest", gen_manifest, "Generator parameter file (key = value); flags override it");
    // flag -> generator key; spread-valued keys take "mean" or "mean,spread"
    const std::vector<std::pair<std::string, std::string>> gen_keys{
        {"--blocks", "blocks"},
        {"--first-block", "first_block"},
        {"--calls-per-block", "calls_per_block"},
        {"--transfers-per-block", "transfers_per_block"},
        {"--ops-per-call", "ops_per_call"},
        {"--contracts", "contracts"},
        {"--keys-per-contract", "keys_per_contract"},
        {"--skew", "contract_skew"},
        {"--write-ratio", "write_ratio"},
        {"--other-gas", "other_gas"},
        {"--read-gas", "read_gas"},
        {"--write-gas", "write_gas"},
        {"--transfer-gas", "transfer_gas"},
        {"--hot-fraction", "hot_fraction"},
        {"--hot-keys", "hot_keys"},
    };
    KeyValues gen_flags;
    for (const auto& [flag, key] : gen_keys) gen->add_option(flag, gen_flags[key], "Generator key '" + key + "'");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Simulate one configuration over a trace");
    std::string trace_path;
    SimConfig cfg;
    std::string locks = "rw";
    std::string proxy = "gas";
    std::string clock = "instr";
    std::vector<std::string> exclude;
    std::size_t exclude_top = 0;
    std::size_t stride = 1;
    AggregateOptions agg;
    sim->add_option("--trace", trace_path, "Trace file (.jsonl or .jsonl.gz)")->required();
    sim->add_option("--threads", cfg.threads, "Simulated threads (default 16)")->check(CLI::PositiveNumber);
    sim->add_option("--locks", locks, "rw|mutex");
    sim->add_option("--phases", cfg.phases, "Concurrent phases before the sequential one (default 1)")->check(CLI::PositiveNumber);
    sim->add_option("--proxy", proxy, "gas|instr");
    sim->add_option("--clock", clock, "instr|proxy");
    sim->add_flag("--predictor", cfg.predictor, "Perfect conflict prediction");
    sim->add_flag("--include-transfers", cfg.include_transfers, "Simulate value transfers too");
    auto* excl_opt = sim->add_option("--exclude", exclude, "Contract addresses whose calls are dropped")->delimiter(',');
    sim->add_option("--exclude-top", exclude_top, "Drop calls to the k most conflicting contracts")
        ->check(CLI::PositiveNumber)
        ->excludes(excl_opt);
    sim->add_option("--stride", stride, "Simulate every n-th block")->check(CLI::PositiveNumber);
    sim->add_option("--top-k", agg.top_k, "Contracts listed in the ranking")->check(CLI::PositiveNumber);

    // report
    auto* rep = app.add_subcommand("report", "Summarize report files written by simulate or sweep");
    std::vector<std::string> report_files;
    std::string format = "text";
    rep->add_option("reports", report_files, "Report JSON files")->required();
    rep->add_option("--format", format, "text|csv")->check(CLI::IsMember({"text", "csv"}));

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Run an experiment matrix from a manifest");
    std::string manifest_path;
    sweep->add_option("--manifest", manifest_path, "Experiment manifest")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    const auto progress = [&](const std::string& msg) {
        if (!quiet) err << msg << '\n';
    };
    const auto emit = [&](const std::string& data) {
        if (out_path.empty()) {
            out << data;
        } else {
            write_file(out_path, data);
        }
    };

    try {
        if (*convert) {
            Trace trace;
            for (const auto& s : sidecars) {
                progress("converting " + s);
                trace.push_back(convert_sidecar(s));
            }
            validate_trace(trace);
            std::ostringstream ss;
            write_trace(trace, ss);
            emit(ss.str());
        } else if (*gen) {
            KeyValues kv = gen_manifest.empty() ? KeyValues{} : parse_key_values(read_file(gen_manifest));
            for (const auto& [flag, key] : gen_keys) {
                if (gen->count(flag) > 0) kv[key] = gen_flags[key];
            }
            if (app.count("--seed") > 0 || !kv.contains("seed")) kv["seed"] = std::to_string(seed);
            GenParams gp;
            apply_gen_key_values(gp, kv);
            gp.validate();
            progress("generating " + std::to_string(gp.blocks) + " blocks (seed " + std::to_string(gp.seed) + ")");
            std::ostringstream ss;
            write_trace(generate(gp, jobs), ss);
            emit(ss.str());
        } else if (*sim) {
            cfg.lock_mode = parse_lock_mode(locks);
            cfg.proxy = parse_proxy(proxy);
            cfg.clock = parse_clock(clock);
            ExclusionSpec excl = ExclusionSpec::none();
            if (!exclude.empty()) {
                std::set<Address> contracts;
                for (const auto& a : exclude) {
                    auto addr = parse_address(a);
                    if (!addr) throw std::invalid_argument("bad contract address '" + a + "'");
                    contracts.insert(*addr);
                }
                excl = ExclusionSpec::named("custom", std::move(contracts));
            } else if (exclude_top > 0) {
                excl = ExclusionSpec::top(exclude_top);
            }
            ExperimentMatrix mx;
            mx.thread_counts = {cfg.threads};
            mx.lock_modes = {cfg.lock_mode};
            mx.phase_counts = {cfg.phases};
            mx.proxies = {cfg.proxy};
            mx.clocks = {cfg.clock};
            mx.predictor = {cfg.predictor};
            mx.exclusions = {excl};
            mx.include_transfers = cfg.include_transfers;
            mx.stride = stride;
            mx.report = agg;

            progress("reading " + trace_path);
            const auto trace = read_trace_file(trace_path);
            const auto results = run_experiment(trace, mx, jobs, progress);
            const auto& r = results.begin()->second;
            if (out_path.empty()) {
                out << detail::result_document(r).dump(2) << '\n';
            } else {
                detail::ensure_dir(out_path);
                detail::write_result(out_path, r);
            }
            progress("weighted speed-up " + format_double(r.report.weighted_speedup) + ", conflict rate " +
                     format_double(r.report.weighted_conflict_rate));
        } else if (*rep) {
            std::vector<std::pair<std::string, AggregateReport>> rows;
            for (const auto& f : report_files) {
                nlohmann::json doc;
                try {
                    doc = nlohmann::json::parse(read_file(f));
                    rows.emplace_back(doc.at("key").get<std::string>(), report_from_json(doc.at("report")));
                } catch (const nlohmann::json::exception& e) {
                    throw std::invalid_argument("'" + f + "': " + e.what());
                }
            }
            if (format == "csv") {
                out << "key,blocks,calls,aborts,weighted_speedup,weighted_conflict_rate,slowdown_fraction,"
                       "hotspot_tail_ge5\n";
                for (const auto& [key, r] : rows) {
                    out << key << ',' << r.blocks << ',' << r.total_calls << ',' << r.total_aborts << ','
                        << format_double(r.weighted_speedup) << ',' << format_double(r.weighted_conflict_rate) << ','
                        << format_double(r.slowdown_fraction) << ',' << format_double(r.hotspot_tail_fraction(5))
                        << '\n';
                }
            } else {
                for (const auto& [key, r] : rows) {
                    out << key << '\n';
                    out << "  blocks            " << r.blocks << " (" << r.active_blocks << " with transactions)\n";
                    out << "  contract calls    " << r.total_calls << ", aborted " << r.total_aborts << '\n';
                    out << std::fixed << std::setprecision(4);
                    out << "  weighted speed-up " << r.weighted_speedup << '\n';
                    out << "  conflict rate     " << r.weighted_conflict_rate << '\n';
                    out << "  slowed-down share " << r.slowdown_fraction << '\n';
                    out << "  cells >=5 confl.  " << r.hotspot_tail_fraction(5) << '\n';
                    out.unsetf(std::ios::floatfield);
                    for (const auto& c : r.top_contracts) {
                        out << "  hot contract      " << c.contract.hex() << " " << c.conflicts << '\n';
                    }
                }
            }
        } else if (*sweep) {
            auto manifest = load_experiment_manifest(manifest_path);
            if (!out_path.empty()) manifest.out_dir = out_path;
            if (manifest.trace_path.empty()) throw ManifestError("manifest has no 'trace'");
            if (manifest.out_dir.empty()) throw ManifestError("manifest has no 'out' and no --out given");
            progress("reading " + manifest.trace_path);
            const auto trace = read_trace_file(manifest.trace_path);
            const auto results = run_experiment(trace, manifest.matrix, jobs, progress);
            detail::ensure_dir(manifest.out_dir);
            nlohmann::json index;
            index["stride"] = manifest.matrix.stride;
            index["blocks"] = trace.size();
            auto entries = nlohmann::json::array();
            for (const auto& [key, r] : results) entries.push_back(detail::write_result(manifest.out_dir, r));
            index["configs"] = std::move(entries);
            write_file((std::filesystem::path(manifest.out_dir) / "index.json").string(), index.dump(2) + "\n");
            progress("wrote " + std::to_string(results.size()) + " reports to " + manifest.out_dir);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitOk;
}

}  // namespace specsim::cli
