// Copyright 2026 The specsim Authors
// SPDX-License-Identifier: Apache-2.0

// Simulates a trace file (or a small generated workload) under a few
// configurations and prints the per-block speed-up.
//
//   quickstart [trace.jsonl[.gz]]

#include <iostream>

#include <specsim/specsim.hpp>

int main(int argc, char** argv) {
    using namespace specsim;
    try {
        Trace trace;
        if (argc > 1) {
            trace = read_trace_file(argv[1]);
        } else {
            GenParams p;
            p.blocks = 5;
            p.seed = 7;
            trace = generate(p);
        }

        for (std::uint32_t threads : {2u, 16u}) {
            for (auto mode : {LockMode::kReadWrite, LockMode::kMutex}) {
                SimConfig cfg;
                cfg.threads = threads;
                cfg.lock_mode = mode;
                std::cout << "threads=" << threads << " locks=" << to_string(mode) << "\n";
                for (const auto& block : trace) {
                    const auto outcome = simulate_block(block, cfg);
                    const auto m = block_metrics(outcome);
                    std::cout << "  block " << block.number << ": speed-up " << m.speedup.to_string() << " ("
                              << format_double(m.speedup.value()) << "), " << m.aborts << "/" << m.calls
                              << " calls aborted\n";
                }
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "quickstart: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
