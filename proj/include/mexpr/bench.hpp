#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mexpr/eval.hpp"
#include "mexpr/mst.hpp"

namespace mexpr {

struct BenchResult {
    std::string backend;
    std::uint64_t iterations = 0; // evaluations per batch
    double total_seconds = 0.0;   // over all measured batches
    double mean_ns = 0.0;         // per evaluation, mean across batches
    double best_ns = 0.0;         // per evaluation, fastest batch (least
                                  // scheduler interference)
    double stddev_ns = 0.0;       // across batches
    double throughput_hz = 0.0;   // evaluations per second
    double checksum = 0.0;        // sum of results over one batch
};

struct BenchReport {
    std::string environment;
    std::vector<BenchResult> results;
};

/// Built-in benchmark formula: 2*x + 2/x - 16/sin(x).
const Mst& builtin_bench_tree();
std::string_view builtin_bench_text();

/// Statically compiled implementation of the built-in formula; the upper
/// baseline the dynamic backends are compared against.
double raw_builtin(double x);

/// Runs the requested backends over one tree and one binding set. Each
/// backend evaluates `iterations` times per batch, with `warmup_batches`
/// unmeasured batches followed by `measured_batches` timed ones. Backends run
/// one at a time, single-threaded, in the order given.
///
/// Known backend names: interpret, functional, compiled, real, raw. The raw
/// row only applies when the tree structurally equals the built-in formula;
/// otherwise it is silently dropped from the report.
BenchReport run_benchmark(const Mst& tree, const Bindings<double>& bindings,
                          std::uint64_t iterations,
                          const std::vector<std::string>& backends,
                          int warmup_batches = 5, int measured_batches = 5);

} // namespace mexpr
