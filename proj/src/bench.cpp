#include "mexpr/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "mexpr/algebra.hpp"
#include "mexpr/compile.hpp"
#include "mexpr/parser.hpp"

namespace mexpr {

namespace {

inline void keep(double& v) {
    // keeps the value live so the evaluation loop cannot be elided
    asm volatile("" : : "g"(&v) : "memory");
}

struct BatchStats {
    double mean_ns = 0.0;
    double best_ns = 0.0;
    double stddev_ns = 0.0;
    double total_seconds = 0.0;
    double checksum = 0.0;
};

// templated so each backend gets its own specialized timing loop; a shared
// type-erased loop would add a uniform per-call cost that skews the ratios
// of the fast backends
template <class Eval>
BatchStats run_batches(const Eval& eval, std::uint64_t iterations,
                       int warmup_batches, int measured_batches) {
    using clock = std::chrono::steady_clock;
    auto run_one = [&]() {
        double sum = 0.0;
        // the per-iteration barrier stops the optimizer from hoisting any
        // part of an evaluation out of the loop; each iteration must do the
        // full computation
        for (std::uint64_t i = 0; i < iterations; ++i) {
            double v = eval();
            keep(v);
            sum += v;
        }
        return sum;
    };

    for (int i = 0; i < warmup_batches; ++i) {
        double s = run_one();
        keep(s);
    }

    std::vector<double> batch_ns;
    batch_ns.reserve(static_cast<std::size_t>(measured_batches));
    double checksum = 0.0;
    double total = 0.0;
    for (int i = 0; i < measured_batches; ++i) {
        auto t0 = clock::now();
        checksum = run_one();
        auto t1 = clock::now();
        double ns = std::chrono::duration<double, std::nano>(t1 - t0).count();
        batch_ns.push_back(ns / static_cast<double>(iterations));
        total += ns * 1e-9;
    }

    BatchStats stats;
    stats.total_seconds = total;
    stats.checksum = checksum;
    double mean = 0.0;
    for (double v : batch_ns)
        mean += v;
    mean /= static_cast<double>(batch_ns.size());
    stats.mean_ns = mean;
    stats.best_ns = *std::min_element(batch_ns.begin(), batch_ns.end());
    double var = 0.0;
    for (double v : batch_ns)
        var += (v - mean) * (v - mean);
    // sample stddev across batches; a single batch has none
    stats.stddev_ns = batch_ns.size() > 1
                          ? std::sqrt(var / static_cast<double>(batch_ns.size() - 1))
                          : 0.0;
    return stats;
}

} // namespace

const Mst& builtin_bench_tree() {
    static const Mst tree = parse(builtin_bench_text());
    return tree;
}

std::string_view builtin_bench_text() { return "2*x+2/x-16/sin(x)"; }

__attribute__((noinline)) double raw_builtin(double x) {
    return 2 * x + 2 / x - 16 / std::sin(x);
}

BenchReport run_benchmark(const Mst& tree, const Bindings<double>& bindings,
                          std::uint64_t iterations,
                          const std::vector<std::string>& backends,
                          int warmup_batches, int measured_batches) {
    const RealField& ctx = real_field();

    BenchReport report;
    report.environment = "build=" +
#ifdef NDEBUG
                         std::string("release")
#else
                         std::string("debug")
#endif
                         + " iterations=" + std::to_string(iterations) + " batches=" +
                         std::to_string(warmup_batches) + "+" +
                         std::to_string(measured_batches);

    auto add_row = [&](const std::string& name, const BatchStats& stats) {
        BenchResult row;
        row.backend = name;
        row.iterations = iterations;
        row.total_seconds = stats.total_seconds;
        row.mean_ns = stats.mean_ns;
        row.best_ns = stats.best_ns;
        row.stddev_ns = stats.stddev_ns;
        row.throughput_hz = stats.mean_ns > 0.0 ? 1e9 / stats.mean_ns : 0.0;
        row.checksum = stats.checksum;
        report.results.push_back(std::move(row));
    };

    for (const std::string& name : backends) {
        if (name == "interpret") {
            // same Expression wrapper as the functional row, so the two
            // late- and eager-bound tree backends are measured symmetrically
            auto expr = mst_expression(tree, ctx);
            add_row(name,
                    run_batches([&]() { return expr.invoke(bindings); }, iterations,
                                warmup_batches, measured_batches));
        } else if (name == "functional") {
            auto expr = build_functional(tree, ctx);
            add_row(name,
                    run_batches([&]() { return expr.invoke(bindings); }, iterations,
                                warmup_batches, measured_batches));
        } else if (name == "compiled") {
            auto prog = compile_generic(tree, ctx);
            add_row(name,
                    run_batches([&]() { return run_generic(prog, bindings); },
                                iterations, warmup_batches, measured_batches));
        } else if (name == "real") {
            auto prog = compile_real(tree, false);
            add_row(name,
                    run_batches([&]() { return run_real(prog, bindings); }, iterations,
                                warmup_batches, measured_batches));
        } else if (name == "raw") {
            if (tree != builtin_bench_tree())
                continue; // raw only exists for the built-in formula
            const double* x = bindings.find(Symbol("x"));
            if (!x)
                throw EvalError(EvalErrorKind::UnboundSymbol, "x", "real");
            add_row(name, run_batches([x]() { return raw_builtin(*x); }, iterations,
                                      warmup_batches, measured_batches));
        } else {
            throw std::invalid_argument("unknown backend `" + name + "`");
        }
    }
    return report;
}

} // namespace mexpr
