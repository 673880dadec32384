#ifndef VPND_BENCH_HPP
#define VPND_BENCH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vpnd/cost_fn.hpp"
#include "vpnd/rational.hpp"

namespace vpnd {

/// The approximation factor the benchmark gates on: 24.92 exactly.
inline const Rational kApproxRatioBound = Rational(2492, 100);

enum class ReportFormat { Csv, Json };

struct BenchOptions {
    std::vector<std::string> instance_paths;
    ConcaveCost cost_fn = ConcaveCost::identity();
    std::vector<std::uint64_t> seeds{1};
    int repetitions = 10;
    ReportFormat format = ReportFormat::Csv;
    /// When false (default) the ms column is 0 so report bodies are
    /// byte-identical across runs; timings go to the summary line instead.
    bool timing = false;
};

struct BenchRow {
    std::string instance;
    std::uint64_t seed = 0;
    Rational exact_linear;
    Rational cvpnd_value;
    std::optional<Rational> oracle_value;  // blank when over oracle caps
    Rational ratio;                        // vs oracle when present, else vs exact_linear
    std::optional<bool> feasible;          // blank when over verifier caps
    std::int64_t ms = 0;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    Rational max_ratio;   // max over rows
    bool all_feasible = true;
    /// False when a row whose lower bound is trustworthy (oracle value
    /// present, or a linear cost function, where exact_linear is the true
    /// optimum) has a ratio above kApproxRatioBound, or when any feasibility
    /// check fails; the CLI exit code is derived from this.
    bool ok = true;
    /// The serialized report in the requested format.
    std::string body;
};

/// Runs exact linear and concave solvers on every (instance, seed) pair,
/// compares against the brute-force tree oracle where the caps allow it, and
/// writes one row per pair. Rows are emitted in input order. Throws Error on
/// unreadable files; per-row oracle cap violations leave blank columns, they
/// are not fatal.
BenchReport run_bench(const BenchOptions& options);

/// Writes report.body to the path ("-" for stdout).
void write_report(const BenchReport& report, const std::string& out_path);

}  // namespace vpnd

#endif  // VPND_BENCH_HPP
