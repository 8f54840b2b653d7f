#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "psad/adcore.hpp"
#include "psad/symcolor.hpp"

namespace psad::bench {

enum class MethodChoice { direct, substitution, both };
enum class OutputFormat { table, csv, json };

struct BenchOptions {
    std::vector<std::string> problems; // empty = full catalog
    std::vector<int> sizes{250, 1000, 4000};
    int trials = 5;
    HvpMode mode = HvpMode::exact;
    MethodChoice method = MethodChoice::both;
    std::uint64_t seed = 20001101; // PSAD_SEED environment variable overrides the default
    bool serial = false;
    /// Skip wall-clock timing entirely; κ columns then carry the
    /// deterministic op-count ratios (for golden files and CI).
    bool ops_only = false;
};

/// One (problem, n) measurement. Wall times are medians of the trials; the
/// κ denominators use the maximum f-trial, the most conservative choice.
/// Op-count ratios are exact and deterministic.
struct BenchRecord {
    std::string problem;
    int n = 0;
    int rho_max = 0;
    int p_jac = 0;
    int p_hess_dir = 0;
    int p_hess_sub = 0;
    double t_f = 0, t_grad = 0, t_hess_dir = 0, t_hess_sub = 0;
    std::uint64_t ops_f = 0, ops_grad = 0, ops_hess_dir = 0, ops_hess_sub = 0;
    double kappa1 = 0, kappa2_dir = 0, kappa2_sub = 0;
    double kappa1_ops = 0, kappa2_dir_ops = 0, kappa2_sub_ops = 0;
};

struct BenchFailure {
    std::string problem;
    int n = 0;
    std::string error;
};

struct BenchResult {
    BenchOptions options;
    std::vector<BenchRecord> records;
    std::vector<BenchFailure> failures;
};

/// Runs the benchmark. Unknown problem names and trials < 3 are usage
/// errors (std::invalid_argument); per-problem construction or evaluation
/// failures are recorded in `failures` and leave partial results intact.
BenchResult run_bench(const BenchOptions& options);

struct QuartileSummary {
    double min = 0, q1 = 0, q2 = 0, q3 = 0, max = 0;
};

enum class KappaFamily { kappa1, kappa2_direct, kappa2_substitution };

/// Quartiles by inclusive linear interpolation over sorted values.
QuartileSummary summarize_values(std::vector<double> values);

QuartileSummary summarize(const std::vector<BenchRecord>& records, KappaFamily family,
                          bool use_op_counts = false);

using SummaryMap = std::map<std::string, QuartileSummary>;

SummaryMap standard_summaries(const BenchResult& result);

void emit(const BenchResult& result, const SummaryMap& summaries, OutputFormat format,
          std::ostream& out);

/// Writes to `path` ("" or "-" = stdout); unwritable paths raise io_error.
void emit_to_path(const BenchResult& result, const SummaryMap& summaries, OutputFormat format,
                  const std::string& path);

} // namespace psad::bench
