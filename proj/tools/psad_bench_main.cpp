#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "psad/bench.hpp"
#include "psad/errors.hpp"
#include "psad/problems.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : csv) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Benchmark harness: gradient and Hessian cost ratios (kappa1, kappa2) over the "
                 "built-in partially separable test problems"};
    app.name("psad-bench");

    std::string problems_csv;
    std::string sizes_csv;
    int trials = 5;
    std::string mode = "exact";
    std::string method = "both";
    std::string format = "table";
    std::string out_path;
    std::uint64_t seed = 0;
    bool have_seed = false;
    bool serial = false;
    bool ops_only = false;
    bool list_problems = false;

    app.add_option("--problems", problems_csv, "Comma-separated problem names (default: all)");
    app.add_option("--sizes", sizes_csv, "Comma-separated sizes (default: 250,1000,4000)");
    app.add_option("--trials", trials, "Timing trials per measurement (>= 3)");
    app.add_option("--mode", mode, "Hessian-vector mode: exact|difference")
        ->check(CLI::IsMember({"exact", "difference"}));
    app.add_option("--method", method, "Symmetric recovery: direct|substitution|both")
        ->check(CLI::IsMember({"direct", "substitution", "both"}));
    app.add_option("--format", format, "Output format: table|csv|json")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    app.add_option("--seed", seed, "Deterministic seed (fallback: PSAD_SEED env var)")
        ->each([&](const std::string&) { have_seed = true; });
    app.add_option("--out", out_path, "Output path (default: stdout)");
    app.add_flag("--serial", serial, "Run fully serial for clean wall-clock timing");
    app.add_flag("--ops-only", ops_only,
                 "Skip wall timing; kappa columns carry op-count ratios (deterministic)");
    app.add_flag("--list", list_problems, "List catalog problems and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    if (list_problems) {
        for (const psad::ProblemSpec& spec : psad::catalog())
            std::cout << spec.name << " (rho_max " << spec.declared_rho_max << ", "
                      << (spec.family == psad::ProblemFamily::variational ? "variational"
                                                                          : "nonlinear-equations")
                      << ")\n";
        return 0;
    }

    psad::bench::BenchOptions options;
    options.problems = split_list(problems_csv);
    options.trials = trials;
    options.mode = mode == "exact" ? psad::HvpMode::exact : psad::HvpMode::difference;
    options.method = method == "both" ? psad::bench::MethodChoice::both
                     : method == "direct" ? psad::bench::MethodChoice::direct
                                          : psad::bench::MethodChoice::substitution;
    options.serial = serial;
    options.ops_only = ops_only;

    if (!sizes_csv.empty()) {
        options.sizes.clear();
        for (const std::string& tok : split_list(sizes_csv)) {
            try {
                options.sizes.push_back(std::stoi(tok));
            } catch (const std::exception&) {
                std::cerr << "invalid size: " << tok << "\n";
                return kExitUsage;
            }
        }
    }
    if (have_seed) {
        options.seed = seed;
    } else if (const char* env = std::getenv("PSAD_SEED")) {
        try {
            options.seed = std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "invalid PSAD_SEED: " << env << "\n";
            return kExitUsage;
        }
    }

    const psad::bench::OutputFormat fmt = format == "table" ? psad::bench::OutputFormat::table
                                          : format == "csv" ? psad::bench::OutputFormat::csv
                                                            : psad::bench::OutputFormat::json;

    psad::bench::BenchResult result;
    try {
        result = psad::bench::run_bench(options);
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        psad::bench::emit_to_path(result, psad::bench::standard_summaries(result), fmt, out_path);
    } catch (const psad::io_error& e) {
        std::cerr << e.what() << "\n";
        return kExitIo;
    }

    if (!result.failures.empty()) {
        for (const auto& f : result.failures)
            std::cerr << "failure: " << f.problem << " n=" << f.n << ": " << f.error << "\n";
        return kExitNumerical;
    }
    return 0;
}
