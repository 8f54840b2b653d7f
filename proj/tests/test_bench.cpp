#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "psad/bench.hpp"
#include "psad/errors.hpp"

using namespace psad;
using namespace psad::bench;

namespace {

BenchOptions small_options() {
    BenchOptions opt;
    opt.problems = {"diag", "arrowhead", "quartic-chain"};
    opt.sizes = {40};
    opt.ops_only = true;
    opt.seed = 99;
    return opt;
}

} // namespace

TEST_CASE("quartile fixtures reproduce the published shape exactly") {
    const QuartileSummary s = summarize_values({1.3, 2.8, 4.5, 5.3, 7.8});
    CHECK(s.min == 1.3);
    CHECK(s.q1 == 2.8);
    CHECK(s.q2 == 4.5);
    CHECK(s.q3 == 5.3);
    CHECK(s.max == 7.8);
}

TEST_CASE("a single value collapses all five statistics") {
    const QuartileSummary s = summarize_values({3.25});
    CHECK(s.min == 3.25);
    CHECK(s.q1 == 3.25);
    CHECK(s.q2 == 3.25);
    CHECK(s.q3 == 3.25);
    CHECK(s.max == 3.25);
}

TEST_CASE("inclusive interpolation on four values") {
    const QuartileSummary s = summarize_values({1.0, 2.0, 3.0, 4.0});
    CHECK(s.q2 == 2.5);
    CHECK(s.q1 == 1.75);
    CHECK(s.q3 == 3.25);
}

TEST_CASE("summarize rejects empty input") {
    CHECK_THROWS_AS(summarize_values({}), std::invalid_argument);
    CHECK_THROWS_AS(summarize(std::vector<BenchRecord>{}, KappaFamily::kappa1),
                    std::invalid_argument);
}

TEST_CASE("run_bench validates usage preconditions") {
    BenchOptions opt = small_options();
    opt.trials = 2;
    opt.ops_only = false;
    CHECK_THROWS_AS(run_bench(opt), std::invalid_argument);

    BenchOptions unknown = small_options();
    unknown.problems = {"no-such-problem"};
    CHECK_THROWS_AS(run_bench(unknown), std::invalid_argument);
}

TEST_CASE("op-count records are deterministic across runs") {
    const BenchResult a = run_bench(small_options());
    const BenchResult b = run_bench(small_options());
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t k = 0; k < a.records.size(); ++k) {
        CHECK(a.records[k].ops_f == b.records[k].ops_f);
        CHECK(a.records[k].ops_grad == b.records[k].ops_grad);
        CHECK(a.records[k].ops_hess_dir == b.records[k].ops_hess_dir);
        CHECK(a.records[k].ops_hess_sub == b.records[k].ops_hess_sub);
        CHECK(a.records[k].p_jac == b.records[k].p_jac);
        CHECK(a.records[k].rho_max == b.records[k].rho_max);
    }
}

TEST_CASE("kappa2 dominates kappa1 on every record") {
    const BenchResult result = run_bench(small_options());
    for (const BenchRecord& r : result.records) {
        CHECK(r.kappa2_dir_ops >= r.kappa1_ops);
        CHECK(r.kappa2_sub_ops >= r.kappa1_ops);
    }
}

TEST_CASE("per-problem failures keep partial results and are reported") {
    BenchOptions opt;
    opt.problems = {"diag", "rod-like"};
    opt.sizes = {8}; // below the rod stencil
    opt.ops_only = true;
    const BenchResult result = run_bench(opt);
    REQUIRE(result.failures.size() == 1);
    CHECK(result.failures[0].problem == "rod-like");
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0].problem == "diag");
}

TEST_CASE("CSV output has the documented header and one row per record") {
    const BenchResult result = run_bench(small_options());
    std::ostringstream os;
    emit(result, standard_summaries(result), OutputFormat::csv, os);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header ==
          "problem,n,rho_max,p_jac,p_hess_dir,p_hess_sub,t_f,t_grad,t_hess_dir,t_hess_sub,"
          "ops_f,ops_grad,ops_hess_dir,ops_hess_sub,kappa1,kappa2_dir,kappa2_sub");
    int rows = 0;
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == static_cast<int>(result.records.size()));
}

TEST_CASE("JSON output round-trips the records") {
    const BenchResult result = run_bench(small_options());
    std::ostringstream os;
    emit(result, standard_summaries(result), OutputFormat::json, os);
    const nlohmann::json doc = nlohmann::json::parse(os.str());
    REQUIRE(doc.at("records").size() == result.records.size());
    for (std::size_t k = 0; k < result.records.size(); ++k) {
        const auto& rec = doc.at("records").at(k);
        CHECK(rec.at("problem").get<std::string>() == result.records[k].problem);
        CHECK(rec.at("n").get<int>() == result.records[k].n);
        CHECK(rec.at("ops_f").get<std::uint64_t>() == result.records[k].ops_f);
        CHECK(rec.at("kappa1").get<double>() == result.records[k].kappa1);
    }
    CHECK(doc.contains("summaries"));
    CHECK(doc.contains("environment"));
}

TEST_CASE("table output carries the quartile header") {
    const BenchResult result = run_bench(small_options());
    std::ostringstream os;
    emit(result, standard_summaries(result), OutputFormat::table, os);
    CHECK(os.str().find("min     q1     q2     q3    max") != std::string::npos);
    CHECK(os.str().find("Quartiles for kappa1") != std::string::npos);
}

TEST_CASE("emit_to_path rejects unwritable paths") {
    const BenchResult result = run_bench(small_options());
    CHECK_THROWS_AS(emit_to_path(result, standard_summaries(result), OutputFormat::json,
                                 "/nonexistent-dir/out.json"),
                    io_error);
}
