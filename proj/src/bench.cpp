#include "psad/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "psad/drivers.hpp"
#include "psad/errors.hpp"
#include "psad/problems.hpp"

namespace psad::bench {

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

template <class Fn>
void time_trials(int trials, Fn&& fn, double& median_out, double& max_out) {
    fn(); // warm-up, excluded
    std::vector<double> samples(trials);
    for (int t = 0; t < trials; ++t) {
        const auto begin = std::chrono::steady_clock::now();
        fn();
        const auto end = std::chrono::steady_clock::now();
        samples[t] = std::chrono::duration<double>(end - begin).count();
    }
    max_out = *std::max_element(samples.begin(), samples.end());
    median_out = median(std::move(samples));
}

BenchRecord measure(const ProblemSpec& spec, int requested_n, const BenchOptions& opt) {
    BenchRecord rec;
    rec.problem = spec.name;

    const ExtendedFunction F = spec.constructor(requested_n);
    const StandardStart start = spec.standard_start(requested_n);
    rec.n = F.n();

    const HybridState state = prepare_hybrid(F, start.x0, opt.seed);
    rec.rho_max = state.pattern.max_row_nnz();
    rec.p_jac = state.partition.p;
    rec.p_hess_dir = state.star.p;
    rec.p_hess_sub = state.acyclic.p;

    const bool direct = opt.method != MethodChoice::substitution;
    const bool subst = opt.method != MethodChoice::direct;

    OpCounter ops;
    eval_function_value(F, start.x0, &ops);
    rec.ops_f = ops.total();

    ops.reset();
    gradient_compressed(F, start.x0, state, &ops);
    rec.ops_grad = ops.total();

    if (direct) {
        ops.reset();
        hessian(F, start.x0, state, SymmetricMethod::direct, opt.mode, std::nullopt, &ops);
        rec.ops_hess_dir = ops.total();
    }
    if (subst) {
        ops.reset();
        hessian(F, start.x0, state, SymmetricMethod::substitution, opt.mode, std::nullopt, &ops);
        rec.ops_hess_sub = ops.total();
    }

    const double rho = rec.rho_max;
    const double ops_f = static_cast<double>(rec.ops_f);
    rec.kappa1_ops = static_cast<double>(rec.ops_grad) / (rho * ops_f);
    rec.kappa2_dir_ops = static_cast<double>(rec.ops_hess_dir) / (rho * rho * ops_f);
    rec.kappa2_sub_ops = static_cast<double>(rec.ops_hess_sub) / (rho * rho * ops_f);

    if (opt.ops_only) {
        rec.kappa1 = rec.kappa1_ops;
        rec.kappa2_dir = rec.kappa2_dir_ops;
        rec.kappa2_sub = rec.kappa2_sub_ops;
        return rec;
    }

    double t_f_max = 0.0;
    time_trials(opt.trials, [&] { eval_function_value(F, start.x0); }, rec.t_f, t_f_max);
    double ignored = 0.0;
    time_trials(opt.trials, [&] { gradient_compressed(F, start.x0, state); }, rec.t_grad, ignored);
    if (direct) {
        time_trials(opt.trials,
                    [&] { hessian(F, start.x0, state, SymmetricMethod::direct, opt.mode); },
                    rec.t_hess_dir, ignored);
    }
    if (subst) {
        time_trials(opt.trials,
                    [&] { hessian(F, start.x0, state, SymmetricMethod::substitution, opt.mode); },
                    rec.t_hess_sub, ignored);
    }

    rec.kappa1 = rec.t_grad / (rho * t_f_max);
    rec.kappa2_dir = rec.t_hess_dir / (rho * rho * t_f_max);
    rec.kappa2_sub = rec.t_hess_sub / (rho * rho * t_f_max);
    return rec;
}

} // namespace

BenchResult run_bench(const BenchOptions& options) {
    if (options.trials < 3) throw std::invalid_argument("at least 3 trials are required");
    if (options.sizes.empty()) throw std::invalid_argument("at least one size is required");

    std::vector<const ProblemSpec*> specs;
    if (options.problems.empty()) {
        for (const ProblemSpec& spec : catalog()) specs.push_back(&spec);
    } else {
        for (const std::string& name : options.problems) specs.push_back(&find_problem(name));
    }

    struct Task {
        const ProblemSpec* spec;
        int n;
    };
    std::vector<Task> tasks;
    for (const ProblemSpec* spec : specs)
        for (int n : options.sizes) tasks.push_back({spec, n});

    std::vector<BenchRecord> records(tasks.size());
    std::vector<std::string> errors(tasks.size());

    const unsigned workers =
        options.serial ? 1u
                       : std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                         static_cast<unsigned>(tasks.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= tasks.size()) return;
            try {
                records[k] = measure(*tasks[k].spec, tasks[k].n, options);
            } catch (const std::exception& e) {
                errors[k] = e.what();
                records[k].problem.clear();
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    BenchResult result;
    result.options = options;
    for (std::size_t k = 0; k < tasks.size(); ++k) {
        if (!errors[k].empty()) {
            result.failures.push_back({tasks[k].spec->name, tasks[k].n, errors[k]});
        } else {
            result.records.push_back(std::move(records[k]));
        }
    }
    return result;
}

QuartileSummary summarize_values(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("cannot summarize an empty value set");
    std::sort(values.begin(), values.end());
    auto quantile = [&](double q) {
        const double t = q * static_cast<double>(values.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(t);
        const double frac = t - static_cast<double>(lo);
        if (lo + 1 >= values.size()) return values.back();
        return values[lo] + frac * (values[lo + 1] - values[lo]);
    };
    QuartileSummary s;
    s.min = values.front();
    s.q1 = quantile(0.25);
    s.q2 = quantile(0.5);
    s.q3 = quantile(0.75);
    s.max = values.back();
    return s;
}

QuartileSummary summarize(const std::vector<BenchRecord>& records, KappaFamily family,
                          bool use_op_counts) {
    std::vector<double> values;
    values.reserve(records.size());
    for (const BenchRecord& r : records) {
        switch (family) {
            case KappaFamily::kappa1: values.push_back(use_op_counts ? r.kappa1_ops : r.kappa1); break;
            case KappaFamily::kappa2_direct:
                values.push_back(use_op_counts ? r.kappa2_dir_ops : r.kappa2_dir);
                break;
            case KappaFamily::kappa2_substitution:
                values.push_back(use_op_counts ? r.kappa2_sub_ops : r.kappa2_sub);
                break;
        }
    }
    return summarize_values(std::move(values));
}

SummaryMap standard_summaries(const BenchResult& result) {
    SummaryMap out;
    if (result.records.empty()) return out;
    const bool direct = result.options.method != MethodChoice::substitution;
    const bool subst = result.options.method != MethodChoice::direct;
    out["kappa1"] = summarize(result.records, KappaFamily::kappa1);
    out["kappa1_ops"] = summarize(result.records, KappaFamily::kappa1, true);
    if (direct) {
        out["kappa2_direct"] = summarize(result.records, KappaFamily::kappa2_direct);
        out["kappa2_direct_ops"] = summarize(result.records, KappaFamily::kappa2_direct, true);
    }
    if (subst) {
        out["kappa2_substitution"] = summarize(result.records, KappaFamily::kappa2_substitution);
        out["kappa2_substitution_ops"] =
            summarize(result.records, KappaFamily::kappa2_substitution, true);
    }
    return out;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

void emit_table(const BenchResult& result, const SummaryMap& summaries, std::ostream& out) {
    out << "problem                  n      rho  p_jac  p_dir  p_sub"
           "      t_f     t_grad   t_hess_dir t_hess_sub   kappa1  kappa2_dir  kappa2_sub\n";
    for (const BenchRecord& r : result.records) {
        char line[256];
        std::snprintf(line, sizeof(line),
                      "%-22s %6d %6d %6d %6d %6d %10.3g %10.3g %10.3g %10.3g %9.3g %10.3g %10.3g",
                      r.problem.c_str(), r.n, r.rho_max, r.p_jac, r.p_hess_dir, r.p_hess_sub, r.t_f,
                      r.t_grad, r.t_hess_dir, r.t_hess_sub, r.kappa1, r.kappa2_dir, r.kappa2_sub);
        out << line << "\n";
    }
    for (const auto& [name, s] : summaries) {
        out << "\nQuartiles for " << name << "\n";
        out << "   min     q1     q2     q3    max\n";
        char line[160];
        std::snprintf(line, sizeof(line), "%6.3g %6.3g %6.3g %6.3g %6.3g", s.min, s.q1, s.q2, s.q3,
                      s.max);
        out << line << "\n";
    }
    if (!result.failures.empty()) {
        out << "\nfailures:\n";
        for (const auto& f : result.failures)
            out << "  " << f.problem << " n=" << f.n << ": " << f.error << "\n";
    }
}

void emit_csv(const BenchResult& result, std::ostream& out) {
    out << "problem,n,rho_max,p_jac,p_hess_dir,p_hess_sub,t_f,t_grad,t_hess_dir,t_hess_sub,"
           "ops_f,ops_grad,ops_hess_dir,ops_hess_sub,kappa1,kappa2_dir,kappa2_sub\n";
    for (const BenchRecord& r : result.records) {
        out << r.problem << ',' << r.n << ',' << r.rho_max << ',' << r.p_jac << ','
            << r.p_hess_dir << ',' << r.p_hess_sub << ',' << fmt(r.t_f) << ',' << fmt(r.t_grad)
            << ',' << fmt(r.t_hess_dir) << ',' << fmt(r.t_hess_sub) << ',' << r.ops_f << ','
            << r.ops_grad << ',' << r.ops_hess_dir << ',' << r.ops_hess_sub << ','
            << fmt(r.kappa1) << ',' << fmt(r.kappa2_dir) << ',' << fmt(r.kappa2_sub) << "\n";
    }
}

nlohmann::json record_json(const BenchRecord& r) {
    return {
        {"problem", r.problem},
        {"n", r.n},
        {"rho_max", r.rho_max},
        {"p_jac", r.p_jac},
        {"p_hess_dir", r.p_hess_dir},
        {"p_hess_sub", r.p_hess_sub},
        {"t_f", r.t_f},
        {"t_grad", r.t_grad},
        {"t_hess_dir", r.t_hess_dir},
        {"t_hess_sub", r.t_hess_sub},
        {"ops_f", r.ops_f},
        {"ops_grad", r.ops_grad},
        {"ops_hess_dir", r.ops_hess_dir},
        {"ops_hess_sub", r.ops_hess_sub},
        {"kappa1", r.kappa1},
        {"kappa2_dir", r.kappa2_dir},
        {"kappa2_sub", r.kappa2_sub},
        {"kappa1_ops", r.kappa1_ops},
        {"kappa2_dir_ops", r.kappa2_dir_ops},
        {"kappa2_sub_ops", r.kappa2_sub_ops},
    };
}

void emit_json(const BenchResult& result, const SummaryMap& summaries, std::ostream& out) {
    nlohmann::json doc;
    doc["records"] = nlohmann::json::array();
    for (const BenchRecord& r : result.records) doc["records"].push_back(record_json(r));
    doc["summaries"] = nlohmann::json::object();
    for (const auto& [name, s] : summaries)
        doc["summaries"][name] = {{"min", s.min}, {"q1", s.q1}, {"q2", s.q2}, {"q3", s.q3},
                                  {"max", s.max}};
    doc["failures"] = nlohmann::json::array();
    for (const auto& f : result.failures)
        doc["failures"].push_back({{"problem", f.problem}, {"n", f.n}, {"error", f.error}});
    const char* method = result.options.method == MethodChoice::both ? "both"
                         : result.options.method == MethodChoice::direct ? "direct"
                                                                         : "substitution";
    doc["environment"] = {
        {"trials", result.options.trials},
        {"seed", result.options.seed},
        {"mode", result.options.mode == HvpMode::exact ? "exact" : "difference"},
        {"method", method},
        {"ops_only", result.options.ops_only},
        {"serial", result.options.serial},
        {"hardware_concurrency", std::thread::hardware_concurrency()},
        {"compiler", std::string(
#if defined(__VERSION__)
             "gcc-compatible " __VERSION__
#else
             "unknown"
#endif
             )},
    };
    out << doc.dump(2) << "\n";
}

} // namespace

void emit(const BenchResult& result, const SummaryMap& summaries, OutputFormat format,
          std::ostream& out) {
    switch (format) {
        case OutputFormat::table: emit_table(result, summaries, out); break;
        case OutputFormat::csv: emit_csv(result, out); break;
        case OutputFormat::json: emit_json(result, summaries, out); break;
    }
}

void emit_to_path(const BenchResult& result, const SummaryMap& summaries, OutputFormat format,
                  const std::string& path) {
    if (path.empty() || path == "-") {
        emit(result, summaries, format, std::cout);
        return;
    }
    std::ofstream file(path);
    if (!file) throw io_error("cannot open output path: " + path);
    emit(result, summaries, format, file);
    file.flush();
    if (!file) throw io_error("failed writing output path: " + path);
}

} // namespace psad::bench
