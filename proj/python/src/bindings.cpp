#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "psad/adcore.hpp"
#include "psad/bench.hpp"
#include "psad/errors.hpp"
#include "psad/drivers.hpp"
#include "psad/problems.hpp"
#include "psad/sparsity.hpp"
#include "psad/symcolor.hpp"

namespace py = pybind11;

namespace {

// A catalog problem instantiated at a concrete size.
struct PyProblem {
    std::string name;
    psad::ExtendedFunction function;
    psad::StandardStart start;
    int rho_max = 0;
};

PyProblem make_problem(const std::string& name, int n) {
    const psad::ProblemSpec& spec = psad::find_problem(name);
    PyProblem p;
    p.name = name;
    p.function = spec.constructor(n);
    p.start = spec.standard_start(n);
    p.rho_max = spec.declared_rho_max;
    return p;
}

psad::SymmetricMethod parse_method(const std::string& method) {
    if (method == "direct") return psad::SymmetricMethod::direct;
    if (method == "substitution") return psad::SymmetricMethod::substitution;
    throw std::invalid_argument("method must be 'direct' or 'substitution'");
}

psad::HvpMode parse_mode(const std::string& mode) {
    if (mode == "exact") return psad::HvpMode::exact;
    if (mode == "difference") return psad::HvpMode::difference;
    throw std::invalid_argument("mode must be 'exact' or 'difference'");
}

// Lower-triangle COO triple of a symmetric result.
py::dict symmetric_to_dict(const psad::SymmetricValues& H) {
    std::vector<int> rows, cols;
    std::vector<double> values;
    const auto& lower = H.pattern.lower();
    for (int i = 0; i < lower.rows(); ++i) {
        const auto row = lower.row(i);
        const std::int32_t base = lower.row_offsets()[i];
        for (std::size_t k = 0; k < row.size(); ++k) {
            rows.push_back(i);
            cols.push_back(row[k]);
            values.push_back(H.values[base + k]);
        }
    }
    py::dict out;
    out["n"] = H.pattern.order();
    out["rows"] = rows;
    out["cols"] = cols;
    out["values"] = values;
    return out;
}

py::dict pattern_to_dict(const psad::SparsityPattern& p) {
    py::dict out;
    out["rows"] = p.rows();
    out["cols"] = p.cols();
    out["row_offsets"] = p.row_offsets();
    out["col_indices"] = p.col_indices();
    return out;
}

} // namespace

PYBIND11_MODULE(_psad, m) {
    m.doc() = "Gradients and sparse Hessians of partially separable functions via compressed, "
              "sparse, and hybrid forward-mode differentiation";

    py::register_exception<psad::domain_error>(m, "DomainError", PyExc_ArithmeticError);
    py::register_exception<psad::plan_infeasible_error>(m, "PlanInfeasibleError",
                                                        PyExc_ValueError);

    m.def("catalog", [] {
        py::list out;
        for (const psad::ProblemSpec& spec : psad::catalog()) {
            py::dict entry;
            entry["name"] = spec.name;
            entry["family"] = spec.family == psad::ProblemFamily::variational
                                  ? "variational"
                                  : "nonlinear-equations";
            entry["rho_max"] = spec.declared_rho_max;
            out.append(entry);
        }
        return out;
    });

    py::class_<PyProblem>(m, "Problem")
        .def_readonly("name", &PyProblem::name)
        .def_property_readonly("n", [](const PyProblem& p) { return p.function.n(); })
        .def_property_readonly("x0", [](const PyProblem& p) { return p.start.x0; })
        .def_property_readonly("lower", [](const PyProblem& p) { return p.start.lower; })
        .def_property_readonly("upper", [](const PyProblem& p) { return p.start.upper; })
        .def_readonly("rho_max", &PyProblem::rho_max);

    m.def("make_problem", &make_problem, py::arg("name"), py::arg("n"),
          "Instantiate a catalog problem at (approximately) the requested size");

    py::class_<psad::HybridState>(m, "HybridState")
        .def_property_readonly("p_jacobian",
                               [](const psad::HybridState& s) { return s.partition.p; })
        .def_property_readonly("p_hessian_direct",
                               [](const psad::HybridState& s) { return s.star.p; })
        .def_property_readonly("p_hessian_substitution",
                               [](const psad::HybridState& s) { return s.acyclic.p; })
        .def_property_readonly("rho_max",
                               [](const psad::HybridState& s) { return s.pattern.max_row_nnz(); })
        .def_readonly("nnz_jacobian", &psad::HybridState::nnz_jacobian)
        .def_readonly("nnz_hessian", &psad::HybridState::nnz_hessian)
        .def_property_readonly("pattern",
                               [](const psad::HybridState& s) { return pattern_to_dict(s.pattern); })
        .def_property_readonly("pattern_json",
                               [](const psad::HybridState& s) { return s.pattern.to_json(); })
        .def_property_readonly("partition_json",
                               [](const psad::HybridState& s) { return s.partition.to_json(); })
        .def_property_readonly("star_json",
                               [](const psad::HybridState& s) { return s.star.to_json(); })
        .def_property_readonly("acyclic_json",
                               [](const psad::HybridState& s) { return s.acyclic.to_json(); });

    m.def("eval_components",
          [](const PyProblem& p, const std::vector<double>& x) {
              return psad::eval_components(p.function, x);
          },
          py::arg("problem"), py::arg("x"));

    m.def("function_value",
          [](const PyProblem& p, const std::vector<double>& x) {
              return psad::eval_function_value(p.function, x);
          },
          py::arg("problem"), py::arg("x"));

    m.def("gradient_sparse",
          [](const PyProblem& p, const std::vector<double>& x) {
              return psad::gradient_sparse(p.function, x);
          },
          py::arg("problem"), py::arg("x"));

    m.def("prepare",
          [](const PyProblem& p, std::optional<std::vector<double>> x0, std::uint64_t seed) {
              return psad::prepare_hybrid(p.function, x0 ? *x0 : p.start.x0, seed);
          },
          py::arg("problem"), py::arg("x0") = std::nullopt, py::arg("seed") = 20001101,
          "Run the full preparation pipeline (detection, partitioning, colorings, plans)");

    m.def("gradient_compressed",
          [](const PyProblem& p, const std::vector<double>& x, const psad::HybridState& state) {
              return psad::gradient_compressed(p.function, x, state);
          },
          py::arg("problem"), py::arg("x"), py::arg("state"));

    m.def("hessian",
          [](const PyProblem& p, const std::vector<double>& x, const psad::HybridState& state,
             const std::string& method, const std::string& mode, std::optional<double> step) {
              return symmetric_to_dict(psad::hessian(p.function, x, state, parse_method(method),
                                                     parse_mode(mode), step));
          },
          py::arg("problem"), py::arg("x"), py::arg("state"), py::arg("method") = "direct",
          py::arg("mode") = "exact", py::arg("step") = std::nullopt,
          "Sparse symmetric Hessian as a lower-triangle COO dict");

    m.def("hessian_vector",
          [](const PyProblem& p, const std::vector<double>& x, const std::vector<double>& v,
             const std::string& mode, std::optional<double> step) {
              return psad::eval_hessian_vector(p.function, x, v, parse_mode(mode), step);
          },
          py::arg("problem"), py::arg("x"), py::arg("v"), py::arg("mode") = "exact",
          py::arg("step") = std::nullopt);

    m.def("dense_gradient",
          [](const PyProblem& p, const std::vector<double>& x) {
              return psad::dense_gradient(p.function, x);
          },
          py::arg("problem"), py::arg("x"), "Ground-truth gradient (n single-direction sweeps)");

    m.def("dense_hessian",
          [](const PyProblem& p, const std::vector<double>& x) {
              const psad::Matrix H = psad::dense_hessian(p.function, x);
              std::vector<std::vector<double>> out(H.rows(), std::vector<double>(H.cols()));
              for (int i = 0; i < H.rows(); ++i)
                  for (int j = 0; j < H.cols(); ++j) out[i][j] = H(i, j);
              return out;
          },
          py::arg("problem"), py::arg("x"), "Ground-truth dense Hessian (n exact products)");

    m.def("detect_pattern",
          [](const PyProblem& p, std::optional<std::vector<double>> x0, std::uint64_t seed) {
              return pattern_to_dict(
                  psad::detect_jacobian_pattern(p.function, x0 ? *x0 : p.start.x0, seed));
          },
          py::arg("problem"), py::arg("x0") = std::nullopt, py::arg("seed") = 20001101);

    m.def("perturb_point",
          [](const std::vector<double>& x0, const std::vector<double>& lower,
             const std::vector<double>& upper, std::uint64_t seed) {
              const psad::PerturbedPoint p = psad::perturb_point(x0, lower, upper, seed);
              py::dict out;
              out["point"] = p.point;
              out["clamped"] = p.clamped;
              return out;
          },
          py::arg("x0"), py::arg("lower") = std::vector<double>{},
          py::arg("upper") = std::vector<double>{}, py::arg("seed") = 20001101);

    m.def("summarize_values", [](std::vector<double> values) {
        const psad::bench::QuartileSummary s = psad::bench::summarize_values(std::move(values));
        py::dict out;
        out["min"] = s.min;
        out["q1"] = s.q1;
        out["q2"] = s.q2;
        out["q3"] = s.q3;
        out["max"] = s.max;
        return out;
    });
}
