#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "psad/extended_function.hpp"
#include "psad/matrix.hpp"
#include "psad/pattern.hpp"

namespace psad {

enum class ProblemFamily { variational, nonlinear_equations };

struct StandardStart {
    std::vector<double> x0;
    std::vector<double> lower; // empty means unbounded
    std::vector<double> upper;
};

/// A catalog entry. Grid problems round the requested size to the nearest
/// full grid (adjusted_n reports the size actually used); chain problems
/// reject sizes smaller than their stencil. reference_pattern is the
/// symbolic Jacobian sparsity recorded at authoring time, against which
/// detection is tested.
struct ProblemSpec {
    std::string name;
    ProblemFamily family;
    int declared_rho_max = 0;
    std::function<int(int)> adjusted_n;
    std::function<ExtendedFunction(int)> constructor;
    std::function<SparsityPattern(int)> reference_pattern;
    std::function<StandardStart(int)> standard_start;
};

/// The built-in test problems: 2-D element sums with 4- and 5-variable
/// stencils, chain systems with stencil widths 9/13/14/17, and the
/// structural stress cases (arrowhead, quartic-chain, diag).
const std::vector<ProblemSpec>& catalog();

const ProblemSpec& find_problem(const std::string& name);

/// Ground-truth dense gradient: n single-direction forward sweeps. Shares no
/// coloring or recovery code with the compressed drivers.
std::vector<double> dense_gradient(const ExtendedFunction& F, std::span<const double> x);

/// Ground-truth dense Hessian: n exact Hessian-vector products.
Matrix dense_hessian(const ExtendedFunction& F, std::span<const double> x);

} // namespace psad
