#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "psad/extended_function.hpp"
#include "psad/pattern.hpp"

namespace psad {

/// A safely perturbed point together with the components that had to be
/// clamped because the box was narrower than the perturbation.
struct PerturbedPoint {
    std::vector<double> point;
    std::vector<std::int32_t> clamped;
};

/// Random small relative perturbation x̄[i] = (1+ε)x[i] + ε with
/// |ε| ∈ [1e-6, 1e-4], sign chosen per component so the result stays inside
/// [lower, upper]. Components with lower[i] == upper[i] are left untouched.
/// Empty bound vectors mean unbounded. Deterministic for a given seed.
PerturbedPoint perturb_point(std::span<const double> x0, std::span<const double> lower,
                             std::span<const double> upper, std::uint64_t seed);

/// Number of structural nonzeros of f_E'(x): entries reachable by the chain
/// rule, counted from one sparse sweep without retaining values.
std::int64_t count_jacobian_nnz(const ExtendedFunction& F, std::span<const double> x);

/// Jacobian sparsity at a perturbed interior point. The evaluation point is
/// perturb_point(x0, bounds-of-F, seed); entries whose derivative value is
/// exactly zero there are dropped (a derivative that is identically zero can
/// never evaluate nonzero, so the result is always a subset of the symbolic
/// pattern).
SparsityPattern detect_jacobian_pattern(const ExtendedFunction& F, std::span<const double> x0,
                                        std::uint64_t seed);

/// Pattern of JᵀJ: (i, j) present iff some row of J contains both columns;
/// the diagonal (i, i) is present for every column appearing in any row.
/// This contains the Hessian pattern of Σ f_k.
SymmetricPattern jtj_pattern(const SparsityPattern& J);

/// nnz of the full symmetric JᵀJ pattern, counted with O(n) extra memory and
/// without materializing the pattern.
std::int64_t count_hessian_nnz(const SparsityPattern& J);

} // namespace psad
