#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "psad/adcore.hpp"
#include "psad/coloring.hpp"
#include "psad/extended_function.hpp"
#include "psad/symcolor.hpp"

namespace psad {

/// Everything the per-iteration drivers need, computed once at the starting
/// point: detected Jacobian pattern, column partition and its seed, the
/// Hessian pattern with both symmetric colorings, and the recovery plans.
/// Immutable after preparation and shareable across threads.
struct HybridState {
    SparsityPattern pattern;
    ColumnPartition partition;
    SeedMatrix seed;
    Matrix seed_dense; // n×p realization of `seed`

    SymmetricPattern hessian_pattern; // JᵀJ pattern with a full diagonal
    SymmetricColoring star;
    SymmetricColoring acyclic;
    HessianRecoveryPlan plan_direct;
    HessianRecoveryPlan plan_substitution;
    Matrix hessian_seed_direct;
    Matrix hessian_seed_substitution;

    std::int64_t nnz_jacobian = 0;
    std::int64_t nnz_hessian = 0;
    int m = 0;

    /// Debug aid: re-check the stored pattern against a sparse sweep on
    /// every driver call and throw pattern_stale_error on a mismatch.
    /// Off by default; the pattern is trusted for all subsequent points.
    bool verify_pattern = false;
};

/// ∇f(x) by one sparse Jacobian sweep and column accumulation (the gradient
/// of Σ f_k is the column-sum of the extended Jacobian).
std::vector<double> gradient_sparse(const ExtendedFunction& F, std::span<const double> x,
                                    OpCounter* ops = nullptr);

/// ∇f(x) by one compressed width-p sweep plus recovery; equals
/// gradient_sparse to round-off while the pattern stays valid. Nonzeros
/// outside the stored pattern are dropped silently unless
/// state.verify_pattern is set.
std::vector<double> gradient_compressed(const ExtendedFunction& F, std::span<const double> x,
                                        const HybridState& state, OpCounter* ops = nullptr);

/// Runs the whole preparation pipeline at x0: evaluate (discover m), count
/// Jacobian nonzeros, detect the pattern at a perturbed point, derive the
/// Hessian pattern and its nonzero count, partition columns, color the
/// Hessian pattern both ways, and build both recovery plans.
HybridState prepare_hybrid(const ExtendedFunction& F, std::span<const double> x0,
                           std::uint64_t seed,
                           OrderingKind ordering = OrderingKind::smallest_last);

/// Sparse symmetric Hessian of Σ f_k at x. Exact mode propagates second
/// order per Hessian color with the Jacobian seed as first-order directions,
/// so its cost is O(p_H·(p_J+1)) function-cost units; difference mode uses
/// compressed gradients. The result pattern is state.hessian_pattern.
SymmetricValues hessian(const ExtendedFunction& F, std::span<const double> x,
                        const HybridState& state, SymmetricMethod method, HvpMode mode,
                        std::optional<double> step = std::nullopt, OpCounter* ops = nullptr);

/// Extended function of the Lagrangian L(·,u) = f + ⟨u, c⟩: the components
/// of fE followed by the u-weighted components of cE. One multiplier per
/// component of cE.
ExtendedFunction lagrangian_extended(const ExtendedFunction& fE, const ExtendedFunction& cE,
                                     std::vector<double> u);

} // namespace psad
