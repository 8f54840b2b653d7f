#include "psad/drivers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "psad/errors.hpp"
#include "psad/sparsity.hpp"

namespace psad {

namespace {

void check_detected_subset(const SparsityPattern& detected, const SparsityPattern& stored) {
    if (detected.rows() != stored.rows() || detected.cols() != stored.cols())
        throw pattern_stale_error("pattern shape changed between preparation and evaluation");
    for (int i = 0; i < detected.rows(); ++i)
        for (std::int32_t j : detected.row(i))
            if (!stored.contains(i, j))
                throw pattern_stale_error("nonzero (" + std::to_string(i) + ", " +
                                          std::to_string(j) + ") is outside the prepared pattern");
}

void verify_against_sparse_sweep(const ExtendedFunction& F, std::span<const double> x,
                                 const HybridState& state) {
    const SparseJacobian J = eval_sparse_jacobian(F, x);
    std::vector<std::vector<std::int32_t>> rows(J.pattern.rows());
    for (int i = 0; i < J.pattern.rows(); ++i) {
        const auto row = J.pattern.row(i);
        const std::int32_t base = J.pattern.row_offsets()[i];
        for (std::size_t k = 0; k < row.size(); ++k)
            if (J.values[base + k] != 0.0) rows[i].push_back(row[k]);
    }
    check_detected_subset(SparsityPattern::from_rows(J.pattern.cols(), rows), state.pattern);
}

} // namespace

std::vector<double> gradient_sparse(const ExtendedFunction& F, std::span<const double> x,
                                    OpCounter* ops) {
    const SparseJacobian J = eval_sparse_jacobian(F, x, ops);
    std::vector<double> g(F.n(), 0.0);
    const auto& idx = J.pattern.col_indices();
    for (std::size_t k = 0; k < idx.size(); ++k) g[idx[k]] += J.values[k];
    return g;
}

std::vector<double> gradient_compressed(const ExtendedFunction& F, std::span<const double> x,
                                        const HybridState& state, OpCounter* ops) {
    if (state.verify_pattern) verify_against_sparse_sweep(F, x, state);
    const CompressedMatrix B = eval_compressed_jacobian(F, x, state.seed_dense, ops);
    if (B.rows() != state.pattern.rows())
        throw pattern_stale_error("component count changed between preparation and evaluation");
    const std::vector<double> values = recover_jacobian(state.pattern, state.partition, B);
    std::vector<double> g(F.n(), 0.0);
    const auto& idx = state.pattern.col_indices();
    for (std::size_t k = 0; k < idx.size(); ++k) g[idx[k]] += values[k];
    return g;
}

HybridState prepare_hybrid(const ExtendedFunction& F, std::span<const double> x0,
                           std::uint64_t seed, OrderingKind ordering) {
    HybridState state;
    eval_components(F, x0); // validates the point and discovers m
    state.m = F.m();
    state.nnz_jacobian = count_jacobian_nnz(F, x0);
    state.pattern = detect_jacobian_pattern(F, x0, seed);
    state.nnz_hessian = count_hessian_nnz(state.pattern);
    state.hessian_pattern = jtj_pattern(state.pattern).with_full_diagonal();

    state.partition = partition_columns(state.pattern, order_columns(state.pattern, ordering));
    state.seed = build_seed(state.partition);
    state.seed_dense = state.seed.to_matrix();

    state.star = star_coloring(state.hessian_pattern);
    state.acyclic = acyclic_coloring(state.hessian_pattern);
    state.plan_direct = plan_recovery(state.hessian_pattern, state.star);
    state.plan_substitution = plan_recovery(state.hessian_pattern, state.acyclic);
    state.hessian_seed_direct = state.star.seed_matrix();
    state.hessian_seed_substitution = state.acyclic.seed_matrix();
    return state;
}

SymmetricValues hessian(const ExtendedFunction& F, std::span<const double> x,
                        const HybridState& state, SymmetricMethod method, HvpMode mode,
                        std::optional<double> step, OpCounter* ops) {
    if (state.verify_pattern) verify_against_sparse_sweep(F, x, state);

    const SymmetricColoring& coloring =
        method == SymmetricMethod::direct ? state.star : state.acyclic;
    const HessianRecoveryPlan& plan =
        method == SymmetricMethod::direct ? state.plan_direct : state.plan_substitution;
    const Matrix& hessian_seed = method == SymmetricMethod::direct
                                     ? state.hessian_seed_direct
                                     : state.hessian_seed_substitution;
    const int n = F.n();
    const int p_h = coloring.p;
    CompressedMatrix W(n, p_h);

    if (mode == HvpMode::exact) {
        // One second-order sweep per Hessian color: the dot direction is the
        // color indicator, the first-order directions are the Jacobian seed.
        // Row k of the sweep yields vᵀ∇²f_k·V_J compressed under the column
        // partition; structural orthogonality maps each pattern entry to its
        // group, and the row contributions accumulate to ∇²f(x)·v.
        std::vector<double> v(n);
        for (int k = 0; k < p_h; ++k) {
            for (int j = 0; j < n; ++j) v[j] = hessian_seed(j, k);
            const std::vector<SecondOrderDual> rows =
                eval_second_order(F, x, state.seed_dense, v, ops);
            if (static_cast<int>(rows.size()) != state.pattern.rows())
                throw pattern_stale_error(
                    "component count changed between preparation and evaluation");
            for (int i = 0; i < state.pattern.rows(); ++i) {
                const auto& second = rows[i].second;
                if (second.empty()) continue;
                for (std::int32_t j : state.pattern.row(i)) {
                    const double contrib = second[state.partition.ngrp[j] - 1];
                    if (!std::isfinite(contrib))
                        throw domain_error("non-finite second derivative in component " +
                                               std::to_string(i) + ", group " + std::to_string(k + 1),
                                           i, k + 1);
                    W(j, k) += contrib;
                }
            }
        }
    } else {
        double h;
        if (step) {
            if (*step <= 0.0) throw std::invalid_argument("difference step must be positive");
            h = *step;
        } else {
            h = default_difference_step(x);
        }
        const std::vector<double> g0 = gradient_compressed(F, x, state, ops);
        std::vector<double> shifted(x.begin(), x.end());
        for (int k = 0; k < p_h; ++k) {
            double norm = 0.0;
            for (int j = 0; j < n; ++j) norm += hessian_seed(j, k) * hessian_seed(j, k);
            norm = std::sqrt(norm);
            if (norm == 0.0) throw std::invalid_argument("empty color class in the Hessian seed");
            for (int j = 0; j < n; ++j) shifted[j] = x[j] + h * (hessian_seed(j, k) / norm);
            const std::vector<double> g1 = gradient_compressed(F, shifted, state, ops);
            const double scale = norm / h;
            for (int j = 0; j < n; ++j) W(j, k) = scale * (g1[j] - g0[j]);
        }
    }

    return recover_hessian(plan, W);
}

ExtendedFunction lagrangian_extended(const ExtendedFunction& fE, const ExtendedFunction& cE,
                                     std::vector<double> u) {
    if (fE.n() != cE.n())
        throw std::invalid_argument("objective and constraints disagree on the variable count");
    if (cE.m() >= 0 && cE.m() != static_cast<int>(u.size()))
        throw std::invalid_argument("one multiplier per constraint component required");

    auto combine = [fE, cE, u](auto x, auto& out) {
        using S = typename std::remove_reference_t<decltype(out)>::value_type;
        fE.evaluate<S>(x, out);
        std::vector<S> constraints;
        cE.evaluate<S>(x, constraints);
        if (constraints.size() != u.size())
            throw std::invalid_argument("one multiplier per constraint component required");
        for (std::size_t k = 0; k < constraints.size(); ++k)
            out.push_back(constraints[k] * u[k]);
    };

    ExtendedFunction L = make_extended_function(fE.n(), combine, fE.lower_bounds(),
                                                fE.upper_bounds());
    if (fE.m() >= 0) L.record_component_count(fE.m() + static_cast<int>(u.size()));
    return L;
}

} // namespace psad
