#pragma once

#include <optional>
#include <span>
#include <vector>

#include "psad/extended_function.hpp"
#include "psad/matrix.hpp"
#include "psad/op_counter.hpp"
#include "psad/pattern.hpp"

namespace psad {

/// How Hessian-vector products are formed: exact second-order propagation,
/// or a forward difference of gradient values.
enum class HvpMode { exact, difference };

/// Sparse Jacobian as computed by index-set propagation: pattern rows hold
/// the structurally reachable entries, values aligned entry-for-entry.
struct SparseJacobian {
    SparsityPattern pattern;
    std::vector<double> values;
};

/// Evaluates the component vector f_E(x). Discovers m on first use and
/// rejects non-finite component values.
std::vector<double> eval_components(const ExtendedFunction& F, std::span<const double> x,
                                    OpCounter* ops = nullptr);

/// f(x) = sum of components; the summation is included in the tally.
double eval_function_value(const ExtendedFunction& F, std::span<const double> x,
                           OpCounter* ops = nullptr);

/// Compressed Jacobian f_E'(x)·V by one width-p forward sweep; the full
/// Jacobian is never formed.
CompressedMatrix eval_compressed_jacobian(const ExtendedFunction& F, std::span<const double> x,
                                          const Matrix& V, OpCounter* ops = nullptr);

/// Sparse Jacobian by index-set propagation; needs no sparsity knowledge.
/// Entries that cancel to exact zero are kept (structural semantics).
SparseJacobian eval_sparse_jacobian(const ExtendedFunction& F, std::span<const double> x,
                                    OpCounter* ops = nullptr);

/// One second-order sweep with first-order seed U (n×p) and dot direction v:
/// per component k the result row holds ∇f_k·U (first), ∇f_k·v (dot), and
/// vᵀ∇²f_k·U (second).
std::vector<SecondOrderDual> eval_second_order(const ExtendedFunction& F,
                                               std::span<const double> x, const Matrix& U,
                                               std::span<const double> v,
                                               OpCounter* ops = nullptr);

/// Hessian-vector product ∇²f(x)·v. Exact mode runs a single second-order
/// sweep seeded with the identity; difference mode forms
/// ‖v‖·(∇f(x+h·v/‖v‖) − ∇f(x))/h with gradients accumulated from sparse
/// Jacobian sweeps. step: pass std::nullopt for the default
/// √ε·(1+‖x‖_∞); an explicit step must be positive.
std::vector<double> eval_hessian_vector(const ExtendedFunction& F, std::span<const double> x,
                                        std::span<const double> v, HvpMode mode,
                                        std::optional<double> step = std::nullopt,
                                        OpCounter* ops = nullptr);

/// Compressed Hessian ∇²f(x)·V, one Hessian-vector product per seed column.
CompressedMatrix eval_compressed_hessian(const ExtendedFunction& F, std::span<const double> x,
                                         const Matrix& V, HvpMode mode,
                                         std::optional<double> step = std::nullopt,
                                         OpCounter* ops = nullptr);

/// Default forward-difference step √ε·(1+‖x‖_∞).
double default_difference_step(std::span<const double> x);

} // namespace psad
