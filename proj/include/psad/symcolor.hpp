#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "psad/matrix.hpp"
#include "psad/pattern.hpp"

namespace psad {

enum class SymmetricMethod { direct, substitution };

/// A coloring of the Hessian adjacency graph suitable for symmetric
/// recovery. `direct` colorings satisfy the star condition (adjacent
/// vertices differ and every 4-vertex path uses at least 3 colors), so every
/// entry reads straight out of one compressed cell. `substitution` colorings
/// are acyclic (every cycle uses at least 3 colors); entries are resolved in
/// order along the two-colored trees, subtracting previously resolved ones.
struct SymmetricColoring {
    SymmetricMethod kind = SymmetricMethod::direct;
    std::vector<std::int32_t> color; // 1-based
    int p = 0;

    /// Substitution only: the two-colored forests, one tree list per color
    /// pair that actually carries edges. parent[v] = -1 marks a root;
    /// vertices appear in BFS order from the root.
    struct TwoColoredTree {
        std::int32_t color_a = 0;
        std::int32_t color_b = 0;
        std::vector<std::pair<std::int32_t, std::int32_t>> parent_edges; // (vertex, parent)
    };
    std::vector<TwoColoredTree> forest;

    Matrix seed_matrix() const;

    std::string to_json() const;
    static SymmetricColoring from_json(const std::string& text);
};

/// One resolution step: target lower-triangle entry (i, j) read from cell
/// (src_row, src_col) of the compressed matrix, minus previously resolved
/// entries (indices into the lower-pattern value array).
struct RecoveryStep {
    std::int32_t target_row = 0;
    std::int32_t target_col = 0;
    std::int32_t target_entry = 0;
    std::int32_t src_row = 0;
    std::int32_t src_col = 0; // 0-based column of W
    std::vector<std::int32_t> subtract;
};

/// Ordered schedule resolving every lower-triangle pattern entry exactly
/// once. Direct plans have empty subtraction lists.
struct HessianRecoveryPlan {
    SymmetricColoring coloring;
    SymmetricPattern pattern;
    std::vector<RecoveryStep> schedule;

    /// Longest substitution chain (0 for direct plans).
    int max_chain_length() const;
};

/// Symmetric sparse values over a lower-triangle pattern.
struct SymmetricValues {
    SymmetricPattern pattern;
    std::vector<double> values; // aligned with pattern.lower() entries

    double at(int i, int j) const; // 0 outside the pattern; mirrored access
    Matrix to_dense() const;
};

/// Greedy star coloring in smallest-last order with deterministic
/// tie-breaking.
SymmetricColoring star_coloring(const SymmetricPattern& H);

/// Greedy acyclic coloring (two-colored subgraphs are forests); records the
/// forests for substitution recovery.
SymmetricColoring acyclic_coloring(const SymmetricPattern& H);

/// Builds the resolution schedule; re-validates the coloring and throws
/// plan_infeasible_error naming the first unresolvable entry.
HessianRecoveryPlan plan_recovery(const SymmetricPattern& H, const SymmetricColoring& coloring);

/// Executes the schedule on W = A·V (n×p).
SymmetricValues recover_hessian(const HessianRecoveryPlan& plan, const CompressedMatrix& W);

/// Independent verifiers (brute force / union-find; no shared logic with the
/// greedy constructors).
bool verify_proper_coloring(const SymmetricPattern& H, const std::vector<std::int32_t>& color);
bool verify_star_coloring(const SymmetricPattern& H, const std::vector<std::int32_t>& color);
bool verify_acyclic_coloring(const SymmetricPattern& H, const std::vector<std::int32_t>& color);

} // namespace psad
