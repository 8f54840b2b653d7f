#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "psad/matrix.hpp"
#include "psad/pattern.hpp"

namespace psad {

/// Assignment of columns to structurally orthogonal groups. Group ids are
/// 1-based, matching the conventional ngrp array.
struct ColumnPartition {
    std::vector<std::int32_t> ngrp;
    int p = 0;

    std::string to_json() const;
    static ColumnPartition from_json(const std::string& text);
};

/// Seed matrix with exactly one unit entry per row: V[j, ngrp[j]-1] = 1.
/// Unit values make recovery a direct copy from the compressed matrix.
struct SeedMatrix {
    int n = 0;
    int p = 0;
    std::vector<std::int32_t> ngrp;

    Matrix to_matrix() const;
};

enum class OrderingKind { smallest_last, natural, incidence_degree };

/// Smallest-last ordering of the column-intersection graph (columns adjacent
/// iff they share a row). The returned ordering is the coloring order: the
/// vertex removed first by the min-degree elimination comes last. Ties in
/// the final ordering break toward the smaller column index. The graph is
/// never materialized; neighbors are enumerated by row scans.
std::vector<std::int32_t> smallest_last_order(const SparsityPattern& pattern);

std::vector<std::int32_t> natural_order(const SparsityPattern& pattern);

/// Incidence-degree ordering: repeatedly pick the column with the most
/// already-ordered neighbors (ties: higher degree, then smaller index).
std::vector<std::int32_t> incidence_degree_order(const SparsityPattern& pattern);

std::vector<std::int32_t> order_columns(const SparsityPattern& pattern, OrderingKind kind);

/// Greedy sequential partitioning in the given order: each column takes the
/// smallest group not conflicting with previously assigned columns sharing a
/// row. Guarantees structural orthogonality and p ≥ max row count.
ColumnPartition partition_columns(const SparsityPattern& pattern,
                                  const std::vector<std::int32_t>& ordering);

SeedMatrix build_seed(const ColumnPartition& partition);

/// Reads every pattern entry (i, j) out of the compressed product
/// B = J·V as B[i, ngrp[j]-1]; returns values aligned with the pattern.
std::vector<double> recover_jacobian(const SparsityPattern& pattern,
                                     const ColumnPartition& partition,
                                     const CompressedMatrix& B);

/// Independent validity check: scans every row for two columns in the same
/// group.
bool is_structurally_orthogonal(const SparsityPattern& pattern, const ColumnPartition& partition);

} // namespace psad
