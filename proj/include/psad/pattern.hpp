#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace psad {

/// Compressed row-wise structural nonzero pattern of an m×n matrix.
/// row_offsets has length m+1 and is nondecreasing; column indices are
/// strictly increasing within each row.
class SparsityPattern {
public:
    SparsityPattern() = default;
    SparsityPattern(int rows, int cols, std::vector<std::int32_t> row_offsets,
                    std::vector<std::int32_t> col_indices);

    /// Builds from per-row index lists (each list must be strictly increasing).
    static SparsityPattern from_rows(int cols, const std::vector<std::vector<std::int32_t>>& rows);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    std::int32_t nnz() const noexcept { return row_offsets_.empty() ? 0 : row_offsets_.back(); }

    std::span<const std::int32_t> row(int i) const {
        return {col_indices_.data() + row_offsets_[i],
                static_cast<std::size_t>(row_offsets_[i + 1] - row_offsets_[i])};
    }
    int row_nnz(int i) const { return row_offsets_[i + 1] - row_offsets_[i]; }

    /// Largest row length: the maximum number of variables in any component.
    int max_row_nnz() const;

    const std::vector<std::int32_t>& row_offsets() const noexcept { return row_offsets_; }
    const std::vector<std::int32_t>& col_indices() const noexcept { return col_indices_; }

    bool contains(int i, int j) const;

    /// Column-to-rows adjacency (CSC offsets/indices of the same pattern).
    void build_column_map(std::vector<std::int32_t>& col_offsets,
                          std::vector<std::int32_t>& row_indices) const;

    bool operator==(const SparsityPattern& o) const = default;

    std::string to_json() const;
    static SparsityPattern from_json(const std::string& text);

private:
    void validate() const;

    int rows_ = 0;
    int cols_ = 0;
    std::vector<std::int32_t> row_offsets_{0};
    std::vector<std::int32_t> col_indices_;
};

/// Pattern of a symmetric n×n matrix, stored as the lower triangle
/// (including the diagonal) in compressed rows; the upper triangle is
/// implied.
class SymmetricPattern {
public:
    SymmetricPattern() = default;

    /// `lower` must be square with indices j ≤ i in every row i.
    explicit SymmetricPattern(SparsityPattern lower);

    /// Builds from (i, j) pairs in any order and either triangle; duplicates
    /// are collapsed.
    static SymmetricPattern from_pairs(int order, std::span<const std::pair<int, int>> pairs);

    int order() const noexcept { return lower_.rows(); }
    const SparsityPattern& lower() const noexcept { return lower_; }

    /// nnz of the lower triangle (diagonal included).
    std::int32_t lower_nnz() const noexcept { return lower_.nnz(); }

    /// nnz of the full symmetric matrix: 2·(strictly lower) + diagonal.
    std::int64_t full_nnz() const;

    bool contains(int i, int j) const;

    /// Neighbor lists of the adjacency graph (off-diagonal entries, both
    /// directions, sorted).
    std::vector<std::vector<std::int32_t>> adjacency() const;

    /// Same pattern with every diagonal entry (i, i) present.
    SymmetricPattern with_full_diagonal() const;

    bool operator==(const SymmetricPattern& o) const = default;

private:
    SparsityPattern lower_;
};

} // namespace psad
