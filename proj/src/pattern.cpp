#include "psad/pattern.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include <json.hpp>

namespace psad {

SparsityPattern::SparsityPattern(int rows, int cols, std::vector<std::int32_t> row_offsets,
                                 std::vector<std::int32_t> col_indices)
    : rows_(rows), cols_(cols), row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)) {
    validate();
}

void SparsityPattern::validate() const {
    if (rows_ < 0 || cols_ < 0) throw std::invalid_argument("negative pattern dimension");
    if (static_cast<int>(row_offsets_.size()) != rows_ + 1)
        throw std::invalid_argument("row_offsets length must be rows+1");
    if (row_offsets_.front() != 0) throw std::invalid_argument("row_offsets must start at 0");
    for (int i = 0; i < rows_; ++i) {
        if (row_offsets_[i + 1] < row_offsets_[i])
            throw std::invalid_argument("row_offsets must be nondecreasing");
        for (std::int32_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
            if (col_indices_[k] < 0 || col_indices_[k] >= cols_)
                throw std::invalid_argument("column index out of range");
            if (k > row_offsets_[i] && col_indices_[k] <= col_indices_[k - 1])
                throw std::invalid_argument("column indices must be strictly increasing per row");
        }
    }
    if (row_offsets_.back() != static_cast<std::int32_t>(col_indices_.size()))
        throw std::invalid_argument("row_offsets/col_indices length mismatch");
}

SparsityPattern SparsityPattern::from_rows(int cols,
                                           const std::vector<std::vector<std::int32_t>>& rows) {
    std::vector<std::int32_t> offsets;
    offsets.reserve(rows.size() + 1);
    offsets.push_back(0);
    std::vector<std::int32_t> indices;
    for (const auto& r : rows) {
        indices.insert(indices.end(), r.begin(), r.end());
        offsets.push_back(static_cast<std::int32_t>(indices.size()));
    }
    return SparsityPattern(static_cast<int>(rows.size()), cols, std::move(offsets),
                           std::move(indices));
}

int SparsityPattern::max_row_nnz() const {
    int best = 0;
    for (int i = 0; i < rows_; ++i) best = std::max(best, row_nnz(i));
    return best;
}

bool SparsityPattern::contains(int i, int j) const {
    auto r = row(i);
    return std::binary_search(r.begin(), r.end(), static_cast<std::int32_t>(j));
}

void SparsityPattern::build_column_map(std::vector<std::int32_t>& col_offsets,
                                       std::vector<std::int32_t>& row_indices) const {
    col_offsets.assign(cols_ + 1, 0);
    for (std::int32_t j : col_indices_) ++col_offsets[j + 1];
    for (int j = 0; j < cols_; ++j) col_offsets[j + 1] += col_offsets[j];
    row_indices.resize(col_indices_.size());
    std::vector<std::int32_t> cursor(col_offsets.begin(), col_offsets.end() - 1);
    for (int i = 0; i < rows_; ++i)
        for (std::int32_t j : row(i)) row_indices[cursor[j]++] = i;
}

std::string SparsityPattern::to_json() const {
    nlohmann::json doc;
    doc["rows"] = rows_;
    doc["cols"] = cols_;
    doc["row_offsets"] = row_offsets_;
    doc["col_indices"] = col_indices_;
    return doc.dump();
}

SparsityPattern SparsityPattern::from_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    return SparsityPattern(doc.at("rows").get<int>(), doc.at("cols").get<int>(),
                           doc.at("row_offsets").get<std::vector<std::int32_t>>(),
                           doc.at("col_indices").get<std::vector<std::int32_t>>());
}

SymmetricPattern::SymmetricPattern(SparsityPattern lower) : lower_(std::move(lower)) {
    if (lower_.rows() != lower_.cols())
        throw std::invalid_argument("symmetric pattern must be square");
    for (int i = 0; i < lower_.rows(); ++i)
        for (std::int32_t j : lower_.row(i))
            if (j > i) throw std::invalid_argument("symmetric pattern stores the lower triangle");
}

SymmetricPattern SymmetricPattern::from_pairs(int order,
                                              std::span<const std::pair<int, int>> pairs) {
    std::vector<std::vector<std::int32_t>> rows(order);
    for (auto [a, b] : pairs) {
        const int i = std::max(a, b);
        const int j = std::min(a, b);
        if (j < 0 || i >= order) throw std::invalid_argument("pair outside matrix order");
        rows[i].push_back(j);
    }
    for (auto& r : rows) {
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
    }
    return SymmetricPattern(SparsityPattern::from_rows(order, rows));
}

std::int64_t SymmetricPattern::full_nnz() const {
    std::int64_t diag = 0;
    for (int i = 0; i < order(); ++i)
        if (lower_.contains(i, i)) ++diag;
    const std::int64_t strict = lower_.nnz() - diag;
    return 2 * strict + diag;
}

bool SymmetricPattern::contains(int i, int j) const {
    return lower_.contains(std::max(i, j), std::min(i, j));
}

std::vector<std::vector<std::int32_t>> SymmetricPattern::adjacency() const {
    std::vector<std::vector<std::int32_t>> adj(order());
    for (int i = 0; i < order(); ++i) {
        for (std::int32_t j : lower_.row(i)) {
            if (j == i) continue;
            adj[i].push_back(j);
            adj[j].push_back(i);
        }
    }
    for (auto& nb : adj) std::sort(nb.begin(), nb.end());
    return adj;
}

SymmetricPattern SymmetricPattern::with_full_diagonal() const {
    std::vector<std::vector<std::int32_t>> rows(order());
    for (int i = 0; i < order(); ++i) {
        auto r = lower_.row(i);
        rows[i].assign(r.begin(), r.end());
        if (!std::binary_search(rows[i].begin(), rows[i].end(), i)) {
            rows[i].push_back(i);
            std::sort(rows[i].begin(), rows[i].end());
        }
    }
    return SymmetricPattern(SparsityPattern::from_rows(order(), rows));
}

} // namespace psad
