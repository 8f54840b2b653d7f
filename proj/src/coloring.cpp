#include "psad/coloring.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

namespace psad {

std::string ColumnPartition::to_json() const {
    nlohmann::json doc;
    doc["p"] = p;
    doc["ngrp"] = ngrp;
    return doc.dump();
}

ColumnPartition ColumnPartition::from_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    ColumnPartition part;
    part.p = doc.at("p").get<int>();
    part.ngrp = doc.at("ngrp").get<std::vector<std::int32_t>>();
    for (std::int32_t g : part.ngrp)
        if (g < 1 || g > part.p) throw std::invalid_argument("group id outside [1, p]");
    return part;
}

Matrix SeedMatrix::to_matrix() const {
    Matrix V(n, p);
    for (int j = 0; j < n; ++j) V(j, ngrp[j] - 1) = 1.0;
    return V;
}

namespace {

// Helper walking the distinct column-graph neighbors of column j via its
// rows; `stamp` must hold values != token on entry for unvisited marks.
template <class Fn>
void for_each_column_neighbor(const SparsityPattern& pattern,
                              const std::vector<std::int32_t>& col_offsets,
                              const std::vector<std::int32_t>& row_indices, int j,
                              std::vector<std::int32_t>& stamp, std::int32_t token, Fn&& fn) {
    for (std::int32_t k = col_offsets[j]; k < col_offsets[j + 1]; ++k) {
        const std::int32_t r = row_indices[k];
        for (std::int32_t c : pattern.row(r)) {
            if (c == j || stamp[c] == token) continue;
            stamp[c] = token;
            fn(c);
        }
    }
}

} // namespace

std::vector<std::int32_t> smallest_last_order(const SparsityPattern& pattern) {
    const int n = pattern.cols();
    std::vector<std::int32_t> col_offsets, row_indices;
    pattern.build_column_map(col_offsets, row_indices);

    std::vector<std::int32_t> degree(n, 0);
    std::vector<std::int32_t> stamp(n, -1);
    for (int j = 0; j < n; ++j) {
        std::int32_t d = 0;
        for_each_column_neighbor(pattern, col_offsets, row_indices, j, stamp, j,
                                 [&](std::int32_t) { ++d; });
        degree[j] = d;
    }

    // Min-degree elimination. Among equal degrees the largest index is
    // removed first, so the final (reversed) ordering breaks ties toward
    // smaller indices. Keyed as (degree, n-1-j) so set::begin() is the pick.
    std::set<std::pair<std::int32_t, std::int32_t>> queue;
    for (int j = 0; j < n; ++j) queue.emplace(degree[j], n - 1 - j);

    std::vector<bool> removed(n, false);
    std::vector<std::int32_t> removal;
    removal.reserve(n);
    std::fill(stamp.begin(), stamp.end(), -1);
    std::int32_t token = 0;

    while (!queue.empty()) {
        const auto [d, key] = *queue.begin();
        queue.erase(queue.begin());
        const std::int32_t j = n - 1 - key;
        removed[j] = true;
        removal.push_back(j);
        ++token;
        for_each_column_neighbor(pattern, col_offsets, row_indices, j, stamp, token,
                                 [&](std::int32_t c) {
                                     if (removed[c]) return;
                                     queue.erase({degree[c], n - 1 - c});
                                     --degree[c];
                                     queue.emplace(degree[c], n - 1 - c);
                                 });
    }

    return {removal.rbegin(), removal.rend()};
}

std::vector<std::int32_t> natural_order(const SparsityPattern& pattern) {
    std::vector<std::int32_t> ordering(pattern.cols());
    std::iota(ordering.begin(), ordering.end(), 0);
    return ordering;
}

std::vector<std::int32_t> incidence_degree_order(const SparsityPattern& pattern) {
    const int n = pattern.cols();
    std::vector<std::int32_t> col_offsets, row_indices;
    pattern.build_column_map(col_offsets, row_indices);

    std::vector<std::int32_t> degree(n, 0);
    std::vector<std::int32_t> stamp(n, -1);
    for (int j = 0; j < n; ++j) {
        std::int32_t d = 0;
        for_each_column_neighbor(pattern, col_offsets, row_indices, j, stamp, j,
                                 [&](std::int32_t) { ++d; });
        degree[j] = d;
    }

    std::vector<std::int32_t> incidence(n, 0);
    std::vector<bool> ordered(n, false);
    std::vector<std::int32_t> ordering;
    ordering.reserve(n);
    std::fill(stamp.begin(), stamp.end(), -1);
    std::int32_t token = n;

    for (int step = 0; step < n; ++step) {
        int best = -1;
        for (int j = 0; j < n; ++j) {
            if (ordered[j]) continue;
            if (best < 0 || incidence[j] > incidence[best] ||
                (incidence[j] == incidence[best] && degree[j] > degree[best]))
                best = j;
        }
        ordered[best] = true;
        ordering.push_back(best);
        ++token;
        for_each_column_neighbor(pattern, col_offsets, row_indices, best, stamp, token,
                                 [&](std::int32_t c) {
                                     if (!ordered[c]) ++incidence[c];
                                 });
    }
    return ordering;
}

std::vector<std::int32_t> order_columns(const SparsityPattern& pattern, OrderingKind kind) {
    switch (kind) {
        case OrderingKind::smallest_last: return smallest_last_order(pattern);
        case OrderingKind::natural: return natural_order(pattern);
        case OrderingKind::incidence_degree: return incidence_degree_order(pattern);
    }
    throw std::invalid_argument("unknown ordering kind");
}

ColumnPartition partition_columns(const SparsityPattern& pattern,
                                  const std::vector<std::int32_t>& ordering) {
    const int n = pattern.cols();
    if (static_cast<int>(ordering.size()) != n)
        throw std::invalid_argument("ordering length does not match column count");
    {
        std::vector<bool> seen(n, false);
        for (std::int32_t j : ordering) {
            if (j < 0 || j >= n || seen[j])
                throw std::invalid_argument("ordering is not a permutation of the columns");
            seen[j] = true;
        }
    }

    std::vector<std::int32_t> col_offsets, row_indices;
    pattern.build_column_map(col_offsets, row_indices);

    ColumnPartition part;
    part.ngrp.assign(n, 0);
    std::vector<std::int32_t> forbidden(n + 2, -1); // group -> last column that forbade it

    for (std::int32_t j : ordering) {
        for (std::int32_t k = col_offsets[j]; k < col_offsets[j + 1]; ++k) {
            const std::int32_t r = row_indices[k];
            for (std::int32_t c : pattern.row(r)) {
                const std::int32_t g = part.ngrp[c];
                if (g > 0) forbidden[g] = j;
            }
        }
        std::int32_t g = 1;
        while (forbidden[g] == j) ++g;
        part.ngrp[j] = g;
        part.p = std::max(part.p, g);
    }
    if (n > 0 && part.p == 0) part.p = 1;
    return part;
}

SeedMatrix build_seed(const ColumnPartition& partition) {
    SeedMatrix seed;
    seed.n = static_cast<int>(partition.ngrp.size());
    seed.p = partition.p;
    seed.ngrp = partition.ngrp;
    return seed;
}

std::vector<double> recover_jacobian(const SparsityPattern& pattern,
                                     const ColumnPartition& partition,
                                     const CompressedMatrix& B) {
    if (static_cast<int>(partition.ngrp.size()) != pattern.cols())
        throw std::invalid_argument("partition does not match pattern columns");
    if (B.rows() != pattern.rows() || B.cols() != partition.p)
        throw std::invalid_argument("compressed matrix shape does not match pattern/partition");

    std::vector<double> values(pattern.nnz());
    std::int32_t k = 0;
    for (int i = 0; i < pattern.rows(); ++i)
        for (std::int32_t j : pattern.row(i)) values[k++] = B(i, partition.ngrp[j] - 1);
    return values;
}

bool is_structurally_orthogonal(const SparsityPattern& pattern,
                                const ColumnPartition& partition) {
    if (static_cast<int>(partition.ngrp.size()) != pattern.cols()) return false;
    std::vector<std::int32_t> seen(partition.p + 1, -1);
    for (int i = 0; i < pattern.rows(); ++i) {
        for (std::int32_t j : pattern.row(i)) {
            const std::int32_t g = partition.ngrp[j];
            if (g < 1 || g > partition.p) return false;
            if (seen[g] == i) return false;
            seen[g] = i;
        }
    }
    return true;
}

} // namespace psad
