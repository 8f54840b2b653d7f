#include <doctest.h>

#include <numeric>
#include <set>
#include <vector>

#include "psad/coloring.hpp"
#include "psad/problems.hpp"
#include "psad/rng.hpp"
#include "psad/sparsity.hpp"
#include "test_helpers.hpp"

using namespace psad;
using namespace psad::testing;

namespace {

SparsityPattern random_pattern(Rng& rng, int m, int n, double density) {
    std::vector<std::vector<std::int32_t>> rows(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            if (rng.uniform01() < density) rows[i].push_back(j);
    return SparsityPattern::from_rows(n, rows);
}

SparsityPattern tridiagonal_jacobian(int n) {
    std::vector<std::vector<std::int32_t>> rows(n);
    for (int i = 0; i < n; ++i)
        for (int j = std::max(0, i - 1); j <= std::min(n - 1, i + 1); ++j) rows[i].push_back(j);
    return SparsityPattern::from_rows(n, rows);
}

} // namespace

TEST_CASE("smallest-last ordering of a diagonal pattern is the identity") {
    const SparsityPattern diag = SparsityPattern::from_rows(4, {{0}, {1}, {2}, {3}});
    const std::vector<std::int32_t> order = smallest_last_order(diag);
    for (int j = 0; j < 4; ++j) CHECK(order[j] == j);
}

TEST_CASE("smallest-last ordering of a 3-clique breaks ties toward smaller indices") {
    // One dense row makes the three columns mutually adjacent; all degrees
    // tie, removal goes (2,1,0), and the reversed ordering is (0,1,2).
    const SparsityPattern clique = SparsityPattern::from_rows(3, {{0, 1, 2}});
    const std::vector<std::int32_t> order = smallest_last_order(clique);
    CHECK(order == std::vector<std::int32_t>{0, 1, 2});
}

TEST_CASE("smallest-last ordering keeps the arrowhead hub to the end of elimination") {
    // The hub has maximum degree, so min-degree elimination removes it last
    // and the returned coloring order starts with it.
    const ProblemSpec& spec = find_problem("arrowhead");
    const SparsityPattern pattern = spec.reference_pattern(12);
    const std::vector<std::int32_t> order = smallest_last_order(pattern);
    CHECK(order.front() == 0);
}

TEST_CASE("diagonal patterns partition into a single group") {
    const SparsityPattern diag = SparsityPattern::from_rows(5, {{0}, {1}, {2}, {3}, {4}});
    const ColumnPartition part = partition_columns(diag, smallest_last_order(diag));
    CHECK(part.p == 1);
    for (std::int32_t g : part.ngrp) CHECK(g == 1);
}

TEST_CASE("a dense column forces a second group") {
    // Column 0 appears in every row; the others are diagonal-only.
    std::vector<std::vector<std::int32_t>> rows;
    const int n = 6;
    for (int i = 1; i < n; ++i) rows.push_back({0, static_cast<std::int32_t>(i)});
    const SparsityPattern pattern = SparsityPattern::from_rows(n, rows);
    const ColumnPartition part = partition_columns(pattern, smallest_last_order(pattern));
    CHECK(part.p == 2);
    CHECK(is_structurally_orthogonal(pattern, part));
}

TEST_CASE("banded patterns in natural order need at most band-width groups") {
    for (int n : {5, 9, 16}) {
        const SparsityPattern band = tridiagonal_jacobian(n);
        const ColumnPartition part = partition_columns(band, natural_order(band));
        CHECK(part.p <= 3);
        CHECK(is_structurally_orthogonal(band, part));
    }
}

TEST_CASE("greedy output is structurally orthogonal for every ordering kind") {
    Rng rng(321);
    for (int trial = 0; trial < 40; ++trial) {
        const int m = 1 + static_cast<int>(rng.below(10));
        const int n = 1 + static_cast<int>(rng.below(10));
        const SparsityPattern pattern = random_pattern(rng, m, n, 0.3);
        for (OrderingKind kind :
             {OrderingKind::smallest_last, OrderingKind::natural, OrderingKind::incidence_degree}) {
            const ColumnPartition part = partition_columns(pattern, order_columns(pattern, kind));
            CHECK(is_structurally_orthogonal(pattern, part));
            CHECK(part.p >= pattern.max_row_nnz());
        }
    }
}

TEST_CASE("partition_columns validates the ordering") {
    const SparsityPattern diag = SparsityPattern::from_rows(3, {{0}, {1}, {2}});
    CHECK_THROWS_AS(partition_columns(diag, {0, 0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(partition_columns(diag, {0, 1}), std::invalid_argument);
}

TEST_CASE("seed matrices put one unit entry per row") {
    ColumnPartition part;
    part.ngrp = {1, 1, 2};
    part.p = 2;
    const Matrix V = build_seed(part).to_matrix();
    CHECK(V(0, 0) == 1.0);
    CHECK(V(0, 1) == 0.0);
    CHECK(V(1, 0) == 1.0);
    CHECK(V(1, 1) == 0.0);
    CHECK(V(2, 0) == 0.0);
    CHECK(V(2, 1) == 1.0);
}

TEST_CASE("a single group sums the rows") {
    const ExtendedFunction F = make_extended_function(3, [](auto x, auto& out) {
        out.push_back(2.0 * x[0]);
        out.push_back(3.0 * x[1] + x[2]);
    });
    ColumnPartition part;
    part.ngrp = {1, 1, 1};
    part.p = 1;
    const CompressedMatrix B = eval_compressed_jacobian(
        F, std::vector<double>{1.0, 1.0, 1.0}, build_seed(part).to_matrix());
    CHECK(B(0, 0) == 2.0);
    CHECK(B(1, 0) == 4.0);
}

TEST_CASE("compressed product equals dense product for random seeds built from partitions") {
    Rng rng(9);
    for (const char* name : {"diag", "arrowhead", "quartic-chain", "channel-like"}) {
        const ProblemSpec& spec = find_problem(name);
        const ExtendedFunction F = spec.constructor(20);
        const StandardStart start = spec.standard_start(20);
        const std::vector<double> x = random_point(F, start.x0, rng, 0.2);

        const SparsityPattern pattern = spec.reference_pattern(20);
        const ColumnPartition part = partition_columns(pattern, smallest_last_order(pattern));
        const Matrix V = build_seed(part).to_matrix();
        const CompressedMatrix B = eval_compressed_jacobian(F, x, V);
        const Matrix J = dense_jacobian(F, x);
        for (int i = 0; i < B.rows(); ++i) {
            for (int k = 0; k < B.cols(); ++k) {
                double want = 0.0;
                for (int j = 0; j < J.cols(); ++j) want += J(i, j) * V(j, k);
                CHECK(rel_err(B(i, k), want) < 1e-13);
            }
        }
    }
}

TEST_CASE("recovery on hand-checked compressed matrices") {
    const SparsityPattern diag = SparsityPattern::from_rows(2, {{0}, {1}});
    ColumnPartition part;
    part.ngrp = {1, 1};
    part.p = 1;
    Matrix B(2, 1);
    B(0, 0) = 2.0;
    B(1, 0) = 3.0;
    const std::vector<double> values = recover_jacobian(diag, part, B);
    CHECK(values == std::vector<double>{2.0, 3.0});

    const SparsityPattern row = SparsityPattern::from_rows(2, {{0, 1}});
    ColumnPartition two;
    two.ngrp = {1, 2};
    two.p = 2;
    Matrix B2(1, 2);
    B2(0, 0) = 5.0;
    B2(0, 1) = 2.0;
    CHECK(recover_jacobian(row, two, B2) == std::vector<double>{5.0, 2.0});
}

TEST_CASE("recovery rejects shape mismatches") {
    const SparsityPattern diag = SparsityPattern::from_rows(2, {{0}, {1}});
    ColumnPartition part;
    part.ngrp = {1, 1};
    part.p = 1;
    CHECK_THROWS_AS(recover_jacobian(diag, part, Matrix(3, 1)), std::invalid_argument);
    CHECK_THROWS_AS(recover_jacobian(diag, part, Matrix(2, 2)), std::invalid_argument);
}

TEST_CASE("compressed round trip matches the sparse sweep on the whole catalog") {
    Rng rng(2);
    for (const ProblemSpec& spec : catalog()) {
        const ExtendedFunction F = spec.constructor(40);
        const StandardStart start = spec.standard_start(40);
        const std::vector<double> x = random_point(F, start.x0, rng, 0.25);

        const SparseJacobian sparse = eval_sparse_jacobian(F, x);
        const ColumnPartition part =
            partition_columns(sparse.pattern, smallest_last_order(sparse.pattern));
        const std::vector<double> recovered = recover_jacobian(
            sparse.pattern, part,
            eval_compressed_jacobian(F, x, build_seed(part).to_matrix()));
        for (std::size_t k = 0; k < recovered.size(); ++k)
            CHECK(rel_err(recovered[k], sparse.values[k]) < 1e-12);
    }
}

TEST_CASE("orderings and partitions are deterministic") {
    Rng rng(44);
    const SparsityPattern pattern = random_pattern(rng, 12, 12, 0.25);
    for (OrderingKind kind :
         {OrderingKind::smallest_last, OrderingKind::natural, OrderingKind::incidence_degree}) {
        const auto o1 = order_columns(pattern, kind);
        const auto o2 = order_columns(pattern, kind);
        CHECK(o1 == o2);
        const ColumnPartition p1 = partition_columns(pattern, o1);
        const ColumnPartition p2 = partition_columns(pattern, o2);
        CHECK(p1.ngrp == p2.ngrp);
        CHECK(p1.p == p2.p);
    }
}

TEST_CASE("partition JSON round trip uses 1-based group ids") {
    ColumnPartition part;
    part.ngrp = {1, 2, 1, 3};
    part.p = 3;
    CHECK(part.to_json() == R"({"ngrp":[1,2,1,3],"p":3})");
    const ColumnPartition back = ColumnPartition::from_json(part.to_json());
    CHECK(back.ngrp == part.ngrp);
    CHECK(back.p == 3);
    CHECK_THROWS_AS(ColumnPartition::from_json(R"({"ngrp":[0,1],"p":1})"), std::invalid_argument);
}
