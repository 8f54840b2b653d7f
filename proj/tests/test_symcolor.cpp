#include <doctest.h>

#include <iostream>
#include <set>
#include <vector>

#include "psad/coloring.hpp"
#include "psad/errors.hpp"
#include "psad/problems.hpp"
#include "psad/rng.hpp"
#include "psad/sparsity.hpp"
#include "psad/symcolor.hpp"
#include "test_helpers.hpp"

using namespace psad;
using namespace psad::testing;

namespace {

SymmetricPattern diagonal_sym(int n) {
    std::vector<std::vector<std::int32_t>> rows(n);
    for (int i = 0; i < n; ++i) rows[i] = {static_cast<std::int32_t>(i)};
    return SymmetricPattern(SparsityPattern::from_rows(n, rows));
}

SymmetricPattern tridiagonal_sym(int n) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i) {
        pairs.push_back({i, i});
        if (i + 1 < n) pairs.push_back({i + 1, i});
    }
    return SymmetricPattern::from_pairs(n, pairs);
}

SymmetricPattern arrowhead_sym(int n) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i) {
        pairs.push_back({i, i});
        if (i > 0) pairs.push_back({i, 0});
    }
    return SymmetricPattern::from_pairs(n, pairs);
}

SymmetricPattern path_sym(int n, bool with_diagonal) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i + 1 < n; ++i) pairs.push_back({i + 1, i});
    if (with_diagonal)
        for (int i = 0; i < n; ++i) pairs.push_back({i, i});
    return SymmetricPattern::from_pairs(n, pairs);
}

SymmetricPattern cycle_sym(int n) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i) pairs.push_back({(i + 1) % n, i});
    return SymmetricPattern::from_pairs(n, pairs);
}

SymmetricPattern random_sym(Rng& rng, int n, double density, bool with_diagonal = true) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i) {
        if (with_diagonal) pairs.push_back({i, i});
        for (int j = 0; j < i; ++j)
            if (rng.uniform01() < density) pairs.push_back({i, j});
    }
    return SymmetricPattern::from_pairs(n, pairs);
}

/// Symmetric values drawn on the pattern, returned dense (the recovery
/// oracle multiplies densely).
Matrix random_symmetric_values(const SymmetricPattern& H, Rng& rng) {
    const int n = H.order();
    Matrix A(n, n);
    for (int i = 0; i < n; ++i) {
        for (std::int32_t j : H.lower().row(i)) {
            const double v = rng.uniform(-2.0, 2.0);
            A(i, j) = v;
            A(j, i) = v;
        }
    }
    return A;
}

Matrix dense_product(const Matrix& A, const Matrix& V) {
    Matrix W(A.rows(), V.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int k = 0; k < V.cols(); ++k) {
            double sum = 0.0;
            for (int j = 0; j < A.cols(); ++j) sum += A(i, j) * V(j, k);
            W(i, k) = sum;
        }
    return W;
}

void check_recovery_roundtrip(const SymmetricPattern& H, Rng& rng) {
    const Matrix A = random_symmetric_values(H, rng);
    for (const SymmetricColoring& coloring : {star_coloring(H), acyclic_coloring(H)}) {
        const HessianRecoveryPlan plan = plan_recovery(H, coloring);
        const SymmetricValues got = recover_hessian(plan, dense_product(A, coloring.seed_matrix()));
        for (int i = 0; i < H.order(); ++i)
            for (std::int32_t j : H.lower().row(i))
                CHECK(rel_err(got.at(i, j), A(i, j)) < 1e-12);
    }
}

/// The unsymmetric comparison: treat the full symmetric pattern as a plain
/// rectangular pattern and partition its columns.
int unsymmetric_partition_count(const SymmetricPattern& H) {
    const int n = H.order();
    std::vector<std::vector<std::int32_t>> rows(n);
    for (int i = 0; i < n; ++i) {
        for (std::int32_t j : H.lower().row(i)) {
            rows[i].push_back(j);
            if (j != i) rows[j].push_back(i);
        }
    }
    for (auto& r : rows) std::sort(r.begin(), r.end());
    const SparsityPattern full = SparsityPattern::from_rows(n, rows);
    return partition_columns(full, smallest_last_order(full)).p;
}

} // namespace

TEST_CASE("star coloring of a diagonal pattern uses one color") {
    const SymmetricColoring c = star_coloring(diagonal_sym(6));
    CHECK(c.p == 1);
    CHECK(verify_star_coloring(diagonal_sym(6), c.color));
}

TEST_CASE("star coloring of the arrowhead uses two colors") {
    const SymmetricPattern H = arrowhead_sym(100);
    const SymmetricColoring c = star_coloring(H);
    CHECK(c.p == 2);
    CHECK(verify_star_coloring(H, c.color));
}

TEST_CASE("no 2-coloring of the 4-path is a star coloring") {
    const SymmetricPattern H = path_sym(4, false);
    // Brute force over every assignment from two colors.
    for (int mask = 0; mask < 16; ++mask) {
        std::vector<std::int32_t> color(4);
        for (int v = 0; v < 4; ++v) color[v] = 1 + ((mask >> v) & 1);
        CHECK_FALSE(verify_star_coloring(H, color));
    }
    const SymmetricColoring c = star_coloring(H);
    CHECK(c.p == 3);
    CHECK(verify_star_coloring(H, c.color));
}

TEST_CASE("acyclic coloring of a diagonal pattern uses one color") {
    CHECK(acyclic_coloring(diagonal_sym(5)).p == 1);
}

TEST_CASE("the 4-cycle needs three colors even for acyclic coloring") {
    const SymmetricPattern H = cycle_sym(4);
    for (int mask = 0; mask < 16; ++mask) {
        std::vector<std::int32_t> color(4);
        for (int v = 0; v < 4; ++v) color[v] = 1 + ((mask >> v) & 1);
        CHECK_FALSE(verify_acyclic_coloring(H, color));
    }
    const SymmetricColoring c = acyclic_coloring(H);
    CHECK(c.p == 3);
    CHECK(verify_acyclic_coloring(H, c.color));
}

TEST_CASE("tridiagonal patterns color with at most three colors and recover exactly") {
    Rng rng(6);
    const SymmetricPattern H = tridiagonal_sym(12);
    const SymmetricColoring sub = acyclic_coloring(H);
    CHECK(sub.p <= 3);
    check_recovery_roundtrip(H, rng);
}

TEST_CASE("recovery plans on a diagonal pattern read the single column") {
    const SymmetricPattern H = diagonal_sym(4);
    const SymmetricColoring c = star_coloring(H);
    REQUIRE(c.p == 1);
    const HessianRecoveryPlan plan = plan_recovery(H, c);
    REQUIRE(plan.schedule.size() == 4);
    for (const RecoveryStep& step : plan.schedule) {
        CHECK(step.target_row == step.target_col);
        CHECK(step.src_row == step.target_row);
        CHECK(step.src_col == 0);
        CHECK(step.subtract.empty());
    }
}

TEST_CASE("arrowhead recovery reads off-diagonals from the hub color") {
    const SymmetricPattern H = arrowhead_sym(8);
    const SymmetricColoring c = star_coloring(H);
    REQUIRE(c.p == 2);
    const HessianRecoveryPlan plan = plan_recovery(H, c);
    const std::int32_t hub_color = c.color[0];
    for (const RecoveryStep& step : plan.schedule) {
        CHECK(step.subtract.empty());
        if (step.target_row != step.target_col) {
            // Off-diagonal (i, 0): the only resolvable cell is (i, color(hub)).
            CHECK(step.target_col == 0);
            CHECK(step.src_row == step.target_row);
            CHECK(step.src_col == hub_color - 1);
        }
    }
}

TEST_CASE("a proper but non-star coloring is rejected as plan-infeasible") {
    const SymmetricPattern H = path_sym(4, true);
    SymmetricColoring bad;
    bad.kind = SymmetricMethod::direct;
    bad.color = {1, 2, 1, 2};
    bad.p = 2;
    CHECK_THROWS_AS(plan_recovery(H, bad), plan_infeasible_error);
}

TEST_CASE("substitution planning rejects colorings with bicolored cycles") {
    const SymmetricPattern H = cycle_sym(4);
    SymmetricColoring bad;
    bad.kind = SymmetricMethod::substitution;
    bad.color = {1, 2, 1, 2};
    bad.p = 2;
    CHECK_THROWS_AS(plan_recovery(H, bad), plan_infeasible_error);
}

TEST_CASE("hand-checked recoveries") {
    const SymmetricPattern D = diagonal_sym(3);
    const SymmetricColoring c = star_coloring(D);
    Matrix W(3, 1);
    W(0, 0) = 4.0;
    W(1, 0) = -1.0;
    W(2, 0) = 0.5;
    const SymmetricValues got = recover_hessian(plan_recovery(D, c), W);
    CHECK(got.at(0, 0) == 4.0);
    CHECK(got.at(1, 1) == -1.0);
    CHECK(got.at(2, 2) == 0.5);

    // Dense 2x2 with colors (1,2): W = H, so every entry reads directly.
    const SymmetricPattern H2 = SymmetricPattern::from_pairs(
        2, std::vector<std::pair<int, int>>{{0, 0}, {1, 0}, {1, 1}});
    const SymmetricColoring c2 = star_coloring(H2);
    REQUIRE(c2.p == 2);
    Matrix W2(2, 2);
    const double a = 1.5, b = -0.25, cc = 3.0;
    W2(0, c2.color[0] - 1) = a;
    W2(0, c2.color[1] - 1) = b;
    W2(1, c2.color[0] - 1) = b;
    W2(1, c2.color[1] - 1) = cc;
    const SymmetricValues got2 = recover_hessian(plan_recovery(H2, c2), W2);
    CHECK(got2.at(0, 0) == a);
    CHECK(got2.at(1, 0) == b);
    CHECK(got2.at(0, 1) == b);
    CHECK(got2.at(1, 1) == cc);
}

TEST_CASE("recovery rejects shape mismatches") {
    const SymmetricPattern D = diagonal_sym(3);
    const HessianRecoveryPlan plan = plan_recovery(D, star_coloring(D));
    CHECK_THROWS_AS(recover_hessian(plan, Matrix(3, 2)), std::invalid_argument);
    CHECK_THROWS_AS(recover_hessian(plan, Matrix(2, 1)), std::invalid_argument);
}

TEST_CASE("recovery round-trips on every pattern family") {
    Rng rng(1234);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(29));
        check_recovery_roundtrip(diagonal_sym(n), rng);
        check_recovery_roundtrip(tridiagonal_sym(n), rng);
        check_recovery_roundtrip(arrowhead_sym(n), rng);
        check_recovery_roundtrip(random_sym(rng, n, 0.2), rng);
    }
}

TEST_CASE("independent verifiers accept every constructor output") {
    Rng rng(888);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(11));
        const SymmetricPattern H = random_sym(rng, n, rng.uniform(0.1, 0.6));
        const SymmetricColoring star = star_coloring(H);
        const SymmetricColoring acyclic = acyclic_coloring(H);
        CHECK(verify_star_coloring(H, star.color));
        CHECK(verify_acyclic_coloring(H, acyclic.color));
        // A star coloring is acyclic as well; the converse direction is the
        // whole point of substitution.
        CHECK(verify_acyclic_coloring(H, star.color));
        CHECK(acyclic.p <= star.p);
    }
}

TEST_CASE("symmetry exploitation beats unsymmetric partitioning") {
    for (const ProblemSpec& spec : catalog()) {
        const SymmetricPattern H =
            jtj_pattern(spec.reference_pattern(30)).with_full_diagonal();
        const SymmetricColoring star = star_coloring(H);
        CHECK(star.p <= unsymmetric_partition_count(H));
    }
    // Strict on the arrowhead: 2 against n.
    const SymmetricPattern A = arrowhead_sym(100);
    CHECK(star_coloring(A).p == 2);
    CHECK(unsymmetric_partition_count(A) == 100);
}

TEST_CASE("substitution error growth stays tame (reported, not asserted)") {
    Rng rng(555);
    double worst = 0.0;
    int worst_chain = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const SymmetricPattern H = tridiagonal_sym(60);
        const Matrix A = random_symmetric_values(H, rng);
        const SymmetricColoring c = acyclic_coloring(H);
        const HessianRecoveryPlan plan = plan_recovery(H, c);
        const SymmetricValues got = recover_hessian(plan, dense_product(A, c.seed_matrix()));
        for (int i = 0; i < H.order(); ++i)
            for (std::int32_t j : H.lower().row(i))
                worst = std::max(worst, rel_err(got.at(i, j), A(i, j)));
        worst_chain = std::max(worst_chain, plan.max_chain_length());
    }
    std::cout << "[substitution stability] max relative error " << worst
              << " with max chain length " << worst_chain << "\n";
    CHECK(worst < 1e-10); // generous: well-scaled inputs
}

TEST_CASE("coloring JSON round trip") {
    const SymmetricColoring c = star_coloring(arrowhead_sym(5));
    const std::string text = c.to_json();
    const SymmetricColoring back = SymmetricColoring::from_json(text);
    CHECK(back.p == c.p);
    CHECK(back.color == c.color);
    CHECK(back.kind == SymmetricMethod::direct);
    CHECK(SymmetricColoring::from_json(acyclic_coloring(cycle_sym(4)).to_json()).kind ==
          SymmetricMethod::substitution);
    CHECK_THROWS_AS(SymmetricColoring::from_json(R"({"kind":"direct","p":1,"color":[2]})"),
                    std::invalid_argument);
}
