#include <doctest.h>

#include <cmath>
#include <vector>

#include "psad/drivers.hpp"
#include "psad/errors.hpp"
#include "psad/problems.hpp"
#include "psad/rng.hpp"
#include "test_helpers.hpp"

using namespace psad;
using namespace psad::testing;

TEST_CASE("sparse gradient on separable quadratics") {
    const ExtendedFunction F = make_extended_function(2, [](auto x, auto& out) {
        out.push_back(0.5 * (x[0] * x[0]));
        out.push_back(0.5 * (x[1] * x[1]));
    });
    const std::vector<double> g = gradient_sparse(F, std::vector<double>{3.0, 4.0});
    CHECK(g == std::vector<double>{3.0, 4.0});
}

TEST_CASE("duplicated components double the gradient rows") {
    const ExtendedFunction F = make_extended_function(2, [](auto x, auto& out) {
        out.push_back(x[0] * x[1]);
        out.push_back(x[0] * x[1]);
    });
    const std::vector<double> g = gradient_sparse(F, std::vector<double>{2.0, 5.0});
    CHECK(g == std::vector<double>{10.0, 4.0});
}

TEST_CASE("sparse gradient matches central finite differences on the catalog") {
    Rng rng(404);
    for (const ProblemSpec& spec : catalog()) {
        const ExtendedFunction F = spec.constructor(30);
        const StandardStart start = spec.standard_start(30);
        const std::vector<double> x = random_point(F, start.x0, rng, 0.2);
        const std::vector<double> g = gradient_sparse(F, x);
        const std::vector<double> fd = fd_gradient(F, x);
        for (int j = 0; j < F.n(); ++j) CHECK(rel_err(g[j], fd[j]) < 1e-6);
    }
}

TEST_CASE("compressed gradient equals the sparse gradient at fresh points") {
    Rng rng(11);
    for (const ProblemSpec& spec : catalog()) {
        const ExtendedFunction F = spec.constructor(36);
        const StandardStart start = spec.standard_start(36);
        const HybridState state = prepare_hybrid(F, start.x0, 7);
        for (int trial = 0; trial < 3; ++trial) {
            const std::vector<double> x = random_point(F, start.x0, rng, 0.25);
            const std::vector<double> gs = gradient_sparse(F, x);
            const std::vector<double> gc = gradient_compressed(F, x, state);
            for (int j = 0; j < F.n(); ++j) CHECK(rel_err(gc[j], gs[j]) < 1e-12);
        }
    }
}

TEST_CASE("a single dual sweep suffices for diagonal problems") {
    const ProblemSpec& spec = find_problem("diag");
    const ExtendedFunction F = spec.constructor(6);
    const StandardStart start = spec.standard_start(6);
    const HybridState state = prepare_hybrid(F, start.x0, 1);
    CHECK(state.partition.p == 1);
    const std::vector<double> g = gradient_compressed(F, start.x0, state);
    for (int j = 0; j < 6; ++j) CHECK(g[j] == start.x0[j]);
}

TEST_CASE("prepare_hybrid assembles consistent state on small cases") {
    const ProblemSpec& diag = find_problem("diag");
    {
        const ExtendedFunction F = diag.constructor(4);
        const HybridState state = prepare_hybrid(F, diag.standard_start(4).x0, 3);
        CHECK(state.partition.p == 1);
        CHECK(state.star.p == 1);
        CHECK(state.acyclic.p == 1);
        CHECK(state.nnz_hessian == 4);
        CHECK(state.m == 4);
    }
    {
        const ProblemSpec& arrow = find_problem("arrowhead");
        const ExtendedFunction F = arrow.constructor(100);
        const HybridState state = prepare_hybrid(F, arrow.standard_start(100).x0, 3);
        CHECK(state.star.p == 2);
        CHECK(state.pattern.max_row_nnz() == 2);
        CHECK(state.nnz_hessian == 3 * 100 - 2);
    }
}

TEST_CASE("detected rho_max matches the declared catalog value") {
    for (const ProblemSpec& spec : catalog()) {
        const ExtendedFunction F = spec.constructor(64);
        const HybridState state = prepare_hybrid(F, spec.standard_start(64).x0, 5);
        CHECK(state.pattern.max_row_nnz() == spec.declared_rho_max);
    }
}

TEST_CASE("hessian of a separable quadratic is the identity") {
    const ProblemSpec& spec = find_problem("diag");
    const ExtendedFunction F = spec.constructor(5);
    const StandardStart start = spec.standard_start(5);
    const HybridState state = prepare_hybrid(F, start.x0, 2);
    const SymmetricValues H =
        hessian(F, start.x0, state, SymmetricMethod::direct, HvpMode::exact);
    for (int i = 0; i < 5; ++i) {
        CHECK(H.at(i, i) == 1.0);
        for (int j = 0; j < i; ++j) CHECK(H.at(i, j) == 0.0);
    }
}

TEST_CASE("both methods reproduce the dense Hessian oracle") {
    Rng rng(606);
    for (const ProblemSpec& spec : catalog()) {
        const ExtendedFunction F = spec.constructor(26);
        const StandardStart start = spec.standard_start(26);
        const HybridState state = prepare_hybrid(F, start.x0, 31);
        const std::vector<double> x = random_point(F, start.x0, rng, 0.2);
        const Matrix dense = dense_hessian(F, x);

        for (SymmetricMethod method : {SymmetricMethod::direct, SymmetricMethod::substitution}) {
            const SymmetricValues H = hessian(F, x, state, method, HvpMode::exact);
            for (int i = 0; i < F.n(); ++i)
                for (int j = 0; j <= i; ++j) CHECK(rel_err(H.at(i, j), dense(i, j)) < 1e-10);
        }
    }
}

TEST_CASE("difference mode tracks exact mode") {
    Rng rng(707);
    for (const char* name : {"minimal-surface-like", "quartic-chain", "channel-like"}) {
        const ProblemSpec& spec = find_problem(name);
        const ExtendedFunction F = spec.constructor(25);
        const StandardStart start = spec.standard_start(25);
        const HybridState state = prepare_hybrid(F, start.x0, 9);
        const SymmetricValues He =
            hessian(F, start.x0, state, SymmetricMethod::direct, HvpMode::exact);
        const SymmetricValues Hd =
            hessian(F, start.x0, state, SymmetricMethod::direct, HvpMode::difference);
        for (int i = 0; i < F.n(); ++i)
            for (std::int32_t j : state.hessian_pattern.lower().row(i))
                CHECK(rel_err(Hd.at(i, j), He.at(i, j)) < 1e-5);
    }
}

TEST_CASE("computed Hessian nonzeros stay within the JtJ pattern") {
    Rng rng(808);
    for (const ProblemSpec& spec : catalog()) {
        const ExtendedFunction F = spec.constructor(20);
        const StandardStart start = spec.standard_start(20);
        const HybridState state = prepare_hybrid(F, start.x0, 13);
        const std::vector<double> x = random_point(F, start.x0, rng, 0.2);
        const Matrix dense = dense_hessian(F, x);
        for (int i = 0; i < F.n(); ++i)
            for (int j = 0; j <= i; ++j)
                if (dense(i, j) != 0.0) CHECK(state.hessian_pattern.contains(i, j));
    }
}

TEST_CASE("gradient op counts stay within 5(p+1) function costs") {
    for (const ProblemSpec& spec : catalog()) {
        const ExtendedFunction F = spec.constructor(48);
        const StandardStart start = spec.standard_start(48);
        const HybridState state = prepare_hybrid(F, start.x0, 21);

        OpCounter f_ops, g_ops;
        eval_function_value(F, start.x0, &f_ops);
        gradient_compressed(F, start.x0, state, &g_ops);
        const double ratio =
            static_cast<double>(g_ops.total()) / static_cast<double>(f_ops.total());
        CHECK(ratio <= 5.0 * (state.partition.p + 1));
    }
}

TEST_CASE("hessian op counts stay within 10 p_H (p_J + 1) function costs") {
    for (const ProblemSpec& spec : catalog()) {
        const ExtendedFunction F = spec.constructor(48);
        const StandardStart start = spec.standard_start(48);
        const HybridState state = prepare_hybrid(F, start.x0, 22);

        OpCounter f_ops;
        eval_function_value(F, start.x0, &f_ops);
        for (SymmetricMethod method : {SymmetricMethod::direct, SymmetricMethod::substitution}) {
            OpCounter h_ops;
            hessian(F, start.x0, state, method, HvpMode::exact, std::nullopt, &h_ops);
            const int p_h =
                method == SymmetricMethod::direct ? state.star.p : state.acyclic.p;
            const double ratio =
                static_cast<double>(h_ops.total()) / static_cast<double>(f_ops.total());
            CHECK(ratio <= 10.0 * p_h * (state.partition.p + 1));
        }
    }
}

TEST_CASE("lagrangian with no constraints reproduces the objective") {
    const ExtendedFunction fE = make_extended_function(2, [](auto x, auto& out) {
        out.push_back(x[0] * x[1]);
    });
    const ExtendedFunction cE = make_extended_function(2, [](auto, auto&) {});
    const ExtendedFunction L = lagrangian_extended(fE, cE, {});
    const std::vector<double> values = eval_components(L, std::vector<double>{2.0, 3.0});
    REQUIRE(values.size() == 1);
    CHECK(values[0] == 6.0);
}

TEST_CASE("lagrangian weights constraint components by their multipliers") {
    const ExtendedFunction fE = make_extended_function(3, [](auto x, auto& out) {
        out.push_back(0.0 * x[0]);
    });
    const ExtendedFunction cE = make_extended_function(3, [](auto x, auto& out) {
        out.push_back(x[0]);
    });
    const ExtendedFunction L = lagrangian_extended(fE, cE, {3.0});
    const std::vector<double> g = gradient_sparse(L, std::vector<double>{1.0, 1.0, 1.0});
    CHECK(g[0] == 3.0);
    CHECK(g[1] == 0.0);
    CHECK(g[2] == 0.0);
}

TEST_CASE("lagrangian Hessian equals the weighted sum of Hessians") {
    // f = x0^2 x1, one quadratic constraint c = x0 x1 + x1^2, u = 1.7.
    const ExtendedFunction fE = make_extended_function(2, [](auto x, auto& out) {
        out.push_back((x[0] * x[0]) * x[1]);
    });
    const ExtendedFunction cE = make_extended_function(2, [](auto x, auto& out) {
        out.push_back(x[0] * x[1] + x[1] * x[1]);
    });
    const double u = 1.7;
    const ExtendedFunction L = lagrangian_extended(fE, cE, {u});

    const std::vector<double> x{0.8, -0.6};
    const Matrix HL = dense_hessian(L, x);
    const Matrix Hf = dense_hessian(fE, x);
    const Matrix Hc = dense_hessian(cE, x);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(rel_err(HL(i, j), Hf(i, j) + u * Hc(i, j)) < 1e-13);

    // The drivers apply unchanged to the combined function.
    const HybridState state = prepare_hybrid(L, x, 5);
    const SymmetricValues H = hessian(L, x, state, SymmetricMethod::direct, HvpMode::exact);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j <= i; ++j) CHECK(rel_err(H.at(i, j), HL(i, j)) < 1e-12);
}

TEST_CASE("lagrangian dimension mismatches are rejected") {
    const ExtendedFunction fE = make_extended_function(2, [](auto x, auto& out) {
        out.push_back(x[0] + x[1]);
    });
    const ExtendedFunction c3 = make_extended_function(3, [](auto x, auto& out) {
        out.push_back(x[0]);
    });
    CHECK_THROWS_AS(lagrangian_extended(fE, c3, {1.0}), std::invalid_argument);

    const ExtendedFunction c2 = make_extended_function(2, [](auto x, auto& out) {
        out.push_back(x[0]);
    });
    const ExtendedFunction L = lagrangian_extended(fE, c2, {1.0, 2.0});
    CHECK_THROWS_AS(eval_components(L, std::vector<double>{1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("hessian results are exactly symmetric by construction") {
    Rng rng(909);
    const ProblemSpec& spec = find_problem("optimal-design-like");
    const ExtendedFunction F = spec.constructor(25);
    const StandardStart start = spec.standard_start(25);
    const HybridState state = prepare_hybrid(F, start.x0, 14);
    const std::vector<double> x = random_point(F, start.x0, rng, 0.3);
    const SymmetricValues H = hessian(F, x, state, SymmetricMethod::substitution, HvpMode::exact);
    for (int i = 0; i < F.n(); ++i)
        for (int j = 0; j < F.n(); ++j) CHECK(H.at(i, j) == H.at(j, i));
}

TEST_CASE("pattern verification flag reports out-of-pattern nonzeros") {
    // A function whose pattern genuinely changes between points: the second
    // component is flat at the preparation point's region but not elsewhere.
    const ExtendedFunction F = make_extended_function(2, [](auto x, auto& out) {
        out.push_back(x[0] * x[0]);
        if (x[1] > 2.0) {
            out.push_back(x[1] * x[1]);
        } else {
            out.push_back(decltype(x[1] * x[1])(0.0));
        }
    });
    HybridState state = prepare_hybrid(F, std::vector<double>{1.0, 1.0}, 4);
    state.verify_pattern = true;
    CHECK_NOTHROW(gradient_compressed(F, std::vector<double>{1.5, 1.5}, state));
    CHECK_THROWS_AS(gradient_compressed(F, std::vector<double>{1.0, 3.0}, state),
                    pattern_stale_error);
}
