#include <catch2/catch_amalgamated.hpp>

#include <lambdaforge/axioms.hpp>
#include <lambdaforge/builtins.hpp>

using namespace lf;

namespace {

FieldExpr gen(const Algebra &a, const char *name, int d = 0) {
    return a.gen_expr(a.gen_index(name), d);
}

} // namespace

TEST_CASE("skew symmetry on structured fields") {
    auto A = make_bcbg(1);
    FieldExpr G = bcbg_supercurrent(*A);
    FieldExpr L = bcbg_virasoro(*A);
    CHECK(skew_residue(*A, G, G).is_zero());
    CHECK(skew_residue(*A, L, L).is_zero());
    CHECK(skew_residue(*A, L, G).is_zero());
    CHECK(skew_residue(*A, gen(*A, "beta1", 2), nprod(*A, gen(*A, "c1"), gen(*A, "b1")))
              .is_zero());
}

TEST_CASE("Jacobi identity on structured fields") {
    auto A = make_bcbg(1);
    FieldExpr G = bcbg_supercurrent(*A);
    FieldExpr L = bcbg_virasoro(*A);
    CHECK(jacobi_residue(*A, L, G, G).is_zero());
    CHECK(jacobi_residue(*A, G, G, G).is_zero());
    CHECK(jacobi_residue(*A, L, L, G).is_zero());
    CHECK(jacobi_residue(*A, gen(*A, "beta1"), gen(*A, "gamma1"), G).is_zero());
}

TEST_CASE("quasi-commutativity and quasi-associativity defects vanish") {
    auto A = make_bcbg(2);
    FieldExpr b1 = gen(*A, "b1"), c2 = gen(*A, "c2"), beta2 = gen(*A, "beta2");
    FieldExpr gamma1 = gen(*A, "gamma1", 1);
    CHECK(quasi_comm_residue(*A, b1, c2).is_zero());
    CHECK(quasi_comm_residue(*A, nprod(*A, b1, beta2), gamma1).is_zero());
    CHECK(quasi_assoc_residue(*A, b1, gen(*A, "c1"), beta2).is_zero());
    CHECK(quasi_assoc_residue(*A, gen(*A, "beta1"), gen(*A, "gamma1"), gamma1).is_zero());
    CHECK(quasi_assoc_residue(*A, nprod(*A, b1, gen(*A, "c1")), beta2, gamma1).is_zero());
}

TEST_CASE("non-commutative Wick formula defect vanishes") {
    auto A = make_bcbg(1);
    FieldExpr beta = gen(*A, "beta1"), gamma = gen(*A, "gamma1");
    FieldExpr b = gen(*A, "b1"), c = gen(*A, "c1");
    CHECK(wick_residue(*A, beta, beta, gamma).is_zero());
    CHECK(wick_residue(*A, beta, gamma, gamma).is_zero());
    CHECK(wick_residue(*A, b, c, nprod(*A, beta, gamma)).is_zero());
    CHECK(wick_residue(*A, bcbg_supercurrent(*A), c, b).is_zero());
}

TEST_CASE("Borcherds identity on a small mode grid") {
    auto A = make_bcbg(1);
    FieldExpr beta = gen(*A, "beta1"), gamma = gen(*A, "gamma1"), c = gen(*A, "c1");
    for (long m = -2; m <= 2; ++m)
        for (long n = -2; n <= 2; ++n)
            for (long k = -2; k <= 2; ++k) {
                INFO("modes (" << m << ", " << n << ", " << k << ")");
                CHECK(borcherds_residue(*A, beta, gamma, c, m, n, k).is_zero());
            }
    // One composite spot with mildly negative modes.
    FieldExpr G = bcbg_supercurrent(*A);
    CHECK(borcherds_residue(*A, G, beta, gamma, 1, -1, 0).is_zero());
    CHECK(borcherds_residue(*A, c, G, G, -1, 1, -1).is_zero());
}

TEST_CASE("randomized identity sweep over two free quadruples") {
    auto A = make_bcbg(2);
    auto rep = axiom_fuzz(*A, 120, 0xa11ce5, 3, 1, 2);
    INFO(rep.first_failure);
    CHECK(rep.failures == 0);
    CHECK(rep.iterations == 120);
    CHECK(rep.checks > 0);
}

TEST_CASE("randomized sweep catches a corrupted table") {
    // Store the (c1, b1) orientation explicitly with the wrong sign. The
    // engine prefers exact-key entries over skew-derived ones, so the two
    // directions now disagree and skew symmetry must fail.
    auto A = make_bcbg(1);
    LambdaPoly bad;
    bad.add(0, FieldExpr::constant(Scalar(-1)), Scalar(1));
    A->table.entries[{A->gen_index("c1"), A->gen_index("b1")}] = bad;
    FieldExpr b = gen(*A, "b1"), c = gen(*A, "c1");
    CHECK(bracket(*A, c, b).nth(0) == FieldExpr::constant(Scalar(-1)));
    CHECK(bracket(*A, b, c).nth(0) == FieldExpr::constant(Scalar(1)));
    CHECK_FALSE(skew_residue(*A, c, b).is_zero());
    auto rep = axiom_fuzz(*A, 40, 0xdead, 2, 1, 1);
    CHECK(rep.failures > 0);
    CHECK_FALSE(rep.first_failure.empty());
}
