#include <catch2/catch_amalgamated.hpp>

#include <lambdaforge/axioms.hpp>
#include <lambdaforge/builtins.hpp>
#include <lambdaforge/engine.hpp>

using namespace lf;

namespace {

FieldExpr gen(const Algebra &a, const char *name, int d = 0) {
    return a.gen_expr(a.gen_index(name), d);
}

} // namespace

TEST_CASE("free-field bracket orientations") {
    auto A = make_bcbg(2);

    // Stored pairs.
    CHECK(bracket(*A, gen(*A, "beta1"), gen(*A, "gamma1")).nth(0) ==
          FieldExpr::constant(Scalar(1)));
    CHECK(bracket(*A, gen(*A, "b1"), gen(*A, "c1")).nth(0) ==
          FieldExpr::constant(Scalar(1)));

    // Skew-derived orientations: [gamma la beta] = -1, [c la b] = +1.
    CHECK(bracket(*A, gen(*A, "gamma1"), gen(*A, "beta1")).nth(0) ==
          FieldExpr::constant(Scalar(-1)));
    CHECK(bracket(*A, gen(*A, "c1"), gen(*A, "b1")).nth(0) ==
          FieldExpr::constant(Scalar(1)));

    // Unrelated quadruples commute (zero-default table).
    CHECK(bracket(*A, gen(*A, "beta1"), gen(*A, "gamma2")).degree() < 0);
    CHECK(bracket(*A, gen(*A, "b1"), gen(*A, "c2")).degree() < 0);
    CHECK(bracket(*A, gen(*A, "gamma1"), gen(*A, "gamma2")).degree() < 0);
}

TEST_CASE("sesquilinearity moves derivatives") {
    auto A = make_bcbg(1);
    FieldExpr beta = gen(*A, "beta1"), gamma = gen(*A, "gamma1");

    // [d(beta) la gamma] = -la [beta la gamma] = -la.
    LambdaPoly p = bracket(*A, derive(*A, beta), gamma);
    CHECK(p.nth(0).is_zero());
    CHECK(p.nth(1) == FieldExpr::constant(Scalar(-1)));

    // [beta la d(gamma)] = (la + d)[beta la gamma] = la.
    LambdaPoly q = bracket(*A, beta, derive(*A, gamma));
    CHECK(q.nth(1) == FieldExpr::constant(Scalar(1)));
    CHECK(q.nth(0).is_zero());
}

TEST_CASE("derivation acts by Leibniz") {
    auto A = make_bcbg(1);
    FieldExpr c = gen(*A, "c1"), b = gen(*A, "b1");
    FieldExpr cb = nprod(*A, c, b);
    CHECK(derive(*A, cb) == nprod(*A, derive(*A, c), b) + nprod(*A, c, derive(*A, b)));
    CHECK(derive(*A, FieldExpr::constant(Scalar(5))).is_zero());
    CHECK(derive(*A, c, 2) == gen(*A, "c1", 2));
}

TEST_CASE("normally ordered rearrangement") {
    auto A = make_bcbg(1);
    FieldExpr c = gen(*A, "c1"), b = gen(*A, "b1");
    FieldExpr beta = gen(*A, "beta1"), gamma = gen(*A, "gamma1");

    // Quasi-commutativity: :ab: - (-1)^{pq} :ba: = int_{-d}^{0} [a la b] dla,
    // stated as a vanishing defect.
    CHECK(quasi_comm_residue(*A, c, b).is_zero());
    CHECK(quasi_comm_residue(*A, beta, gamma).is_zero());
    CHECK(quasi_comm_residue(*A, nprod(*A, beta, c), gamma).is_zero());

    // For [c la b] = 1 constant, the integral term vanishes, so :cb: = -:bc:.
    CHECK(nprod(*A, c, b) == Scalar(-1) * nprod(*A, b, c));

    // For beta/gamma with [beta la gamma] = 1 constant, the correction also
    // vanishes: :gamma beta: = :beta gamma: as expressions.
    CHECK(nprod(*A, gamma, beta) == nprod(*A, beta, gamma));

    // But [beta la :beta gamma:] witnesses the non-commutative Wick formula.
    LambdaPoly w = bracket(*A, beta, nprod(*A, beta, gamma));
    CHECK(w.nth(0) == beta);
}

TEST_CASE("odd generator squares under normal order") {
    auto A = make_bcbg(1);
    FieldExpr c = gen(*A, "c1");
    // :cc: = 0 for a free fermion partner pair (self-bracket zero).
    CHECK(nprod(*A, c, c).is_zero());
    // :(dc) c: is a genuine monomial and :c dc: rewrites against it.
    FieldExpr dc_c = nprod(*A, derive(*A, c), c);
    CHECK_FALSE(dc_c.is_zero());
    FieldExpr c_dc = nprod(*A, c, derive(*A, c));
    CHECK(c_dc == Scalar(-1) * dc_c);
}

TEST_CASE("mode products and the translation identity") {
    auto A = make_bcbg(1);
    FieldExpr beta = gen(*A, "beta1"), gamma = gen(*A, "gamma1");

    // a_(-1)b is the normally ordered product.
    CHECK(nth_product(*A, beta, gamma, -1) == nprod(*A, beta, gamma));
    // a_(-2-j)b = (1/(j+1)!) :(d^{j+1}a) b>:.
    CHECK(nth_product(*A, beta, gamma, -2) == nprod(*A, derive(*A, beta), gamma));
    CHECK(nth_product(*A, beta, gamma, -4) ==
          Scalar(1, 6) * nprod(*A, derive(*A, beta, 3), gamma));
    // Nonnegative modes read off the bracket.
    CHECK(nth_product(*A, beta, gamma, 0) == FieldExpr::constant(Scalar(1)));
    CHECK(nth_product(*A, beta, gamma, 1).is_zero());
}

TEST_CASE("free-field supercurrent and Virasoro structure") {
    for (int n : {1, 2}) {
        auto A = make_bcbg(n);
        FieldExpr G = bcbg_supercurrent(*A);
        FieldExpr L = bcbg_virasoro(*A);

        // D = G_(0) squares to the derivative on every generator.
        for (const auto &g : A->gens) {
            FieldExpr x = A->gen_expr(A->gen_index(g.name));
            CHECK(susy_D(*A, susy_D(*A, x)) == derive(*A, x));
        }
        // D exchanges the pairs: D(gamma) = c, D(c) = d(gamma),
        // D(b) = beta, D(beta) = d(b).
        CHECK(susy_D(*A, gen(*A, "gamma1")) == gen(*A, "c1"));
        CHECK(susy_D(*A, gen(*A, "c1")) == gen(*A, "gamma1", 1));
        CHECK(susy_D(*A, gen(*A, "b1")) == gen(*A, "beta1"));
        CHECK(susy_D(*A, gen(*A, "beta1")) == gen(*A, "b1", 1));

        // [G la G] = 2L + (n/1) la^2 in plain powers: divided j2 = 2n = c/3*2.
        LambdaPoly gg = bracket(*A, G, G);
        CHECK(gg.nth(0) == Scalar(2) * L);
        CHECK(gg.nth(1).is_zero());
        CHECK(gg.nth(2) == FieldExpr::constant(Scalar(2 * n)));
        CHECK(gg.degree() == 2);

        // [L la L]: divided j3 = c/2 with c = 3n.
        LambdaPoly ll = bracket(*A, L, L);
        CHECK(ll.nth(0) == derive(*A, L));
        CHECK(ll.nth(1) == Scalar(2) * L);
        CHECK(ll.nth(2).is_zero());
        CHECK(ll.nth(3) == FieldExpr::constant(Scalar(3 * n, 2)));

        // Declared charge matches the measured one.
        REQUIRE(A->central_charge.has_value());
        CHECK(*A->central_charge == Scalar(3 * n));

        // Weights: gamma 0, c and b 1/2, beta 1; all primary; G primary 3/2.
        auto w = [&](const char *name) { return conformal_weight(*A, L, gen(*A, name)); };
        CHECK(w("gamma1") == Scalar(0));
        CHECK(w("c1") == Scalar(1, 2));
        CHECK(w("b1") == Scalar(1, 2));
        CHECK(w("beta1") == Scalar(1));
        for (const char *nm : {"gamma1", "c1", "b1", "beta1"})
            CHECK(is_primary(*A, L, gen(*A, nm)));
        CHECK(conformal_weight(*A, L, G) == Scalar(3, 2));
        CHECK(is_primary(*A, L, G));
        CHECK(conformal_weight(*A, L, L) == Scalar(2));
        CHECK_FALSE(is_primary(*A, L, L)); // la^3 central term
    }
}

TEST_CASE("supercurrent requires a declaration") {
    auto V = make_builtin("virasoro(1)");
    CHECK_THROWS_AS(susy_D(*V, V->gen_expr(0)), EngineError);
}

TEST_CASE("missing bracket pairs fail loudly") {
    auto S = make_sv_spin7();
    FieldExpr L = gen(*S, "L"), Mb = gen(*S, "Mb");
    // The (L, Mb) pair is not part of the catalogued table and the table has
    // no zero default, so asking for it must raise rather than fabricate.
    CHECK_THROWS_AS(bracket(*S, L, Mb), EngineError);
    CHECK_THROWS_AS(bracket(*S, Mb, L), EngineError);
    // Stored pairs still work.
    CHECK(bracket(*S, L, L).nth(1) == Scalar(2) * L);
}

TEST_CASE("declared weights bound bracket degrees") {
    // A deliberately inconsistent table: two weight-1/2 fermions whose
    // bracket claims a la^5 term. The engine's degree guard refuses it.
    auto A = std::make_shared<Algebra>();
    A->name = "bogus";
    A->gens.push_back({"x", Parity::odd, Rat(1, 2), 0});
    LambdaPoly p;
    p.add(5, FieldExpr::constant(Scalar(1)), Scalar(1));
    A->table.entries[{0, 0}] = p;
    CHECK_THROWS_AS(bracket(*A, A->gen_expr(0), A->gen_expr(0)), EngineError);
}

TEST_CASE("rewrite rules reach normal forms") {
    auto A = make_sv_g2();
    FieldExpr G = gen(*A, "G"), X = gen(*A, "X");
    FieldExpr gx = nprod(*A, G, X);
    FieldExpr nf = apply_rewrites(*A, gx);
    // :G X: itself rewrites into the Phi K expression.
    REQUIRE(A->rewrites.size() == 1);
    CHECK(nf == A->rewrites[0].rhs);
    // The defining relation normalizes to zero.
    REQUIRE(A->relations.size() == 1);
    CHECK(apply_rewrites(*A, A->relations[0]).is_zero());
    // Expressions without the pattern are fixed points.
    CHECK(apply_rewrites(*A, nprod(*A, G, gen(*A, "Phi"))) ==
          nprod(*A, G, gen(*A, "Phi")));
}

TEST_CASE("cross-instance transport preserves structure") {
    auto A1 = make_bcbg(2);
    auto A2 = make_bcbg(2);
    FieldExpr e = nprod(*A1, gen(*A1, "c1"), gen(*A1, "b2")) +
                  Scalar(1, 3) * gen(*A1, "beta1", 2);
    FieldExpr moved = reintern_expr(*A1, e, *A2);
    FieldExpr expect = nprod(*A2, gen(*A2, "c1"), gen(*A2, "b2")) +
                       Scalar(1, 3) * gen(*A2, "beta1", 2);
    CHECK(moved == expect);
    CHECK(algebra_equal(*A1, *A2));
    CHECK_FALSE(algebra_equal(*A1, *make_bcbg(3)));
}
