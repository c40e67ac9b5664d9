#pragma once

#include "engine.hpp"

// The algebra catalog. Every table below stores the printed pairing of its
// presentation; the opposite orientation and all derivative brackets follow
// from skewsymmetry and sesquilinearity inside the engine. Lambda coefficients
// are written here in plain powers and converted to the engine's divided-power
// storage by add_plain.

namespace lf {

namespace detail {
inline void add_plain(LambdaPoly &p, int j, const FieldExpr &e) {
    p.add(j, e, Scalar(factorial(j)));
}
inline FieldExpr vac(const Scalar &s) { return FieldExpr::constant(s); }
} // namespace detail

// Virasoro vertex algebra at central charge c: [L_la L] = (d + 2la)L + c/12 la^3.
inline AlgebraPtr make_virasoro(const Scalar &c) {
    auto A = std::make_shared<Algebra>();
    A->name = "virasoro(" + c.to_string() + ")";
    A->gens = {{"L", Parity::even, Rat(2), 0}};
    A->central_charge = c;
    LambdaPoly p;
    detail::add_plain(p, 0, A->gen_expr(0, 1));
    detail::add_plain(p, 1, Scalar(2) * A->gen_expr(0));
    detail::add_plain(p, 3, detail::vac(c * Scalar(1, 12)));
    A->table.entries[{0, 0}] = p;
    return A;
}

// N=1 (Neveu-Schwarz) superconformal algebra at central charge c.
inline AlgebraPtr make_n1(const Scalar &c) {
    auto A = std::make_shared<Algebra>();
    A->name = "n1(" + c.to_string() + ")";
    A->gens = {{"L", Parity::even, Rat(2), 0}, {"G", Parity::odd, Rat(3, 2), 1}};
    A->central_charge = c;
    const int L = 0, G = 1;
    {
        LambdaPoly p;
        detail::add_plain(p, 0, A->gen_expr(L, 1));
        detail::add_plain(p, 1, Scalar(2) * A->gen_expr(L));
        detail::add_plain(p, 3, detail::vac(c * Scalar(1, 12)));
        A->table.entries[{L, L}] = p;
    }
    {
        LambdaPoly p;
        detail::add_plain(p, 0, A->gen_expr(G, 1));
        detail::add_plain(p, 1, Scalar(3, 2) * A->gen_expr(G));
        A->table.entries[{L, G}] = p;
    }
    {
        LambdaPoly p;
        detail::add_plain(p, 0, Scalar(2) * A->gen_expr(L));
        detail::add_plain(p, 2, detail::vac(c * Scalar(1, 3)));
        A->table.entries[{G, G}] = p;
    }
    A->susy_gen = A->gen_expr(G);
    return A;
}

// N=2 superconformal algebra at central charge c.
inline AlgebraPtr make_n2(const Scalar &c) {
    auto A = std::make_shared<Algebra>();
    A->name = "n2(" + c.to_string() + ")";
    A->gens = {{"L", Parity::even, Rat(2), 0},
               {"J", Parity::even, Rat(1), 1},
               {"Gp", Parity::odd, Rat(3, 2), 2},
               {"Gm", Parity::odd, Rat(3, 2), 3}};
    A->central_charge = c;
    const int L = 0, J = 1, Gp = 2, Gm = 3;
    auto primary = [&](int x, const Rat &w) {
        LambdaPoly p;
        detail::add_plain(p, 0, A->gen_expr(x, 1));
        detail::add_plain(p, 1, Scalar(w) * A->gen_expr(x));
        A->table.entries[{L, x}] = p;
    };
    {
        LambdaPoly p;
        detail::add_plain(p, 0, A->gen_expr(L, 1));
        detail::add_plain(p, 1, Scalar(2) * A->gen_expr(L));
        detail::add_plain(p, 3, detail::vac(c * Scalar(1, 12)));
        A->table.entries[{L, L}] = p;
    }
    primary(J, Rat(1));
    primary(Gp, Rat(3, 2));
    primary(Gm, Rat(3, 2));
    {
        LambdaPoly p;
        detail::add_plain(p, 1, detail::vac(c * Scalar(1, 3)));
        A->table.entries[{J, J}] = p;
    }
    {
        LambdaPoly p;
        detail::add_plain(p, 0, A->gen_expr(Gp));
        A->table.entries[{J, Gp}] = p;
    }
    {
        LambdaPoly p;
        detail::add_plain(p, 0, Scalar(-1) * A->gen_expr(Gm));
        A->table.entries[{J, Gm}] = p;
    }
    A->table.entries[{Gp, Gp}] = LambdaPoly{};
    A->table.entries[{Gm, Gm}] = LambdaPoly{};
    {
        LambdaPoly p;
        detail::add_plain(p, 0, A->gen_expr(L) + Scalar(1, 2) * A->gen_expr(J, 1));
        detail::add_plain(p, 1, A->gen_expr(J));
        detail::add_plain(p, 2, detail::vac(c * Scalar(1, 6)));
        A->table.entries[{Gp, Gm}] = p;
    }
    A->susy_gen = A->gen_expr(Gp) + A->gen_expr(Gm);
    return A;
}

// N=4 superconformal algebra (the small one, sl2-valued currents) at charge c.
inline AlgebraPtr make_n4(const Scalar &c) {
    auto A = std::make_shared<Algebra>();
    A->name = "n4(" + c.to_string() + ")";
    A->gens = {{"L", Parity::even, Rat(2), 0},   {"J0", Parity::even, Rat(1), 1},
               {"Jp", Parity::even, Rat(1), 2},  {"Jm", Parity::even, Rat(1), 3},
               {"Gp", Parity::odd, Rat(3, 2), 4}, {"Gm", Parity::odd, Rat(3, 2), 5},
               {"Gbp", Parity::odd, Rat(3, 2), 6}, {"Gbm", Parity::odd, Rat(3, 2), 7}};
    A->central_charge = c;
    const int L = 0, J0 = 1, Jp = 2, Jm = 3, Gp = 4, Gm = 5, Gbp = 6, Gbm = 7;
    {
        LambdaPoly p;
        detail::add_plain(p, 0, A->gen_expr(L, 1));
        detail::add_plain(p, 1, Scalar(2) * A->gen_expr(L));
        detail::add_plain(p, 3, detail::vac(c * Scalar(1, 12)));
        A->table.entries[{L, L}] = p;
    }
    auto primary = [&](int x, const Rat &w) {
        LambdaPoly p;
        detail::add_plain(p, 0, A->gen_expr(x, 1));
        detail::add_plain(p, 1, Scalar(w) * A->gen_expr(x));
        A->table.entries[{L, x}] = p;
    };
    primary(J0, Rat(1));
    primary(Jp, Rat(1));
    primary(Jm, Rat(1));
    for (int g : {Gp, Gm, Gbp, Gbm})
        primary(g, Rat(3, 2));
    auto linear = [&](int a, int b, const Scalar &coef, int target) {
        LambdaPoly p;
        detail::add_plain(p, 0, coef * A->gen_expr(target));
        A->table.entries[{a, b}] = p;
    };
    {
        LambdaPoly p;
        detail::add_plain(p, 1, detail::vac(c * Scalar(1, 3)));
        A->table.entries[{J0, J0}] = p;
    }
    linear(J0, Jp, Scalar(2), Jp);
    linear(J0, Jm, Scalar(-2), Jm);
    {
        LambdaPoly p;
        detail::add_plain(p, 0, A->gen_expr(J0));
        detail::add_plain(p, 1, detail::vac(c * Scalar(1, 6)));
        A->table.entries[{Jp, Jm}] = p;
    }
    linear(J0, Gp, Scalar(1), Gp);
    linear(J0, Gm, Scalar(-1), Gm);
    linear(J0, Gbp, Scalar(1), Gbp);
    linear(J0, Gbm, Scalar(-1), Gbm);
    linear(Jp, Gm, Scalar(1), Gp);
    linear(Jm, Gp, Scalar(1), Gm);
    linear(Jp, Gbm, Scalar(-1), Gbp);
    linear(Jm, Gbp, Scalar(-1), Gbm);
    auto current_pair = [&](int a, int b, int j) {
        LambdaPoly p;
        detail::add_plain(p, 0, A->gen_expr(j, 1));
        detail::add_plain(p, 1, Scalar(2) * A->gen_expr(j));
        A->table.entries[{a, b}] = p;
    };
    current_pair(Gp, Gbp, Jp);
    current_pair(Gm, Gbm, Jm);
    auto diagonal_pair = [&](int a, int b, const Scalar &sgn) {
        LambdaPoly p;
        detail::add_plain(p, 0, A->gen_expr(L) + sgn * Scalar(1, 2) * A->gen_expr(J0, 1));
        detail::add_plain(p, 1, sgn * A->gen_expr(J0));
        detail::add_plain(p, 2, detail::vac(c * Scalar(1, 6)));
        A->table.entries[{a, b}] = p;
    };
    diagonal_pair(Gp, Gbm, Scalar(1));
    diagonal_pair(Gm, Gbp, Scalar(-1));
    for (auto [a, b] : std::initializer_list<std::pair<int, int>>{{Jp, Jp},
                                                                  {Jm, Jm},
                                                                  {Jp, Gp},
                                                                  {Jm, Gm},
                                                                  {Jp, Gbp},
                                                                  {Jm, Gbm},
                                                                  {Gp, Gp},
                                                                  {Gp, Gm},
                                                                  {Gm, Gm},
                                                                  {Gbp, Gbp},
                                                                  {Gbp, Gbm},
                                                                  {Gbm, Gbm}})
        A->table.entries[{a, b}] = LambdaPoly{};
    return A;
}

// n quadruples of free fields: an even (beta, gamma) pair of weights (1, 0)
// and an odd (b, c) pair of weights (1/2, 1/2) each, with [beta_la gamma] = 1
// and [b_la c] = 1; all other pairings vanish (zero-default table).
inline AlgebraPtr make_bcbg(int n) {
    if (n < 1 || n > 1024)
        throw std::invalid_argument("bcbg quadruple count must be in [1, 1024]");
    auto A = std::make_shared<Algebra>();
    A->name = "bcbg" + std::to_string(n);
    A->quadruples = n;
    auto family = [&](const char *stem, Parity par, const Rat &w, int base) {
        for (int i = 0; i < n; ++i)
            A->gens.push_back({stem + std::to_string(i + 1), par, w, base + i});
    };
    family("gamma", Parity::even, Rat(0), 0);
    family("c", Parity::odd, Rat(1, 2), n);
    family("b", Parity::odd, Rat(1, 2), 2 * n);
    family("beta", Parity::even, Rat(1), 3 * n);
    A->table.zero_default = true;
    for (int i = 0; i < n; ++i) {
        LambdaPoly one;
        detail::add_plain(one, 0, detail::vac(Scalar(1)));
        A->table.entries[{3 * n + i, i}] = one;     // [beta_i la gamma_i] = 1
        A->table.entries[{2 * n + i, n + i}] = one; // [b_i la c_i] = 1
    }
    // Central charge: each quadruple contributes 2 (the weight-(1,0) even
    // pair) plus 1 (the weight-(1/2,1/2) odd pair).
    A->central_charge = Scalar(3 * n);
    FieldExpr G;
    for (int i = 0; i < n; ++i) {
        G.add(A->intern({{static_cast<uint16_t>(n + i), 0}, {static_cast<uint16_t>(3 * n + i), 0}}),
              Scalar(1)); // :c_i beta_i:
        G.add(A->intern({{static_cast<uint16_t>(i), 1}, {static_cast<uint16_t>(2 * n + i), 0}}),
              Scalar(1)); // :(d gamma_i) b_i:
    }
    A->susy_gen = G;
    return A;
}

// The standard supercurrent G = sum_i :c^i beta_i: + :(d gamma^i) b_i:.
inline FieldExpr bcbg_supercurrent(const Algebra &alg) {
    if (alg.quadruples < 1 || !alg.susy_gen)
        throw std::invalid_argument("not a bcbg algebra: no quadruple structure");
    return *alg.susy_gen;
}

// The standard Virasoro vector L = sum_i :(d gamma^i) beta_i: - 1/2 :c^i d(b_i): +
// 1/2 :(d c^i) b_i:, of central charge 3 per quadruple.
inline FieldExpr bcbg_virasoro(const Algebra &alg) {
    int n = alg.quadruples;
    if (n < 1)
        throw std::invalid_argument("not a bcbg algebra: no quadruple structure");
    FieldExpr L;
    auto u16 = [](int v) { return static_cast<uint16_t>(v); };
    for (int i = 0; i < n; ++i) {
        L.add(alg.intern({{u16(i), 1}, {u16(3 * n + i), 0}}), Scalar(1));
        L.add(alg.intern({{u16(n + i), 0}, {u16(2 * n + i), 1}}), Scalar(-1, 2));
        L.add(alg.intern({{u16(n + i), 1}, {u16(2 * n + i), 0}}), Scalar(1, 2));
    }
    return L;
}

// The G2 superconformal algebra: the c = 21/2 extension of N=1 by a primary
// 3/2 (Phi), a primary 2 (K), a weight-2 (X) and a weight-5/2 (M) field,
// with one normally ordered relation orienting :G X: for normal forms.
inline AlgebraPtr make_sv_g2() {
    auto A = std::make_shared<Algebra>();
    A->name = "sv_g2";
    A->gens = {{"L", Parity::even, Rat(2), 0},   {"G", Parity::odd, Rat(3, 2), 1},
               {"Phi", Parity::odd, Rat(3, 2), 2}, {"K", Parity::even, Rat(2), 3},
               {"X", Parity::even, Rat(2), 4},   {"M", Parity::odd, Rat(5, 2), 5}};
    A->central_charge = Scalar(21, 2);
    const int L = 0, G = 1, Phi = 2, K = 3, X = 4, M = 5;
    auto E = [&](int g, int d = 0) { return A->gen_expr(g, d); };
    auto W = [&](std::initializer_list<Factor> f) {
        return FieldExpr::term(A->intern(f), Scalar(1));
    };
    auto add = [&](int a, int b, std::initializer_list<std::pair<int, FieldExpr>> plain) {
        LambdaPoly p;
        for (const auto &[j, e] : plain)
            detail::add_plain(p, j, e);
        A->table.entries[{a, b}] = p;
    };
    const FieldExpr GPhi = W({{G, 0}, {Phi, 0}});
    const FieldExpr GK = W({{G, 0}, {K, 0}});
    const FieldExpr GX = W({{G, 0}, {X, 0}});
    const FieldExpr GM = W({{G, 0}, {M, 0}});
    const FieldExpr LPhi = W({{L, 0}, {Phi, 0}});
    const FieldExpr LX = W({{L, 0}, {X, 0}});
    const FieldExpr PhiK = W({{Phi, 0}, {K, 0}});

    add(L, L, {{0, E(L, 1)}, {1, Scalar(2) * E(L)}, {3, detail::vac(Scalar(7, 8))}});
    add(L, G, {{0, E(G, 1)}, {1, Scalar(3, 2) * E(G)}});
    add(L, Phi, {{0, E(Phi, 1)}, {1, Scalar(3, 2) * E(Phi)}});
    add(L, K, {{0, E(K, 1)}, {1, Scalar(2) * E(K)}});
    add(L, X, {{0, E(X, 1)}, {1, Scalar(2) * E(X)}, {3, detail::vac(Scalar(-7, 24))}});
    add(L, M, {{0, E(M, 1)}, {1, Scalar(5, 2) * E(M)}, {2, Scalar(-1, 4) * E(G)}});
    add(G, G, {{0, Scalar(2) * E(L)}, {2, detail::vac(Scalar(7, 2))}});
    add(G, Phi, {{0, E(K)}});
    add(G, K, {{0, E(Phi, 1)}, {1, Scalar(3) * E(Phi)}});
    add(G, X, {{0, E(M)}, {1, Scalar(-1, 2) * E(G)}});
    add(G, M, {{0, E(X, 1)}, {1, E(L) + Scalar(4) * E(X)}, {3, detail::vac(Scalar(-7, 12))}});
    add(Phi, Phi, {{0, Scalar(6) * E(X)}, {2, detail::vac(Scalar(-7, 2))}});
    add(Phi, K, {{0, Scalar(-3) * E(M) + Scalar(-3, 2) * E(G, 1)}, {1, Scalar(-3) * E(G)}});
    add(Phi, X, {{0, Scalar(-5, 2) * E(Phi, 1)}, {1, Scalar(-15, 2) * E(Phi)}});
    add(Phi, M, {{0, Scalar(-3) * GPhi + Scalar(5, 2) * E(K, 1)}, {1, Scalar(9, 2) * E(K)}});
    add(X, X, {{0, Scalar(-5) * E(X, 1)}, {1, Scalar(-10) * E(X)}, {3, detail::vac(Scalar(35, 24))}});
    add(X, K, {{0, Scalar(3) * GPhi + Scalar(-3) * E(K, 1)}, {1, Scalar(-3) * E(K)}});
    add(X, M, {{0, Scalar(4) * GX + Scalar(-7, 2) * E(M, 1) + Scalar(-3, 4) * E(G, 2)},
               {1, Scalar(-5) * E(M) + Scalar(-9, 4) * E(G, 1)},
               {2, Scalar(-9, 4) * E(G)}});
    add(K, K, {{0, Scalar(3) * E(X, 1) + Scalar(-3) * E(L, 1)},
               {1, Scalar(6) * E(X) + Scalar(-6) * E(L)},
               {3, detail::vac(Scalar(-7, 2))}});
    add(K, M, {{0, Scalar(3) * GK + Scalar(-6) * LPhi},
               {1, Scalar(-11, 2) * E(Phi, 1)},
               {2, Scalar(-15, 2) * E(Phi)}});
    add(M, M, {{0, Scalar(3, 2) * E(X, 2) + Scalar(-3, 2) * E(L, 2) + Scalar(-4) * GM +
                       Scalar(8) * LX},
               {1, Scalar(10) * E(X, 1) + Scalar(-9, 2) * E(L, 1)},
               {2, Scalar(10) * E(X) + Scalar(-9, 2) * E(L)},
               {4, detail::vac(Scalar(-35, 24))}});

    // The ideal relation 0 = 4:GX: - 2:PhiK: - 4 dM - d^2 G, oriented to
    // eliminate :G X: when normalizing.
    FieldExpr rel = Scalar(4) * GX - Scalar(2) * PhiK - Scalar(4) * E(M, 1) - E(G, 2);
    A->relations.push_back(rel);
    Rewrite rw;
    rw.lhs_head = Factor{static_cast<uint16_t>(G), 0};
    rw.lhs_tail = Factor{static_cast<uint16_t>(X), 0};
    rw.rhs = Scalar(1, 2) * PhiK + Scalar(1) * E(M, 1) + Scalar(1, 4) * E(G, 2);
    A->rewrites.push_back(rw);
    A->susy_gen = E(G);
    return A;
}

// The Spin(7) superconformal algebra: the c = 12 extension of N=1 by a
// weight-2 field (Xb) and its odd partner (Mb). Only the printed pairs are
// stored; the (L, Mb) pair is not part of the catalogued presentation, so the
// table is not zero-defaulted and touching that pair is an error.
inline AlgebraPtr make_sv_spin7() {
    auto A = std::make_shared<Algebra>();
    A->name = "sv_spin7";
    A->gens = {{"L", Parity::even, Rat(2), 0},
               {"G", Parity::odd, Rat(3, 2), 1},
               {"Xb", Parity::even, Rat(2), 2},
               {"Mb", Parity::odd, Rat(5, 2), 3}};
    A->central_charge = Scalar(12);
    const int L = 0, G = 1, Xb = 2, Mb = 3;
    auto E = [&](int g, int d = 0) { return A->gen_expr(g, d); };
    auto W = [&](std::initializer_list<Factor> f) {
        return FieldExpr::term(A->intern(f), Scalar(1));
    };
    auto add = [&](int a, int b, std::initializer_list<std::pair<int, FieldExpr>> plain) {
        LambdaPoly p;
        for (const auto &[j, e] : plain)
            detail::add_plain(p, j, e);
        A->table.entries[{a, b}] = p;
    };
    add(L, L, {{0, E(L, 1)}, {1, Scalar(2) * E(L)}, {3, detail::vac(Scalar(1))}});
    add(L, G, {{0, E(G, 1)}, {1, Scalar(3, 2) * E(G)}});
    add(G, G, {{0, Scalar(2) * E(L)}, {2, detail::vac(Scalar(4))}});
    add(L, Xb, {{0, E(Xb, 1)}, {1, Scalar(2) * E(Xb)}, {3, detail::vac(Scalar(1, 3))}});
    add(Xb, Xb, {{0, Scalar(8) * E(Xb, 1)}, {1, Scalar(16) * E(Xb)}, {3, detail::vac(Scalar(8, 3))}});
    add(G, Xb, {{0, E(Mb)}, {1, Scalar(1, 2) * E(G)}});
    add(G, Mb, {{0, E(Xb, 1)}, {1, Scalar(-1) * E(L) + Scalar(4) * E(Xb)},
                {3, detail::vac(Scalar(2, 3))}});
    add(Xb, Mb, {{0, Scalar(11, 2) * E(Mb, 1) + Scalar(-5, 4) * E(G, 2) +
                         Scalar(-6) * W({{G, 0}, {Xb, 0}})},
                 {1, Scalar(-15, 4) * E(G, 1) + Scalar(8) * E(Mb)},
                 {2, Scalar(-15, 4) * E(G)}});
    add(Mb, Mb, {{0, Scalar(-5, 2) * E(Xb, 2) + Scalar(-5, 2) * E(L, 2) +
                         Scalar(-12) * W({{L, 0}, {Xb, 0}}) + Scalar(6) * W({{G, 0}, {Mb, 0}})},
                 {1, Scalar(-15, 2) * E(L, 1) + Scalar(-16) * E(Xb, 1)},
                 {2, Scalar(-15, 2) * E(L) + Scalar(-16) * E(Xb)},
                 {4, detail::vac(Scalar(-8, 3))}});
    A->susy_gen = E(G);
    return A;
}

// --- catalog lookup -----------------------------------------------------------

// Builtin reference grammar: NAME, NAME(PARAM) with PARAM a rational, or the
// compact bcbgN. Families with a free central charge require the parameter.
inline AlgebraPtr make_builtin(const std::string &spec) {
    std::string name = spec, param;
    bool has_param = false;
    auto lp = spec.find('(');
    if (lp != std::string::npos) {
        if (spec.back() != ')')
            throw std::invalid_argument("malformed builtin reference: " + spec);
        name = spec.substr(0, lp);
        param = spec.substr(lp + 1, spec.size() - lp - 2);
        has_param = true;
    }
    auto rat_param = [&]() -> Scalar {
        if (!has_param)
            throw std::invalid_argument("builtin " + name +
                                        " requires a central charge, e.g. " + name + "(21/2)");
        try {
            return Scalar(Rat(param));
        } catch (const std::exception &) {
            throw std::invalid_argument("builtin parameter must be rational: " + spec);
        }
    };
    auto int_param = [&](const std::string &digits) -> int {
        if (digits.empty() || digits.size() > 4 ||
            digits.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("builtin quadruple count must be an integer: " + spec);
        return std::stoi(digits);
    };
    if (name == "sv_g2" && !has_param)
        return make_sv_g2();
    if (name == "sv_spin7" && !has_param)
        return make_sv_spin7();
    if (name == "virasoro")
        return make_virasoro(rat_param());
    if (name == "n1")
        return make_n1(rat_param());
    if (name == "n2")
        return make_n2(rat_param());
    if (name == "n4")
        return make_n4(rat_param());
    if (name == "bcbg" && has_param)
        return make_bcbg(int_param(param));
    if (name == "bcbg")
        throw std::invalid_argument("builtin bcbg requires a quadruple count, e.g. bcbg7");
    if (!has_param && name.size() > 4 && name.rfind("bcbg", 0) == 0)
        return make_bcbg(int_param(name.substr(4)));
    throw std::invalid_argument("unknown builtin algebra: " + spec);
}

// Representative instances of every catalog family (used by round-trip tests).
inline std::vector<std::string> builtin_specs() {
    return {"virasoro(0)", "virasoro(1)", "n1(21/2)", "n2(3)",  "n4(6)",
            "bcbg1",       "bcbg2",       "bcbg7",    "sv_g2",  "sv_spin7"};
}

} // namespace lf
