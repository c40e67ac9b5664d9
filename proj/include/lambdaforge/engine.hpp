#pragma once

#include "terms.hpp"

// Core computational engine: canonical normal ordering, lambda brackets, the
// translation operator, and the general n-th products, all over an Algebra's
// stored bracket table. Every recursion is driven by four identities:
//
//   sesquilinearity   [da_la b] = -la*[a_la b],  [a_la db] = (la+d)[a_la b]
//   skewsymmetry      [b_la a]  = -(-1)^{p(a)p(b)} [a_{-la-d} b]
//   quasi-assoc．      ::ab:c: - :a:bc:: = :(int_0^d a)[b_la c]:
//                                          + (-1)^{p(a)p(b)} :(int_0^d b)[a_la c]:
//   Wick (right)      [a_la :bc:] = :[a_la b]c: + (-1)^{p(a)p(b)}:b[a_la c]:
//                                          + int_0^la [[a_la b]_mu c] dmu
//
// plus the mode identity a_(-2-j)b = (1/(j+1)!) :(d^{j+1}a) b: used to fold
// straightening corrections into normally ordered words.

namespace lf {

class EngineError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {
inline thread_local int engine_depth = 0;
struct DepthGuard {
    DepthGuard() {
        if (++engine_depth > 256) {
            --engine_depth;
            throw EngineError("engine recursion depth exceeded");
        }
    }
    ~DepthGuard() { --engine_depth; }
    DepthGuard(const DepthGuard &) = delete;
};
inline uint64_t pair_key(MonoId a, MonoId b) { return (static_cast<uint64_t>(a) << 32) | b; }
} // namespace detail

inline Rat factorial(long n) {
    Rat r = 1;
    for (long t = 2; t <= n; ++t)
        r *= t;
    return r;
}

// Binomial coefficient C(n, j) for arbitrary integer n and j >= 0.
inline Rat gen_binom(long n, long j) {
    if (j < 0)
        return 0;
    Rat num = 1;
    for (long t = 0; t < j; ++t)
        num *= Rat(n - t);
    return num / factorial(j);
}

// --- declarations (the recursions are mutually recursive) -------------------

inline FieldExpr prepend_mono(const Algebra &alg, Factor f, MonoId m);
inline FieldExpr prepend_expr(const Algebra &alg, Factor f, const FieldExpr &e);
inline FieldExpr word_state(const Algebra &alg, const std::vector<Factor> &w);
inline FieldExpr derive(const Algebra &alg, const FieldExpr &e, int times = 1);
inline FieldExpr nprod_mono(const Algebra &alg, MonoId m1, MonoId m2);
inline FieldExpr nprod(const Algebra &alg, const FieldExpr &a, const FieldExpr &b);
inline LambdaPoly bracket_mono(const Algebra &alg, MonoId m1, MonoId m2);
inline LambdaPoly bracket(const Algebra &alg, const FieldExpr &a, const FieldExpr &b);
inline FieldExpr qa_correction(const Algebra &alg, const FieldExpr &a, Parity pa,
                               const FieldExpr &b, Parity pb, const FieldExpr &c);

// --- lambda-polynomial calculus (divided-power coefficients) -----------------

// Multiply by lambda: divided coefficients shift with a factor j+1.
inline LambdaPoly mul_lambda(const LambdaPoly &p) {
    LambdaPoly q;
    for (const auto &[j, e] : p.coeffs())
        q.add(j + 1, e, Scalar(j + 1));
    return q;
}

// Apply (lambda + d), with d acting on the coefficient expressions.
inline LambdaPoly lambda_plus_del(const Algebra &alg, const LambdaPoly &p) {
    LambdaPoly q = mul_lambda(p);
    for (const auto &[j, e] : p.coeffs())
        q.add(j, derive(alg, e));
    return q;
}

// int_0^lambda P(mu) dmu — in divided powers simply a shift.
inline LambdaPoly int_0_lambda(const LambdaPoly &p) {
    LambdaPoly q;
    for (const auto &[j, e] : p.coeffs())
        q.add(j + 1, e);
    return q;
}

// int_{-d}^0 P(lambda) dlambda = sum_j (-1)^j/(j+1)! d^{j+1} P_j.
inline FieldExpr int_neg_del_0(const Algebra &alg, const LambdaPoly &p) {
    FieldExpr out;
    for (const auto &[j, e] : p.coeffs())
        out.add(derive(alg, e, j + 1), Scalar(Rat(j % 2 == 0 ? 1 : -1) / factorial(j + 1)));
    return out;
}

// Skewsymmetry: from P = [a_la b] produce [b_la a] = -(-1)^{p(a)p(b)} P(-la-d).
inline LambdaPoly skew_flip(const Algebra &alg, const LambdaPoly &p, Parity pa, Parity pb) {
    Scalar outer = (pa == Parity::odd && pb == Parity::odd) ? Scalar(1) : Scalar(-1);
    LambdaPoly q;
    for (const auto &[j, e] : p.coeffs())
        for (int k = 0; k <= j; ++k)
            q.add(k, derive(alg, e, j - k),
                  outer * Scalar(Rat(j % 2 == 0 ? 1 : -1) / factorial(j - k)));
    return q;
}

// --- bracket ----------------------------------------------------------------

// Bracket of two single factors: table lookup on the generator pair (stored
// orientation or its skew flip), then sesquilinearity for the derivatives.
inline LambdaPoly bracket_single(const Algebra &alg, Factor a, Factor b) {
    LambdaPoly base;
    auto it = alg.table.entries.find({a.gen, b.gen});
    if (it != alg.table.entries.end()) {
        base = it->second;
    } else {
        auto jt = alg.table.entries.find({b.gen, a.gen});
        if (jt != alg.table.entries.end())
            base = skew_flip(alg, jt->second, alg.gens[a.gen].parity, alg.gens[b.gen].parity);
        else if (!alg.table.zero_default)
            throw EngineError("no bracket stored for generator pair (" + alg.gens[a.gen].name +
                              ", " + alg.gens[b.gen].name + ")");
    }
    for (int t = 0; t < a.dorder; ++t)
        base = Scalar(-1) * mul_lambda(base);
    for (int t = 0; t < b.dorder; ++t)
        base = lambda_plus_del(alg, base);
    return base;
}

inline LambdaPoly bracket_mono(const Algebra &alg, MonoId m1, MonoId m2) {
    if (m1 == kVacuum || m2 == kVacuum)
        return {};
    const uint64_t key = detail::pair_key(m1, m2);
    if (auto hit = alg.memo_bracket_find(key))
        return *hit;
    detail::DepthGuard guard;
    const MonoData d1 = alg.mono(m1), d2 = alg.mono(m2);
    LambdaPoly out;
    if (d2.factors.size() >= 2) {
        // Non-commutative Wick on the right factorization m2 = :h r:.
        Factor h = d2.factors.front();
        MonoId r = alg.intern({d2.factors.begin() + 1, d2.factors.end()});
        FieldExpr r_expr = FieldExpr::term(r, Scalar(1));
        LambdaPoly b1 = bracket_mono(alg, m1, alg.intern({h}));
        LambdaPoly b2 = bracket_mono(alg, m1, r);
        Parity ph = alg.gens[h.gen].parity;
        Scalar koszul =
            (d1.parity == Parity::odd && ph == Parity::odd) ? Scalar(-1) : Scalar(1);
        for (const auto &[j, e] : b1.coeffs())
            out.add(j, nprod(alg, e, r_expr));
        for (const auto &[j, e] : b2.coeffs())
            out.add(j, prepend_expr(alg, h, e), koszul);
        // int_0^la [[a_la h]_mu r] dmu.
        for (const auto &[j, e] : b1.coeffs()) {
            LambdaPoly cj = bracket(alg, e, r_expr);
            for (const auto &[k, f] : cj.coeffs())
                out.add(j + k + 1, f, Scalar(gen_binom(j + k + 1, j)));
        }
    } else if (d1.factors.size() >= 2) {
        out = skew_flip(alg, bracket_mono(alg, m2, m1), d1.parity, d2.parity);
    } else {
        out = bracket_single(alg, d1.factors[0], d2.factors[0]);
    }
    // Weight bound: a_(j)b has weight wt(a)+wt(b)-j-1, and in a nonnegatively
    // graded algebra nonzero states need weight >= 0. A violation means the
    // stored table is inconsistent with the declared weights.
    if (!out.is_zero() && d1.weight && d2.weight &&
        Rat(out.degree()) > *d1.weight + *d2.weight - 1)
        throw EngineError("bracket degree exceeds the weight bound; table and declared "
                          "weights are inconsistent");
    alg.memo_bracket_store(key, std::make_shared<const LambdaPoly>(out));
    return out;
}

inline LambdaPoly bracket(const Algebra &alg, const FieldExpr &a, const FieldExpr &b) {
    LambdaPoly out;
    for (const auto &[m1, s1] : a.terms())
        for (const auto &[m2, s2] : b.terms())
            out.add(bracket_mono(alg, m1, m2), s1 * s2);
    return out;
}

// --- normal ordering ---------------------------------------------------------

// f_(-1) applied to a canonical monomial: insertion sort with straightening
// corrections. The correction integral int_{-d}^0 [f_la g] dla vanishes in
// free algebras (constant brackets), where this reduces to Koszul reordering.
inline FieldExpr prepend_mono(const Algebra &alg, Factor f, MonoId m) {
    detail::DepthGuard guard;
    const MonoData md = alg.mono(m);
    if (md.factors.empty())
        return FieldExpr::term(alg.intern({f}), Scalar(1));
    Factor g = md.factors.front();
    Parity pf = alg.gens[f.gen].parity, pg = alg.gens[g.gen].parity;
    if (alg.factor_less(f, g) || (f == g && pf == Parity::even)) {
        std::vector<Factor> w;
        w.reserve(md.factors.size() + 1);
        w.push_back(f);
        w.insert(w.end(), md.factors.begin(), md.factors.end());
        return FieldExpr::term(alg.intern(w), Scalar(1));
    }
    MonoId r = alg.intern({md.factors.begin() + 1, md.factors.end()});
    FieldExpr r_expr = FieldExpr::term(r, Scalar(1));
    FieldExpr corr =
        int_neg_del_0(alg, bracket_single(alg, f, g)); // int_{-d}^0 [f_la g] dla
    if (f == g) {
        // Odd square: 2 f_(-1)(f_(-1)r) = :(int_{-d}^0 [f_la f] dla) r:.
        return Scalar(Rat(1, 2)) * nprod(alg, corr, r_expr);
    }
    Scalar sign = (pf == Parity::odd && pg == Parity::odd) ? Scalar(-1) : Scalar(1);
    FieldExpr out = sign * prepend_expr(alg, g, prepend_mono(alg, f, r));
    out.add(nprod(alg, corr, r_expr));
    return out;
}

inline FieldExpr prepend_expr(const Algebra &alg, Factor f, const FieldExpr &e) {
    FieldExpr out;
    for (const auto &[m, s] : e.terms())
        out.add(prepend_mono(alg, f, m), s);
    return out;
}

// The canonical state of an arbitrary factor word read as a right-nested
// normally ordered product f1_(-1)(f2_(-1)(... |0>)).
inline FieldExpr word_state(const Algebra &alg, const std::vector<Factor> &w) {
    if (alg.factor_canonical(w))
        return FieldExpr::term(alg.intern(w), Scalar(1));
    FieldExpr acc = FieldExpr::term(kVacuum, Scalar(1));
    for (auto it = w.rbegin(); it != w.rend(); ++it)
        acc = prepend_expr(alg, *it, acc);
    return acc;
}

// Translation operator d (derivation of all products, Leibniz over factors).
inline FieldExpr derive(const Algebra &alg, const FieldExpr &e, int times) {
    FieldExpr cur = e;
    for (int t = 0; t < times; ++t) {
        FieldExpr next;
        for (const auto &[m, s] : cur.terms()) {
            const MonoData d = alg.mono(m);
            for (std::size_t i = 0; i < d.factors.size(); ++i) {
                std::vector<Factor> w = d.factors;
                ++w[i].dorder;
                next.add(word_state(alg, w), s);
            }
        }
        cur = std::move(next);
    }
    return cur;
}

// Quasi-associativity defect ::ab:c: - :a:bc:: for homogeneous a, b.
inline FieldExpr qa_correction(const Algebra &alg, const FieldExpr &a, Parity pa,
                               const FieldExpr &b, Parity pb, const FieldExpr &c) {
    FieldExpr out;
    LambdaPoly bc = bracket(alg, b, c);
    for (const auto &[j, e] : bc.coeffs())
        out.add(nprod(alg, derive(alg, a, j + 1), e), Scalar(Rat(1) / factorial(j + 1)));
    LambdaPoly ac = bracket(alg, a, c);
    Scalar sign = (pa == Parity::odd && pb == Parity::odd) ? Scalar(-1) : Scalar(1);
    for (const auto &[j, e] : ac.coeffs())
        out.add(nprod(alg, derive(alg, b, j + 1), e), sign * Scalar(Rat(1) / factorial(j + 1)));
    return out;
}

inline FieldExpr nprod_mono(const Algebra &alg, MonoId m1, MonoId m2) {
    if (m1 == kVacuum)
        return FieldExpr::term(m2, Scalar(1));
    if (m2 == kVacuum)
        return FieldExpr::term(m1, Scalar(1));
    const uint64_t key = detail::pair_key(m1, m2);
    if (auto hit = alg.memo_nprod_find(key))
        return *hit;
    detail::DepthGuard guard;
    const MonoData d1 = alg.mono(m1);
    FieldExpr out;
    if (d1.factors.size() == 1) {
        out = prepend_mono(alg, d1.factors[0], m2);
    } else {
        // :(f r) m2: = :f :r m2:: + quasi-associativity defect.
        Factor f = d1.factors.front();
        MonoId r = alg.intern({d1.factors.begin() + 1, d1.factors.end()});
        out = prepend_expr(alg, f, nprod_mono(alg, r, m2));
        out.add(qa_correction(alg, FieldExpr::term(alg.intern({f}), Scalar(1)),
                              alg.gens[f.gen].parity, FieldExpr::term(r, Scalar(1)),
                              alg.mono_parity(r), FieldExpr::term(m2, Scalar(1))));
    }
    alg.memo_nprod_store(key, std::make_shared<const FieldExpr>(out));
    return out;
}

inline FieldExpr nprod(const Algebra &alg, const FieldExpr &a, const FieldExpr &b) {
    FieldExpr out;
    for (const auto &[m1, s1] : a.terms())
        for (const auto &[m2, s2] : b.terms())
            out.add(nprod_mono(alg, m1, m2), s1 * s2);
    return out;
}

// General n-th product for any integer n: bracket coefficients for n >= 0,
// normal ordering at n = -1, and a_(-1-k)b = (1/k!):(d^k a) b: below that.
inline FieldExpr nth_product(const Algebra &alg, const FieldExpr &a, const FieldExpr &b,
                             long n) {
    if (n >= 0)
        return bracket(alg, a, b).nth(static_cast<int>(n));
    if (n == -1)
        return nprod(alg, a, b);
    long k = -n - 1;
    return Scalar(Rat(1) / factorial(k)) * nprod(alg, derive(alg, a, static_cast<int>(k)), b);
}

// The odd derivation D = G_(0) attached to a distinguished supercurrent.
inline FieldExpr susy_D(const Algebra &alg, const FieldExpr &a) {
    if (!alg.susy_gen)
        throw EngineError("algebra has no distinguished supercurrent");
    return bracket(alg, *alg.susy_gen, a).nth(0);
}

// Weight of an L-eigenvector: requires [L_la a] = d(a) + Delta*la*a + O(la^2).
// Empty when a is not an eigenvector of L_(1) or L_(0) does not act as d.
inline std::optional<Scalar> conformal_weight(const Algebra &alg, const FieldExpr &L,
                                              const FieldExpr &a) {
    if (a.is_zero())
        return std::nullopt;
    LambdaPoly b = bracket(alg, L, a);
    if (!(b.nth(0) == derive(alg, a)))
        return std::nullopt;
    FieldExpr w1 = b.nth(1);
    const auto &[m0, s0] = *a.terms().begin();
    auto it = w1.terms().find(m0);
    Scalar delta = it == w1.terms().end() ? Scalar(0) : it->second / s0;
    if (!(w1 == delta * a))
        return std::nullopt;
    return delta;
}

// Primary of weight Delta: additionally no la^2 or higher terms.
inline bool is_primary(const Algebra &alg, const FieldExpr &L, const FieldExpr &a) {
    return conformal_weight(alg, L, a).has_value() && bracket(alg, L, a).degree() <= 1;
}

// --- rewriting modulo the relation ideal -------------------------------------

namespace detail {
inline FieldExpr rewrite_mono_once(const Algebra &alg, MonoId m, bool &changed) {
    const MonoData d = alg.mono(m);
    for (std::size_t i = 0; i + 1 < d.factors.size(); ++i) {
        for (const Rewrite &rw : alg.rewrites) {
            if (!(d.factors[i] == rw.lhs_head) || !(d.factors[i + 1] == rw.lhs_tail))
                continue;
            changed = true;
            // The sub-state at i is :head (tail T):. Transport the two-factor
            // rewrite through quasi-associativity:
            //   :head (tail T): = :(head tail) T: - qa_defect(head, tail, T)
            // and replace the two-factor state :head tail: by its rewrite.
            FieldExpr t = FieldExpr::term(alg.intern({d.factors.begin() + i + 2, d.factors.end()}),
                                          Scalar(1));
            FieldExpr head = FieldExpr::term(alg.intern({rw.lhs_head}), Scalar(1));
            FieldExpr tail = FieldExpr::term(alg.intern({rw.lhs_tail}), Scalar(1));
            FieldExpr sub = nprod(alg, rw.rhs, t) -
                            qa_correction(alg, head, alg.gens[rw.lhs_head.gen].parity, tail,
                                          alg.gens[rw.lhs_tail.gen].parity, t);
            for (std::size_t k = i; k-- > 0;)
                sub = prepend_expr(alg, d.factors[k], sub);
            return sub;
        }
    }
    return FieldExpr::term(m, Scalar(1));
}
} // namespace detail

// Normal form of an expression under the algebra's oriented rewrites; used to
// compare expressions modulo the relation ideal.
inline FieldExpr apply_rewrites(const Algebra &alg, FieldExpr e) {
    if (alg.rewrites.empty())
        return e;
    for (int sweep = 0; sweep < 64; ++sweep) {
        bool changed = false;
        FieldExpr next;
        for (const auto &[m, s] : e.terms())
            next.add(detail::rewrite_mono_once(alg, m, changed), s);
        e = std::move(next);
        if (!changed)
            return e;
    }
    throw EngineError("rewrite system did not reach a normal form in 64 sweeps");
}

// --- cross-instance comparison ------------------------------------------------

// Re-intern an expression of `src` into `dst`; generator indices must agree.
inline FieldExpr reintern_expr(const Algebra &src, const FieldExpr &e, const Algebra &dst) {
    FieldExpr out;
    for (const auto &[m, s] : e.terms())
        out.add(dst.intern(src.mono(m).factors), s);
    return out;
}

inline bool poly_equal_across(const Algebra &src, const LambdaPoly &p, const Algebra &dst,
                              const LambdaPoly &q) {
    if (p.coeffs().size() != q.coeffs().size())
        return false;
    for (const auto &[j, e] : p.coeffs())
        if (!(reintern_expr(src, e, dst) == q.nth(j)))
            return false;
    return true;
}

// Structural equality of two algebra definitions (same generators, stored
// bracket entries, relations, rewrites and charge), independent of intern ids.
inline bool algebra_equal(const Algebra &a, const Algebra &b) {
    if (a.name != b.name || !(a.gens == b.gens) || a.table.zero_default != b.table.zero_default)
        return false;
    if (a.table.entries.size() != b.table.entries.size())
        return false;
    for (const auto &[key, p] : a.table.entries) {
        auto it = b.table.entries.find(key);
        if (it == b.table.entries.end() || !poly_equal_across(a, p, b, it->second))
            return false;
    }
    if (a.relations.size() != b.relations.size())
        return false;
    for (std::size_t k = 0; k < a.relations.size(); ++k)
        if (!(reintern_expr(a, a.relations[k], b) == b.relations[k]))
            return false;
    if (a.central_charge.has_value() != b.central_charge.has_value() ||
        (a.central_charge && !(*a.central_charge == *b.central_charge)))
        return false;
    if (a.rewrites.size() != b.rewrites.size())
        return false;
    for (std::size_t k = 0; k < a.rewrites.size(); ++k) {
        const Rewrite &ra = a.rewrites[k], &rb = b.rewrites[k];
        if (!(ra.lhs_head == rb.lhs_head) || !(ra.lhs_tail == rb.lhs_tail) ||
            !(reintern_expr(a, ra.rhs, b) == rb.rhs))
            return false;
    }
    if (a.susy_gen.has_value() != b.susy_gen.has_value() ||
        (a.susy_gen && !(reintern_expr(a, *a.susy_gen, b) == *b.susy_gen)))
        return false;
    return true;
}

} // namespace lf
