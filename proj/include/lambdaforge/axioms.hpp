#pragma once

#include <random>

#include "engine.hpp"

// Residue form of every defining identity of a vertex superalgebra. Each
// function returns LHS - RHS of one axiom; the axiom holds on the given
// arguments iff the residue is identically zero. These are the property
// oracles: they recompute both sides through independent engine paths rather
// than reusing the identity under test.

namespace lf {

// A polynomial in two formal variables (the two bracket parameters), with
// divided-power coefficients: coeffs[{J,K}] multiplies lambda^J/J! * mu^K/K!.
class BiPoly {
  public:
    bool is_zero() const { return coeffs_.empty(); }
    const std::map<std::pair<int, int>, FieldExpr> &coeffs() const { return coeffs_; }

    void add(int j, int k, const FieldExpr &e, const Scalar &scale = Scalar(1)) {
        if (e.is_zero() || scale.is_zero())
            return;
        auto it = coeffs_.find({j, k});
        if (it == coeffs_.end()) {
            FieldExpr v = scale * e;
            if (!v.is_zero())
                coeffs_.emplace(std::make_pair(j, k), std::move(v));
        } else {
            it->second.add(e, scale);
            if (it->second.is_zero())
                coeffs_.erase(it);
        }
    }

    friend bool operator==(const BiPoly &a, const BiPoly &b) { return a.coeffs_ == b.coeffs_; }

  private:
    std::map<std::pair<int, int>, FieldExpr> coeffs_;
};

namespace detail {
inline Parity required_parity(const Algebra &alg, const FieldExpr &e, const char *who) {
    auto p = expr_parity(alg, e);
    if (!p)
        throw EngineError(std::string("axiom check requires a parity-homogeneous ") + who);
    return *p;
}
inline Scalar koszul_sign(Parity pa, Parity pb) {
    return (pa == Parity::odd && pb == Parity::odd) ? Scalar(-1) : Scalar(1);
}
} // namespace detail

// Skewsymmetry: [b_la a] + (-1)^{p(a)p(b)} [a_{-la-d} b] = 0.
inline LambdaPoly skew_residue(const Algebra &alg, const FieldExpr &a, const FieldExpr &b) {
    Parity pa = detail::required_parity(alg, a, "first argument");
    Parity pb = detail::required_parity(alg, b, "second argument");
    return bracket(alg, b, a) - skew_flip(alg, bracket(alg, a, b), pa, pb);
}

// Jacobi identity, as a two-variable polynomial in (lambda, mu):
//   [a_la [b_mu c]] - (-1)^{p(a)p(b)} [b_mu [a_la c]] - [[a_la b]_{la+mu} c] = 0.
inline BiPoly jacobi_residue(const Algebra &alg, const FieldExpr &a, const FieldExpr &b,
                             const FieldExpr &c) {
    Parity pa = detail::required_parity(alg, a, "first argument");
    Parity pb = detail::required_parity(alg, b, "second argument");
    BiPoly out;
    LambdaPoly bc = bracket(alg, b, c);
    for (const auto &[k, e] : bc.coeffs()) {
        LambdaPoly abc = bracket(alg, a, e);
        for (const auto &[j, f] : abc.coeffs())
            out.add(j, k, f);
    }
    Scalar sign = detail::koszul_sign(pa, pb);
    LambdaPoly ac = bracket(alg, a, c);
    for (const auto &[j, e] : ac.coeffs()) {
        LambdaPoly bac = bracket(alg, b, e);
        for (const auto &[k, f] : bac.coeffs())
            out.add(j, k, f, Scalar(-1) * sign);
    }
    // [[a_la b]_{la+mu} c]: expand (la+mu)^k/k! into the divided bi-basis.
    LambdaPoly ab = bracket(alg, a, b);
    for (const auto &[j, e] : ab.coeffs()) {
        LambdaPoly ec = bracket(alg, e, c);
        for (const auto &[k, f] : ec.coeffs())
            for (int u = 0; u <= k; ++u)
                out.add(j + u, k - u, f, Scalar(-gen_binom(j + u, j)));
    }
    return out;
}

// Quasi-commutativity: :ab: - (-1)^{p(a)p(b)} :ba: = int_{-d}^0 [a_la b] dla.
inline FieldExpr quasi_comm_residue(const Algebra &alg, const FieldExpr &a, const FieldExpr &b) {
    Parity pa = detail::required_parity(alg, a, "first argument");
    Parity pb = detail::required_parity(alg, b, "second argument");
    FieldExpr out = nprod(alg, a, b);
    out.add(nprod(alg, b, a), Scalar(-1) * detail::koszul_sign(pa, pb));
    out.add(int_neg_del_0(alg, bracket(alg, a, b)), Scalar(-1));
    return out;
}

// Quasi-associativity: ::ab:c: - :a:bc:: equals the integral defect.
inline FieldExpr quasi_assoc_residue(const Algebra &alg, const FieldExpr &a, const FieldExpr &b,
                                     const FieldExpr &c) {
    Parity pa = detail::required_parity(alg, a, "first argument");
    Parity pb = detail::required_parity(alg, b, "second argument");
    FieldExpr out = nprod(alg, nprod(alg, a, b), c);
    out.add(nprod(alg, a, nprod(alg, b, c)), Scalar(-1));
    out.add(qa_correction(alg, a, pa, b, pb, c), Scalar(-1));
    return out;
}

// Non-commutative Wick formula:
//   [a_la :bc:] = :[a_la b]c: + (-1)^{p(a)p(b)} :b[a_la c]: + int_0^la [[a_la b]_mu c] dmu.
inline LambdaPoly wick_residue(const Algebra &alg, const FieldExpr &a, const FieldExpr &b,
                               const FieldExpr &c) {
    Parity pa = detail::required_parity(alg, a, "first argument");
    Parity pb = detail::required_parity(alg, b, "second argument");
    LambdaPoly out = bracket(alg, a, nprod(alg, b, c));
    LambdaPoly ab = bracket(alg, a, b);
    for (const auto &[j, e] : ab.coeffs())
        out.add(j, nprod(alg, e, c), Scalar(-1));
    Scalar sign = detail::koszul_sign(pa, pb);
    LambdaPoly ac = bracket(alg, a, c);
    for (const auto &[j, e] : ac.coeffs())
        out.add(j, nprod(alg, b, e), Scalar(-1) * sign);
    for (const auto &[j, e] : ab.coeffs()) {
        LambdaPoly ec = bracket(alg, e, c);
        for (const auto &[k, f] : ec.coeffs())
            out.add(j + k + 1, f, Scalar(-gen_binom(j + k + 1, j)));
    }
    return out;
}

// Borcherds identity at integer modes (m, n, k):
//   sum_{j>=0} (-1)^j C(n,j) [ a_(m+n-j)(b_(k+j)c)
//                              - (-1)^n (-1)^{p(a)p(b)} b_(n+k-j)(a_(m+j)c) ]
//   = sum_{j>=0} C(m,j) (a_(n+j)b)_(m+k-j) c.
// Each sum terminates: the inner positive products vanish past the bracket
// degrees, and C(n,j) truncates when n >= 0.
inline FieldExpr borcherds_residue(const Algebra &alg, const FieldExpr &a, const FieldExpr &b,
                                   const FieldExpr &c, long m, long n, long k) {
    Parity pa = detail::required_parity(alg, a, "first argument");
    Parity pb = detail::required_parity(alg, b, "second argument");
    long deg_bc = bracket(alg, b, c).degree();
    long deg_ac = bracket(alg, a, c).degree();
    long deg_ab = bracket(alg, a, b).degree();

    FieldExpr out;
    long jmax_l = n >= 0 ? n : std::max({deg_bc - k, deg_ac - m, long(-1)});
    Scalar swap_sign = Scalar(n % 2 == 0 ? -1 : 1) * detail::koszul_sign(pa, pb);
    for (long j = 0; j <= jmax_l; ++j) {
        Scalar w = Scalar(j % 2 == 0 ? 1 : -1) * Scalar(gen_binom(n, j));
        if (w.is_zero())
            continue;
        FieldExpr inner1 = nth_product(alg, b, c, k + j);
        if (!inner1.is_zero())
            out.add(nth_product(alg, a, inner1, m + n - j), w);
        FieldExpr inner2 = nth_product(alg, a, c, m + j);
        if (!inner2.is_zero())
            out.add(nth_product(alg, b, inner2, n + k - j), w * swap_sign);
    }
    long jmax_r = m >= 0 ? m : std::max(deg_ab - n, long(-1));
    for (long j = 0; j <= jmax_r; ++j) {
        Scalar w = Scalar(gen_binom(m, j));
        if (w.is_zero())
            continue;
        FieldExpr inner = nth_product(alg, a, b, n + j);
        if (!inner.is_zero())
            out.add(nth_product(alg, inner, c, m + k - j), Scalar(-1) * w);
    }
    return out;
}

// --- randomized property suite ------------------------------------------------

namespace detail {
inline std::size_t pick(std::mt19937_64 &rng, std::size_t n) {
    return static_cast<std::size_t>(rng() % n); // deterministic across platforms
}
inline Parity word_parity(const Algebra &alg, const std::vector<Factor> &w) {
    int p = 0;
    for (const Factor &f : w)
        p ^= static_cast<int>(alg.gens[f.gen].parity);
    return static_cast<Parity>(p);
}
inline std::vector<Factor> random_word(const Algebra &alg, std::mt19937_64 &rng,
                                       int max_factors, int max_dorder) {
    std::size_t len = 1 + pick(rng, static_cast<std::size_t>(max_factors));
    std::vector<Factor> w(len);
    for (Factor &f : w) {
        f.gen = static_cast<uint16_t>(pick(rng, alg.gens.size()));
        f.dorder = static_cast<uint16_t>(pick(rng, static_cast<std::size_t>(max_dorder) + 1));
    }
    return w;
}
} // namespace detail

// A random nonzero parity-homogeneous state: the normally ordered closure of a
// random factor word, optionally plus half of a second word of equal parity.
inline FieldExpr random_state(const Algebra &alg, std::mt19937_64 &rng, int max_factors = 3,
                              int max_dorder = 1) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<Factor> w = detail::random_word(alg, rng, max_factors, max_dorder);
        FieldExpr e = word_state(alg, w);
        if (e.is_zero())
            continue;
        if (detail::pick(rng, 2) == 1) {
            Parity p = detail::word_parity(alg, w);
            for (int extra = 0; extra < 16; ++extra) {
                std::vector<Factor> w2 = detail::random_word(alg, rng, max_factors, max_dorder);
                if (detail::word_parity(alg, w2) != p)
                    continue;
                FieldExpr e2 = word_state(alg, w2);
                if (e2.is_zero())
                    continue;
                e.add(e2, Scalar(1, 2));
                break;
            }
        }
        if (!e.is_zero())
            return e;
    }
    throw EngineError("random_state: could not draw a nonzero state");
}

struct AxiomFuzzReport {
    long iterations = 0;
    long checks = 0;
    long failures = 0;
    std::string first_failure;

    bool pass() const { return failures == 0; }
};

// Seeded random verification of all six identities over one algebra. Borcherds
// runs over every mode triple (m, n, k) in [-mode_range, mode_range]^3.
inline AxiomFuzzReport axiom_fuzz(const Algebra &alg, long iterations, uint64_t seed,
                                  int max_factors = 3, int max_dorder = 1, long mode_range = 2) {
    std::mt19937_64 rng(seed);
    AxiomFuzzReport rep;
    auto record = [&rep](bool ok, const std::string &what, long iter) {
        ++rep.checks;
        if (ok)
            return;
        ++rep.failures;
        if (rep.first_failure.empty())
            rep.first_failure = what + " at iteration " + std::to_string(iter);
    };
    for (long it = 0; it < iterations; ++it) {
        ++rep.iterations;
        FieldExpr a = random_state(alg, rng, max_factors, max_dorder);
        FieldExpr b = random_state(alg, rng, max_factors, max_dorder);
        FieldExpr c = random_state(alg, rng, max_factors, max_dorder);
        record(skew_residue(alg, a, b).is_zero(), "skewsymmetry", it);
        record(quasi_comm_residue(alg, a, b).is_zero(), "quasi-commutativity", it);
        record(jacobi_residue(alg, a, b, c).is_zero(), "jacobi", it);
        record(quasi_assoc_residue(alg, a, b, c).is_zero(), "quasi-associativity", it);
        record(wick_residue(alg, a, b, c).is_zero(), "wick", it);
        for (long m = -mode_range; m <= mode_range; ++m)
            for (long n = -mode_range; n <= mode_range; ++n)
                for (long kk = -mode_range; kk <= mode_range; ++kk)
                    record(borcherds_residue(alg, a, b, c, m, n, kk).is_zero(),
                           "borcherds(" + std::to_string(m) + "," + std::to_string(n) + "," +
                               std::to_string(kk) + ")",
                           it);
    }
    return rep;
}

} // namespace lf
