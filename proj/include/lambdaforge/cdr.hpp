#pragma once

#include <atomic>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "axioms.hpp"
#include "builtins.hpp"
#include "checks.hpp"
#include "embed.hpp"

// The flat-space chiral-de-Rham construction: from the associative 3-form on
// R^7 embedded in a 7-quadruple free-field algebra, each chirality of frame
// fields generates a closed W-algebra isomorphic to the G2 superconformal
// algebra at central charge 21/2, the two chiralities commute, and their
// supercurrents and Virasoro vectors sum to the standard free-field ones.

namespace lf {

// The six sections of one chirality, in the catalog's generator order
// (L, G, Phi, K, X, M) when listed as images.
struct G2Sections {
    int chirality = +1;
    FieldExpr Phi, K, X, G, L, M;

    std::vector<FieldExpr> images() const { return {L, G, Phi, K, X, M}; }
};

// Builds the section family of one chirality from the embedded 3-form:
//   Phi = embed(phi0), K = D Phi, X = (1/6) Phi_(0) Phi,
//   G = -(1/3) Phi_(1) K, L = (1/2) G_(0) G, M = D X,
// with D the zero-mode of the host supercurrent.
inline G2Sections build_g2_sections(const Algebra &host, int chirality) {
    G2Sections s;
    s.chirality = chirality >= 0 ? +1 : -1;
    s.Phi = embed_form_flat(host, phi0(), s.chirality);
    s.K = susy_D(host, s.Phi);
    s.X = Scalar(1, 6) * nth_product(host, s.Phi, s.Phi, 0);
    s.G = Scalar(-1, 3) * nth_product(host, s.Phi, s.K, 1);
    s.L = Scalar(1, 2) * nth_product(host, s.G, s.G, 0);
    s.M = susy_D(host, s.X);
    return s;
}

// Maps an expression of the defining algebra through generator images in the
// host: each monomial becomes the right-nested normally ordered product of
// the (derived) images of its factors.
inline FieldExpr realize_expr(const Algebra &def, const std::vector<FieldExpr> &images,
                              const Algebra &host, const FieldExpr &e) {
    if (images.size() != def.gens.size())
        throw std::invalid_argument("realization needs one image per generator");
    FieldExpr out;
    for (const auto &[m, q] : e.terms()) {
        if (m == kVacuum) {
            out = out + FieldExpr::constant(q);
            continue;
        }
        const auto &md = def.mono(m);
        FieldExpr acc;
        bool first = true;
        for (auto it = md.factors.rbegin(); it != md.factors.rend(); ++it) {
            FieldExpr f = derive(host, images[it->gen], it->dorder);
            if (first) {
                acc = std::move(f);
                first = false;
            } else {
                acc = nprod(host, f, acc);
            }
        }
        out.add(acc, q);
    }
    return out;
}

namespace detail {

inline std::string poly_diff_string(const Algebra &host, const LambdaPoly &got,
                                    const LambdaPoly &want) {
    return render_poly(host, got - want);
}

} // namespace detail

// Checks that generator images in a host algebra reproduce every stored
// bracket of a defining algebra, that the defining relations map to zero, and
// that a conformal vector named "L" reproduces the declared central charge.
inline std::vector<CheckResult> verify_realization(const Algebra &def,
                                                   const std::vector<FieldExpr> &images,
                                                   const Algebra &host,
                                                   const std::string &name_prefix = "") {
    std::vector<CheckResult> out;
    for (const auto &[key, poly] : def.table.entries) {
        CheckResult c;
        c.name = name_prefix + "bracket[" + def.gens[key.first].name + "," +
                 def.gens[key.second].name + "]";
        LambdaPoly got = bracket(host, images[key.first], images[key.second]);
        LambdaPoly want;
        int deg = poly.degree();
        for (int j = 0; j <= deg; ++j) {
            FieldExpr w = realize_expr(def, images, host, poly.nth(j));
            if (!w.is_zero())
                want.set(j, w);
        }
        c.pass = got == want;
        c.lhs = render_poly(host, got);
        c.rhs = render_poly(host, want);
        c.difference = c.pass ? "0" : detail::poly_diff_string(host, got, want);
        out.push_back(std::move(c));
    }
    for (std::size_t r = 0; r < def.relations.size(); ++r) {
        CheckResult c;
        c.name = name_prefix + "relation" + std::to_string(r + 1);
        FieldExpr img = realize_expr(def, images, host, def.relations[r]);
        // A relation only needs to vanish in the host algebra itself, so
        // normalize by the host's declared rewrites before testing zero
        // (a no-op for hosts without rewrites, e.g. free-field systems).
        img = apply_rewrites(host, img);
        c.pass = img.is_zero();
        c.lhs = render_expr(host, img);
        c.rhs = "0";
        c.difference = c.lhs;
        out.push_back(std::move(c));
    }
    if (def.central_charge && def.has_gen("L")) {
        CheckResult c;
        c.name = name_prefix + "central_charge";
        const FieldExpr &Lim = images[static_cast<std::size_t>(def.gen_index("L"))];
        // [L la L] carries c/2 on the divided la^3/3! coefficient.
        FieldExpr got = bracket(host, Lim, Lim).nth(3);
        FieldExpr want = FieldExpr::constant(Scalar(1, 2) * *def.central_charge);
        c.pass = got == want;
        c.lhs = render_expr(host, got);
        c.rhs = render_expr(host, want);
        c.difference = render_expr(host, got - want);
        out.push_back(std::move(c));
    }
    return out;
}

namespace detail {

// Runs independent check tasks on up to `jobs` threads, preserving order.
inline std::vector<CheckResult>
run_check_tasks(std::vector<std::function<CheckResult()>> tasks, int jobs) {
    std::vector<CheckResult> results(tasks.size());
    if (jobs <= 1) {
        for (std::size_t k = 0; k < tasks.size(); ++k)
            results[k] = tasks[k]();
        return results;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t k = next.fetch_add(1);
            if (k >= tasks.size())
                return;
            results[k] = tasks[k]();
        }
    };
    std::vector<std::thread> pool;
    int n = std::min<int>(jobs, static_cast<int>(tasks.size()));
    for (int t = 0; t < n; ++t)
        pool.emplace_back(worker);
    for (auto &t : pool)
        t.join();
    return results;
}

inline CheckResult expr_check(const Algebra &host, std::string name, const FieldExpr &got,
                              const FieldExpr &want) {
    CheckResult c;
    c.name = std::move(name);
    c.pass = got == want;
    c.lhs = render_expr(host, got);
    c.rhs = render_expr(host, want);
    c.difference = render_expr(host, got - want);
    return c;
}

inline CheckResult poly_check(const Algebra &host, std::string name, const LambdaPoly &got,
                              const LambdaPoly &want) {
    CheckResult c;
    c.name = std::move(name);
    c.pass = got == want;
    c.lhs = render_poly(host, got);
    c.rhs = render_poly(host, want);
    c.difference = render_poly(host, got - want);
    return c;
}

// The unrestricted frame expansion sum_{i,j,l} phi_{ijl} :w1^i w2^j w3^l: for
// a three-letter word over the host's odd fields ('c' or 'b' per slot).
inline FieldExpr phi_word_sum(const Algebra &host, const char (&word)[4]) {
    const std::vector<long> phi = phi0().dense_int();
    auto field = [&](char kind, int idx) {
        return host.gen_expr(
            host.gen_index(std::string(1, kind) + std::to_string(idx + 1)));
    };
    FieldExpr total;
    for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j)
            for (int l = 0; l < kDim; ++l) {
                long v = phi[(i * kDim + j) * kDim + l];
                if (v == 0)
                    continue;
                FieldExpr m = nprod(host, field(word[0], i),
                                    nprod(host, field(word[1], j), field(word[2], l)));
                total.add(m, Scalar(v));
            }
    return total;
}

} // namespace detail

// The N=1 superconformal structure checks for a (Virasoro, supercurrent)
// pair at a given central charge.
inline std::vector<CheckResult> n1_structure_checks(const Algebra &alg, const FieldExpr &Lv,
                                                    const FieldExpr &Gv, const Scalar &c,
                                                    const std::string &prefix) {
    std::vector<CheckResult> out;
    {
        LambdaPoly want;
        want.set(0, derive(alg, Lv));
        want.set(1, Scalar(2) * Lv);
        want.set(3, FieldExpr::constant(Scalar(1, 2) * c));
        out.push_back(detail::poly_check(alg, prefix + "virasoro_bracket",
                                         bracket(alg, Lv, Lv), want));
    }
    {
        LambdaPoly want;
        want.set(0, derive(alg, Gv));
        want.set(1, Scalar(3, 2) * Gv);
        out.push_back(detail::poly_check(alg, prefix + "supercurrent_primary_weight_3_2",
                                         bracket(alg, Lv, Gv), want));
    }
    {
        LambdaPoly want;
        want.set(0, Scalar(2) * Lv);
        want.set(2, FieldExpr::constant(Scalar(2, 3) * c));
        out.push_back(detail::poly_check(alg, prefix + "supercurrent_squares_to_virasoro",
                                         bracket(alg, Gv, Gv), want));
    }
    return out;
}

// The tri-critical Ising pair inside the G2 algebra: (X~, Phi~) =
// (-X/5, (i/sqrt(15)) Phi) is an N=1 pair at central charge 7/10.
inline std::pair<FieldExpr, FieldExpr> tricritical_pair(const FieldExpr &X,
                                                        const FieldExpr &Phi) {
    return {Scalar(-1, 5) * X, Scalar::basis(5, Rat(1, 15)) * Phi};
}

// The full mechanical verification that one or both chiral section families
// close on the G2 superconformal algebra at c = 21/2 and commute with each
// other. chirality: +1, -1, or 0 for both (which adds the cross checks and
// sum rules). Independent checks are distributed over `jobs` threads.
inline std::vector<CheckResult> g2_theorem_suite(const Algebra &host, int chirality = 0,
                                                 int jobs = 1) {
    const bool plus = chirality >= 0;
    const bool minus = chirality <= 0;
    auto def = make_sv_g2();

    std::optional<G2Sections> sp, sm;
    if (plus)
        sp = build_g2_sections(host, +1);
    if (minus)
        sm = build_g2_sections(host, -1);

    std::vector<std::function<CheckResult()>> tasks;
    const char *gen_names[6] = {"L", "G", "Phi", "K", "X", "M"};

    auto add_family = [&](const G2Sections &s, const std::string &tag) {
        // Literal frame expansion of the embedded 3-form: the four slot sums
        // carry coefficients (1, 3, 3, 1)/(12 sqrt 2), with i^3 = -i phases
        // alternating on the minus chirality.
        tasks.push_back([&host, &s, tag] {
            const Scalar r12 = Scalar::basis(2, Rat(1, 24)); // 1/(12 sqrt 2)
            const Scalar r4 = Scalar::basis(2, Rat(1, 8));   // 1/(4 sqrt 2)
            FieldExpr want;
            if (s.chirality > 0)
                want = r12 * detail::phi_word_sum(host, "ccc") +
                       r4 * detail::phi_word_sum(host, "ccb") +
                       r4 * detail::phi_word_sum(host, "cbb") +
                       r12 * detail::phi_word_sum(host, "bbb");
            else
                want = (Scalar::i() * r12) * detail::phi_word_sum(host, "ccc") +
                       (Scalar(-1) * Scalar::i() * r4) * detail::phi_word_sum(host, "ccb") +
                       (Scalar::i() * r4) * detail::phi_word_sum(host, "cbb") +
                       (Scalar(-1) * Scalar::i() * r12) * detail::phi_word_sum(host, "bbb");
            return detail::expr_check(host, "phi_literal_expansion_" + tag, s.Phi, want);
        });

        // X by its explicit flat formula: the embedded 4-form plus the frame
        // derivative correction (sign tied to the chirality).
        tasks.push_back([&host, &s, tag] {
            FieldExpr corr;
            for (int i = 0; i < kDim; ++i)
                corr.add(nprod(host, derive(host, cdr_frame(host, i, s.chirality)),
                               cdr_frame(host, i, s.chirality)),
                         Scalar(1));
            FieldExpr want = Scalar(-1) * embed_form_flat(host, psi0(), s.chirality) +
                             Scalar(s.chirality > 0 ? -1 : 1, 2) * corr;
            return detail::expr_check(host, "x_flat_formula_" + tag, s.X, want);
        });

        // M is the supercurrent zero-mode of X within its own family.
        tasks.push_back([&host, &s, tag] {
            return detail::expr_check(host, "m_from_own_supercurrent_" + tag, s.M,
                                      nth_product(host, s.G, s.X, 0));
        });

        // The la^2 term of [Phi la Phi] equals (1/36)(-3) * (phi,phi) = -7/2,
        // the full contraction 42 entering through the tensor kernel.
        tasks.push_back([&host, &s, tag] {
            long c42 = 0;
            const std::vector<long> p = phi0().dense_int();
            for (long v : p)
                c42 += v * v;
            Rat plain = Rat(1, 36) * Rat(-3) * Rat(c42);
            LambdaPoly got = bracket(host, s.Phi, s.Phi);
            LambdaPoly want;
            want.set(0, Scalar(6) * s.X);
            want.set(2, FieldExpr::constant(Scalar(Rat(2) * plain)));
            return detail::poly_check(host, "phi_phi_bracket_contraction_path_" + tag, got,
                                      want);
        });

        // N=1 structure of (L, G) at c = 21/2.
        tasks.push_back([&host, &s, tag] {
            auto cs = n1_structure_checks(host, s.L, s.G, Scalar(21, 2), "");
            CheckResult c;
            c.name = "n1_structure_" + tag;
            c.pass = all_pass(cs);
            c.lhs = cs[0].lhs + " ; " + cs[2].lhs;
            c.rhs = cs[0].rhs + " ; " + cs[2].rhs;
            c.difference = c.pass ? "0" : (cs[0].difference + " ; " + cs[1].difference +
                                           " ; " + cs[2].difference);
            return c;
        });

        // Conformal weights and primaries under the family's own Virasoro.
        tasks.push_back([&host, &s, tag] {
            struct Row {
                const char *name;
                const FieldExpr *f;
                Rat weight;
                bool primary;
            };
            const Row rows[] = {{"L", &s.L, Rat(2), false},  {"G", &s.G, Rat(3, 2), true},
                                {"Phi", &s.Phi, Rat(3, 2), true}, {"K", &s.K, Rat(2), true},
                                {"X", &s.X, Rat(2), false}, {"M", &s.M, Rat(5, 2), false}};
            CheckResult c;
            c.name = "weights_and_primaries_" + tag;
            c.pass = true;
            std::string got, want;
            for (const auto &r : rows) {
                auto w = conformal_weight(host, s.L, *r.f);
                bool prim = is_primary(host, s.L, *r.f);
                bool ok = w && *w == Scalar(r.weight) && prim == r.primary;
                if (!ok)
                    c.pass = false;
                got += std::string(r.name) + "=" + (w ? (*w).to_string() : "?") +
                       (prim ? "(primary) " : " ");
                want += std::string(r.name) + "=" + Scalar(r.weight).to_string() +
                        (r.primary ? "(primary) " : " ");
            }
            c.lhs = got;
            c.rhs = want;
            c.difference = c.pass ? "0" : "weight or primary flag mismatch";
            return c;
        });

        // Identities giving the mixed products their advertised shapes:
        // Phi_(0)K = 3 dG + Phi_(1) dK and K_(2) dPhi = 2 Phi_(1) K = -6 G.
        tasks.push_back([&host, &s, tag] {
            FieldExpr lhs = nth_product(host, s.Phi, s.K, 0);
            FieldExpr rhs = Scalar(3) * derive(host, s.G) +
                            nth_product(host, s.Phi, derive(host, s.K), 1);
            return detail::expr_check(host, "phi_k_mode_identity_" + tag, lhs, rhs);
        });
        tasks.push_back([&host, &s, tag] {
            FieldExpr a = nth_product(host, s.K, derive(host, s.Phi), 2);
            FieldExpr b = Scalar(2) * nth_product(host, s.Phi, s.K, 1);
            FieldExpr c = Scalar(-6) * s.G;
            CheckResult r = detail::expr_check(host, "k_dphi_mode_identity_" + tag, a, b);
            if (r.pass && !(b == c)) {
                r.pass = false;
                r.difference = render_expr(host, b - c);
            }
            return r;
        });

        // Associativity spot checks: creation modes against the vacuum and a
        // positive-mode triple of composite sections. (Deep negative modes on
        // composite triples blow up combinatorially; the identity is fuzzed
        // exhaustively on small states by the axiom suite instead.)
        tasks.push_back([&host, &s, tag] {
            FieldExpr vac = FieldExpr::constant(Scalar(1));
            FieldExpr r1 = borcherds_residue(host, s.Phi, s.K, vac, 2, -1, -2);
            FieldExpr r2 = borcherds_residue(host, s.Phi, s.K, vac, -2, 1, 1);
            FieldExpr r3 = borcherds_residue(host, s.Phi, s.G, s.X, 1, 1, 0);
            CheckResult c;
            c.name = "associativity_spots_" + tag;
            c.pass = r1.is_zero() && r2.is_zero() && r3.is_zero();
            c.lhs = render_expr(host, r1) + " ; " + render_expr(host, r2) + " ; " +
                    render_expr(host, r3);
            c.rhs = "0 ; 0 ; 0";
            c.difference = c.pass ? "0" : c.lhs;
            return c;
        });

        // The null-field relation 4:GX: - 2:PhiK: - 4 dM - d^2 G vanishes
        // identically on the flat sections.
        tasks.push_back([&host, &s, &def, tag] {
            CheckResult c;
            c.name = "null_relation_" + tag;
            if (def->relations.empty()) {
                c.pass = false;
                c.difference = "defining algebra carries no relation";
                return c;
            }
            FieldExpr img = realize_expr(*def, s.images(), host, def->relations[0]);
            c.pass = img.is_zero();
            c.lhs = render_expr(host, img);
            c.rhs = "0";
            c.difference = c.lhs;
            return c;
        });

        // Tri-critical pair in the flat realization.
        tasks.push_back([&host, &s, tag] {
            auto [Xt, Pt] = tricritical_pair(s.X, s.Phi);
            auto cs = n1_structure_checks(host, Xt, Pt, Scalar(7, 10), "");
            CheckResult c;
            c.name = "tricritical_n1_" + tag;
            c.pass = all_pass(cs);
            c.lhs = cs[2].lhs;
            c.rhs = cs[2].rhs;
            c.difference = c.pass ? "0" : (cs[0].difference + " ; " + cs[1].difference +
                                           " ; " + cs[2].difference);
            return c;
        });
    };

    if (sp)
        add_family(*sp, "plus");
    if (sm)
        add_family(*sm, "minus");

    // Per-pair realization of the full defining table, each pair a task.
    auto add_realization = [&](const G2Sections &s, const std::string &tag) {
        auto images = std::make_shared<std::vector<FieldExpr>>(s.images());
        for (const auto &[key, poly] : def->table.entries) {
            int a = key.first, b = key.second;
            const LambdaPoly *want_poly = &poly;
            tasks.push_back([&host, &def, images, a, b, want_poly, tag, gen_names] {
                LambdaPoly got = bracket(host, (*images)[a], (*images)[b]);
                LambdaPoly want;
                int deg = want_poly->degree();
                for (int j = 0; j <= deg; ++j) {
                    FieldExpr w = realize_expr(*def, *images, host, want_poly->nth(j));
                    if (!w.is_zero())
                        want.set(j, w);
                }
                return detail::poly_check(host,
                                          std::string("realize_") + tag + "[" +
                                              gen_names[a] + "," + gen_names[b] + "]",
                                          got, want);
            });
        }
    };
    if (sp)
        add_realization(*sp, "plus");
    if (sm)
        add_realization(*sm, "minus");

    if (sp && sm) {
        // Sum rules tying the two families to the standard free-field vectors.
        tasks.push_back([&host, &sp, &sm] {
            return detail::expr_check(host, "supercurrent_sum", sp->G + sm->G,
                                      bcbg_supercurrent(host));
        });
        tasks.push_back([&host, &sp, &sm] {
            return detail::expr_check(host, "virasoro_sum", sp->L + sm->L,
                                      bcbg_virasoro(host));
        });
        // Every cross-chirality bracket vanishes.
        auto ip = std::make_shared<std::vector<FieldExpr>>(sp->images());
        auto im = std::make_shared<std::vector<FieldExpr>>(sm->images());
        for (int a = 0; a < 6; ++a)
            for (int b = 0; b < 6; ++b) {
                tasks.push_back([&host, ip, im, a, b, gen_names] {
                    LambdaPoly got = bracket(host, (*ip)[a], (*im)[b]);
                    CheckResult c;
                    c.name = std::string("cross_chirality[") + gen_names[a] + "+," +
                             gen_names[b] + "-]";
                    c.pass = got.degree() < 0;
                    c.lhs = render_poly(host, got);
                    c.rhs = "0";
                    c.difference = c.lhs;
                    return c;
                });
            }
    }

    return detail::run_check_tasks(std::move(tasks), jobs);
}

} // namespace lf
