// Acceptance gate: every release criterion, one line per criterion.
// Exit status 0 only if all criteria pass. All comparisons are exact.

#include <lambdaforge/lambdaforge.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace lf;

namespace {

struct Outcome {
    bool pass = false;
    std::vector<std::string> notes;
};

struct Criterion {
    int number;
    std::string label;
    std::function<Outcome()> run;
    // Hard wall-clock bound in seconds (0 = none); exceeding it fails the
    // criterion. `target_secs` is an aspirational bound: reported, not binding.
    double budget_secs = 0;
    double target_secs = 0;
};

FieldExpr gen(const Algebra &a, const char *name, int d = 0) {
    return a.gen_expr(a.gen_index(name), d);
}

std::string rat_str(const Scalar &s) { return s.to_string(); }

// Shared flat host so the realization-heavy criteria reuse one bracket memo.
const AlgebraPtr &host7() {
    static AlgebraPtr h = make_bcbg(7);
    return h;
}
const G2Sections &plus7() {
    static G2Sections s = build_g2_sections(*host7(), +1);
    return s;
}
const G2Sections &minus7() {
    static G2Sections s = build_g2_sections(*host7(), -1);
    return s;
}

Outcome criterion_free_field_n1() {
    Outcome o;
    auto A = make_bcbg(1);
    FieldExpr G = bcbg_supercurrent(*A), L = bcbg_virasoro(*A);
    bool ok = true;

    auto weight_is = [&](const char *nm, const Rat &w, bool prim) {
        auto cw = conformal_weight(*A, L, gen(*A, nm));
        bool good = cw == Scalar(w) && is_primary(*A, L, gen(*A, nm)) == prim;
        if (!good)
            o.notes.push_back(std::string("generator ") + nm + " has wrong weight data");
        return good;
    };
    ok &= weight_is("gamma1", Rat(0), true);
    ok &= weight_is("c1", Rat(1, 2), true);
    ok &= weight_is("b1", Rat(1, 2), true);
    ok &= weight_is("beta1", Rat(1), true);

    LambdaPoly gg = bracket(*A, G, G);
    ok &= gg.nth(0) == Scalar(2) * L && gg.nth(1).is_zero() && gg.degree() == 2;
    // Divided la^2 slot stores 2x the plain coefficient.
    FieldExpr top = gg.nth(2);
    bool top_const = top.terms().size() == 1 && top.terms().count(kVacuum) == 1;
    ok &= top_const;
    if (top_const) {
        Scalar plain = Scalar(1, 2) * top.terms().at(kVacuum);
        Scalar implied_c = Scalar(3) * plain;
        o.notes.push_back("plain la^2 coefficient of the supercurrent self-bracket: " +
                          rat_str(plain) + " -> central charge " + rat_str(implied_c));
        ok &= plain == Scalar(1) && implied_c == Scalar(3);
        ok &= A->central_charge == implied_c;
    }
    LambdaPoly ll = bracket(*A, L, L);
    ok &= ll.nth(0) == derive(*A, L) && ll.nth(1) == Scalar(2) * L &&
          ll.nth(3) == FieldExpr::constant(Scalar(3, 2));
    o.pass = ok;
    return o;
}

Outcome criterion_axiom_fuzz() {
    Outcome o;
    auto A = make_bcbg(2);
    auto rep = axiom_fuzz(*A, 500, 0x5eed0001u, 3, 1, 2);
    o.notes.push_back(std::to_string(rep.checks) + " identity checks over " +
                      std::to_string(rep.iterations) + " sampled triples");
    if (rep.failures != 0)
        o.notes.push_back("first failure: " + rep.first_failure);
    o.pass = rep.failures == 0;
    return o;
}

Outcome criterion_tensor_identities() {
    Outcome o;
    auto checks = g2_contraction_checks(1);
    o.pass = true;
    for (const auto &c : checks) {
        if (!c.pass) {
            o.pass = false;
            o.notes.push_back(c.name + ": " + c.difference);
        }
    }
    o.notes.push_back(std::to_string(checks.size()) + " contraction identities exact");
    return o;
}

Outcome criterion_phi_self_bracket() {
    Outcome o;
    const Algebra &H = *host7();
    const G2Sections &s = plus7();
    LambdaPoly pp = bracket(H, s.Phi, s.Phi);
    bool ok = pp.nth(0) == Scalar(6) * s.X && pp.nth(1).is_zero() && pp.degree() == 2;

    long norm = 0;
    for (long v : phi0().dense_int())
        norm += v * v;
    Scalar plain = Scalar(Rat(1, 36)) * Scalar(-3) * Scalar(norm);
    o.notes.push_back("contraction path: (1/36)*(-3)*" + std::to_string(norm) + " = " +
                      rat_str(plain));
    ok &= norm == 42 && plain == Scalar(-7, 2);
    ok &= pp.nth(2) == FieldExpr::constant(Scalar(2) * plain);
    o.pass = ok;
    return o;
}

Outcome run_family_realization(const G2Sections &s, const char *tag) {
    Outcome o;
    const Algebra &H = *host7();
    auto def = make_sv_g2();
    auto checks = verify_realization(*def, s.images(), H, std::string(tag) + ":");
    int brackets = 0;
    o.pass = true;
    for (const auto &c : checks) {
        if (c.name.find("bracket") != std::string::npos)
            ++brackets;
        if (!c.pass) {
            o.pass = false;
            o.notes.push_back(c.name + " differs: " + c.difference);
        }
    }
    o.pass &= brackets == 21;
    o.notes.push_back(std::string(tag) + ": " + std::to_string(brackets) +
                      " bracket images verified, central charge " +
                      rat_str(*def->central_charge));
    return o;
}

Outcome criterion_realization_both() {
    Outcome a = run_family_realization(plus7(), "family+");
    Outcome b = run_family_realization(minus7(), "family-");
    Outcome o;
    o.pass = a.pass && b.pass;
    o.notes = a.notes;
    o.notes.insert(o.notes.end(), b.notes.begin(), b.notes.end());
    return o;
}

Outcome criterion_cross_chirality() {
    Outcome o;
    const Algebra &H = *host7();
    auto p = plus7().images(), m = minus7().images();
    int zeros = 0;
    o.pass = true;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (bracket(H, p[i], m[j]).is_zero())
                ++zeros;
            else {
                o.pass = false;
                o.notes.push_back("pair (" + std::to_string(i) + "," + std::to_string(j) +
                                  ") does not commute");
            }
        }
    o.notes.push_back(std::to_string(zeros) + "/36 opposite-family brackets vanish");
    o.pass &= zeros == 36;
    return o;
}

Outcome criterion_relation_realizes_to_zero() {
    Outcome o;
    const Algebra &H = *host7();
    auto def = make_sv_g2();
    bool ok = def->relations.size() == 1;
    if (ok) {
        FieldExpr rp = realize_expr(*def, plus7().images(), H, def->relations[0]);
        FieldExpr rm = realize_expr(*def, minus7().images(), H, def->relations[0]);
        ok = rp.is_zero() && rm.is_zero();
        o.notes.push_back("declared null field maps to 0 in both families");
    }
    o.pass = ok;
    return o;
}

Outcome criterion_tricritical() {
    Outcome o;
    o.pass = true;
    // Abstract: inside the exceptional algebra itself.
    {
        auto A = make_sv_g2();
        auto [Xt, Pt] = tricritical_pair(gen(*A, "X"), gen(*A, "Phi"));
        for (const auto &c : n1_structure_checks(*A, Xt, Pt, Scalar(7, 10), "abstract:"))
            if (!c.pass) {
                o.pass = false;
                o.notes.push_back(c.name + " differs: " + c.difference);
            }
    }
    // Flat: inside the free-field realization.
    {
        const Algebra &H = *host7();
        auto [Xt, Pt] = tricritical_pair(plus7().X, plus7().Phi);
        for (const auto &c : n1_structure_checks(H, Xt, Pt, Scalar(7, 10), "flat:"))
            if (!c.pass) {
                o.pass = false;
                o.notes.push_back(c.name + " differs: " + c.difference);
            }
    }
    o.notes.push_back("central charge 7/10 in both presentations");
    return o;
}

Outcome criterion_odd_catalog_entry() {
    Outcome o;
    auto S = make_sv_spin7();
    o.pass = true;
    int pairs = 0;
    for (const auto &[key, poly] : S->table.entries) {
        (void)poly;
        ++pairs;
        if (!skew_residue(*S, S->gen_expr(key.first), S->gen_expr(key.second)).is_zero()) {
            o.pass = false;
            o.notes.push_back("skew fails on pair (" + S->gens[key.first].name + ", " +
                              S->gens[key.second].name + ")");
        }
    }
    o.notes.push_back(std::to_string(pairs) + " stored pairs skew-consistent");
    LambdaPoly xx = bracket(*S, gen(*S, "Xb"), gen(*S, "Xb"));
    bool quartic = xx.nth(3) == FieldExpr::constant(Scalar(16));
    o.notes.push_back("divided la^3 term of the weight-2 self-bracket: " +
                      (xx.nth(3).terms().count(kVacuum)
                           ? rat_str(xx.nth(3).terms().at(kVacuum))
                           : std::string("absent")));
    o.pass &= pairs == 9 && quartic;
    return o;
}

Outcome criterion_dsl() {
    Outcome o;
    o.pass = true;
    int round_trips = 0;
    for (const auto &spec : builtin_specs()) {
        auto A = make_builtin(spec);
        std::string text = serialize_algebra(*A);
        ParseResult res = parse_algebra(text);
        bool good = res.ok() && algebra_equal(*A, *res.algebra) &&
                    serialize_algebra(*res.algebra) == text;
        if (!good) {
            o.pass = false;
            o.notes.push_back("round-trip failed for " + spec);
        } else {
            ++round_trips;
        }
    }
    o.notes.push_back(std::to_string(round_trips) + " catalog definitions round-trip");

    std::mt19937_64 rng(0xace0fba5eull);
    std::string base = serialize_algebra(*make_builtin("n4(6)"));
    long survived = 0;
    for (int it = 0; it < 10000; ++it) {
        std::string s;
        if (it % 2 == 0) {
            int len = static_cast<int>(rng() % 200);
            for (int k = 0; k < len; ++k)
                s.push_back(static_cast<char>(rng() % 256));
        } else {
            s = base;
            for (int e = 0; e < 3; ++e) {
                std::size_t pos = rng() % s.size();
                switch (rng() % 3) {
                case 0:
                    s[pos] = static_cast<char>(rng() % 256);
                    break;
                case 1:
                    s.erase(pos, 1);
                    break;
                default:
                    s.insert(pos, 1, static_cast<char>(rng() % 128));
                    break;
                }
            }
        }
        ParseResult r = parse_algebra(s);
        (void)r;
        ++survived;
    }
    o.notes.push_back(std::to_string(survived) + " adversarial inputs parsed without a crash");
    o.pass &= survived == 10000;
    return o;
}

} // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "free-field N=1 structure and central charge", criterion_free_field_n1, 1, 0},
        {2, "randomized identity sweep with full mode grid", criterion_axiom_fuzz, 300, 0},
        {3, "seven-dimensional contraction identities", criterion_tensor_identities, 30, 0},
        {4, "three-form section self-bracket", criterion_phi_self_bracket, 120, 0},
        {5, "flat realization of all 21 brackets, both families", criterion_realization_both,
         0, 900},
        {6, "opposite families commute", criterion_cross_chirality, 0, 0},
        {7, "null field realizes to zero", criterion_relation_realizes_to_zero, 0, 0},
        {8, "tri-critical substructure at c = 7/10", criterion_tricritical, 0, 0},
        {9, "odd catalog entry consistency", criterion_odd_catalog_entry, 0, 0},
        {10, "text format round-trip and fuzz", criterion_dsl, 0, 0},
    };

    int passed = 0;
    for (const auto &c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o.pass = false;
            o.notes.push_back(std::string("exception: ") + e.what());
        }
        auto t1 = std::chrono::steady_clock::now();
        double secs = std::chrono::duration<double>(t1 - t0).count();
        if (c.budget_secs > 0 && secs > c.budget_secs) {
            o.pass = false;
            o.notes.push_back("runtime budget exceeded: " + std::to_string(secs) +
                              "s > " + std::to_string(c.budget_secs) + "s");
        }
        if (c.target_secs > 0 && secs > c.target_secs)
            o.notes.push_back("runtime target missed (informational): " +
                              std::to_string(secs) + "s > " + std::to_string(c.target_secs) + "s");
        std::printf("criterion %d (%s): %s (%.1fs)\n", c.number, c.label.c_str(),
                    o.pass ? "PASS" : "FAIL", secs);
        for (const auto &n : o.notes)
            std::printf("    %s\n", n.c_str());
        if (o.pass)
            ++passed;
    }
    std::printf("%d/%zu criteria passed\n", passed, criteria.size());
    return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
