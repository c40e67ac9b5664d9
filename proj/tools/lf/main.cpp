// lf: command-line front end for the bracket engine, the algebra catalog,
// the tensor kernel, and the flat realization checks.

#include <lambdaforge/lambdaforge.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace lf;

namespace {

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string slurp_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good())
        throw std::runtime_error("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Resolves an algebra reference: "builtin:NAME" or "builtin:NAME(PARAM)"
// from the catalog, anything else as a definition file path.
AlgebraPtr resolve_algebra(const std::string &ref) {
    if (ref.rfind("builtin:", 0) == 0)
        return make_builtin(ref.substr(8));
    ParseResult res = parse_algebra(slurp_file(ref));
    for (const auto &d : res.diagnostics)
        std::cerr << ref << ":" << format_diagnostic(d) << "\n";
    if (!res.ok())
        throw std::runtime_error("definition file has errors: " + ref);
    return res.algebra;
}

FieldExpr parse_expr_arg(const Algebra &alg, const std::string &text) {
    auto [e, diags] = parse_expression(alg, text);
    for (const auto &d : diags)
        std::cerr << "expression '" << text << "':" << format_diagnostic(d) << "\n";
    if (!e)
        throw std::runtime_error("cannot parse expression: " + text);
    return *e;
}

void print_checks(const std::vector<CheckResult> &checks) {
    int failed = 0, advisory = 0;
    for (const auto &c : checks) {
        if (c.pass && (c.difference.empty() || c.difference == "0")) {
            std::printf("PASS %s\n", c.name.c_str());
        } else if (c.pass) {
            // Passing check with a note attached: reported, not fatal.
            ++advisory;
            std::printf("PASS %s\n     note: %s\n", c.name.c_str(), c.difference.c_str());
        } else {
            ++failed;
            std::printf("FAIL %s\n", c.name.c_str());
            if (!c.lhs.empty())
                std::printf("     lhs: %s\n", c.lhs.c_str());
            if (!c.rhs.empty())
                std::printf("     rhs: %s\n", c.rhs.c_str());
            if (!c.difference.empty())
                std::printf("     difference: %s\n", c.difference.c_str());
        }
    }
    if (advisory > 0)
        std::printf("%zu checks, %d failures, %d advisory notes\n", checks.size(), failed,
                    advisory);
    else
        std::printf("%zu checks, %d failures\n", checks.size(), failed);
}

void maybe_write_report(const std::string &path, const std::string &suite,
                        const std::vector<CheckResult> &checks) {
    if (path.empty())
        return;
    std::ofstream out(path, std::ios::binary);
    if (!out.good())
        throw std::runtime_error("cannot write report: " + path);
    out << emit_report(suite, utc_timestamp(), checks);
}

// Self-checks for one algebra definition: skew symmetry on every stored
// pair, Jacobi on every generator triple, relations normalizing to zero,
// and declared-weight consistency against a generator named L when present.
//
// Jacobi semantics: for an algebra without declared relations, any residue
// is a hard failure. For a quotient presentation (declared relations or
// rewrites), residues are normalized by the oriented rewrites first; a
// remainder that survives is reported as an advisory note rather than a
// failure, because rewrite reduction is a sound but incomplete membership
// test for the relation ideal. The sound way to discharge those notes is
// `verify --realization` against a faithful model, where the residues must
// vanish identically.
std::vector<CheckResult> self_checks(const Algebra &alg) {
    std::vector<CheckResult> out;
    for (const auto &[key, poly] : alg.table.entries) {
        (void)poly;
        CheckResult c;
        c.name = "skew[" + alg.gens[key.first].name + "," + alg.gens[key.second].name + "]";
        LambdaPoly r = skew_residue(alg, alg.gen_expr(key.first), alg.gen_expr(key.second));
        c.pass = r.is_zero();
        if (!c.pass)
            c.difference = render_poly(alg, r);
        out.push_back(std::move(c));
    }
    bool quotient = !alg.relations.empty() || !alg.rewrites.empty();
    int n = static_cast<int>(alg.gens.size());
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b)
            for (int cc = b; cc < n; ++cc) {
                CheckResult c;
                c.name = "jacobi[" + alg.gens[a].name + "," + alg.gens[b].name + "," +
                         alg.gens[cc].name + "]";
                try {
                    BiPoly r = jacobi_residue(alg, alg.gen_expr(a), alg.gen_expr(b),
                                              alg.gen_expr(cc));
                    c.pass = true;
                    for (const auto &[jk, e] : r.coeffs()) {
                        FieldExpr v = quotient ? apply_rewrites(alg, e) : e;
                        if (v.is_zero())
                            continue;
                        std::string where = "la^" + std::to_string(jk.first) + " mu^" +
                                            std::to_string(jk.second) + ": " +
                                            render_expr(alg, v);
                        if (quotient) {
                            c.difference = "unreduced remainder (verify against a "
                                           "realization): " +
                                           where;
                        } else {
                            c.pass = false;
                            c.difference = where;
                        }
                        break;
                    }
                } catch (const EngineError &e) {
                    // Partial tables cannot evaluate every triple.
                    c.pass = true;
                    c.difference = std::string("skipped: ") + e.what();
                }
                out.push_back(std::move(c));
            }
    for (std::size_t k = 0; k < alg.relations.size(); ++k) {
        CheckResult c;
        c.name = "relation" + std::to_string(k);
        FieldExpr v = apply_rewrites(alg, alg.relations[k]);
        c.pass = v.is_zero();
        if (!c.pass)
            c.difference = render_expr(alg, v);
        out.push_back(std::move(c));
    }
    if (alg.has_gen("L")) {
        FieldExpr L = alg.gen_expr(alg.gen_index("L"));
        for (int g = 0; g < n; ++g) {
            if (!alg.gens[g].weight)
                continue;
            CheckResult c;
            c.name = "weight[" + alg.gens[g].name + "]";
            try {
                auto w = conformal_weight(alg, L, alg.gen_expr(g));
                c.pass = w == Scalar(*alg.gens[g].weight);
                if (!c.pass) {
                    c.lhs = w ? w->to_string() : "undefined";
                    c.rhs = Rat(*alg.gens[g].weight).str();
                }
            } catch (const EngineError &e) {
                c.pass = true;
                c.difference = std::string("skipped: ") + e.what();
            }
            out.push_back(std::move(c));
        }
        if (alg.central_charge) {
            CheckResult c;
            c.name = "central_charge";
            FieldExpr got = bracket(alg, L, L).nth(3);
            FieldExpr want = FieldExpr::constant(Scalar(1, 2) * *alg.central_charge);
            c.pass = got == want;
            c.lhs = render_expr(alg, got);
            c.rhs = render_expr(alg, want);
            out.push_back(std::move(c));
        }
    }
    return out;
}

// Resolves realization refs relative to the realization file's directory.
std::string resolve_ref_path(const std::string &ref, const std::string &real_path) {
    if (ref.rfind("builtin:", 0) == 0)
        return ref;
    std::filesystem::path p(ref);
    if (p.is_absolute())
        return ref;
    return (std::filesystem::path(real_path).parent_path() / p).string();
}

std::string sanitize_name(const std::string &spec) {
    std::string out;
    for (char ch : spec) {
        if ((ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
            (ch >= '0' && ch <= '9') || ch == '_')
            out.push_back(ch);
        else
            out.push_back('_');
    }
    while (!out.empty() && out.back() == '_')
        out.pop_back();
    return out;
}

int cmd_ope(const std::string &alg_ref, const std::string &a_text,
            const std::string &b_text) {
    auto alg = resolve_algebra(alg_ref);
    FieldExpr a = parse_expr_arg(*alg, a_text);
    FieldExpr b = parse_expr_arg(*alg, b_text);
    std::printf("%s\n", render_poly(*alg, bracket(*alg, a, b)).c_str());
    return 0;
}

int cmd_jacobi(const std::string &alg_ref, const std::string &a_text,
               const std::string &b_text, const std::string &c_text) {
    auto alg = resolve_algebra(alg_ref);
    FieldExpr a = parse_expr_arg(*alg, a_text);
    FieldExpr b = parse_expr_arg(*alg, b_text);
    FieldExpr c = parse_expr_arg(*alg, c_text);
    BiPoly r = jacobi_residue(*alg, a, b, c);
    if (r.is_zero()) {
        std::printf("holds\n");
        return 0;
    }
    bool quotient = !alg->rewrites.empty();
    if (quotient) {
        bool all_zero = true;
        for (const auto &[jk, e] : r.coeffs()) {
            (void)jk;
            if (!apply_rewrites(*alg, e).is_zero()) {
                all_zero = false;
                break;
            }
        }
        if (all_zero) {
            std::printf("holds modulo declared relations\n");
            return 0;
        }
    }
    std::printf("fails; residue:\n");
    for (const auto &[jk, e] : r.coeffs())
        std::printf("  la^%d mu^%d: %s\n", jk.first, jk.second,
                    render_expr(*alg, e).c_str());
    return 1;
}

int cmd_verify(const std::string &alg_ref, const std::string &real_path,
               const std::string &json_path) {
    std::vector<CheckResult> checks;
    std::string suite;
    if (!real_path.empty()) {
        RealizationSpec spec = parse_realization(slurp_file(real_path));
        for (const auto &d : spec.diagnostics)
            std::cerr << real_path << ":" << format_diagnostic(d) << "\n";
        if (!spec.ok())
            throw std::runtime_error("realization file has errors: " + real_path);
        auto def = resolve_algebra(resolve_ref_path(spec.def_ref, real_path));
        auto host = resolve_algebra(resolve_ref_path(spec.host_ref, real_path));
        auto [images, diags] = realization_images(spec, *def, *host);
        for (const auto &d : diags)
            std::cerr << real_path << ":" << format_diagnostic(d) << "\n";
        if (!diags.empty())
            throw std::runtime_error("realization does not bind: " + real_path);
        checks = verify_realization(*def, images, *host);
        suite = "realization:" + spec.def_ref + "->" + spec.host_ref;
    } else {
        auto alg = resolve_algebra(alg_ref);
        checks = self_checks(*alg);
        suite = "self:" + alg->name;
    }
    print_checks(checks);
    maybe_write_report(json_path, suite, checks);
    return all_pass(checks) ? 0 : 1;
}

int cmd_g2_contractions(int jobs, const std::string &json_path) {
    auto checks = g2_contraction_checks(jobs);
    print_checks(checks);
    maybe_write_report(json_path, "g2_contractions", checks);
    return all_pass(checks) ? 0 : 1;
}

int cmd_g2_theorem(const std::string &chirality, int jobs, const std::string &json_path) {
    int chi = 0;
    if (chirality == "+")
        chi = +1;
    else if (chirality == "-")
        chi = -1;
    else if (chirality != "both")
        throw CLI::ValidationError("--chirality must be '+', '-' or 'both'");
    auto host = make_bcbg(7);
    auto checks = g2_theorem_suite(*host, chi, jobs);
    print_checks(checks);
    maybe_write_report(json_path, "g2_theorem", checks);
    return all_pass(checks) ? 0 : 1;
}

int cmd_parse(const std::string &path, bool check_only) {
    std::string text = slurp_file(path);
    // Realization files open with def/host statements; definitions with
    // algebra/generator statements. Look at the first keyword.
    bool realization = false;
    {
        std::vector<Diagnostic> tmp;
        auto toks = dsl_detail::lex(text, tmp);
        for (const auto &t : toks) {
            if (t.kind != dsl_detail::Tok::ident)
                continue;
            if (t.text == "format")
                continue;
            realization = (t.text == "def" || t.text == "host" || t.text == "map");
            break;
        }
    }
    if (realization) {
        RealizationSpec spec = parse_realization(text);
        for (const auto &d : spec.diagnostics)
            std::cerr << path << ":" << format_diagnostic(d) << "\n";
        if (!spec.ok())
            return 1;
        if (!check_only)
            std::fputs(serialize_realization(spec).c_str(), stdout);
        return 0;
    }
    ParseResult res = parse_algebra(text);
    for (const auto &d : res.diagnostics)
        std::cerr << path << ":" << format_diagnostic(d) << "\n";
    if (!res.ok())
        return 1;
    if (!check_only)
        std::fputs(serialize_algebra(*res.algebra).c_str(), stdout);
    return 0;
}

int cmd_export(const std::string &dir) {
    std::filesystem::create_directories(dir);
    for (const auto &spec : builtin_specs()) {
        auto A = make_builtin(spec);
        std::string path = dir + "/" + sanitize_name(spec) + ".alg";
        std::ofstream out(path, std::ios::binary);
        if (!out.good())
            throw std::runtime_error("cannot write " + path);
        out << serialize_algebra(*A);
        std::printf("wrote %s\n", path.c_str());
    }
    // The two flat realizations of the exceptional algebra.
    auto host = make_bcbg(7);
    auto def = make_sv_g2();
    for (int chi : {+1, -1}) {
        G2Sections s = build_g2_sections(*host, chi);
        RealizationSpec spec;
        spec.def_ref = "builtin:sv_g2";
        spec.host_ref = "builtin:bcbg7";
        auto images = s.images();
        for (std::size_t k = 0; k < images.size(); ++k)
            spec.maps.emplace_back(def->gens[k].name, render_expr(*host, images[k]));
        std::string path = dir + std::string("/flat_sections_") +
                           (chi > 0 ? "plus" : "minus") + ".real";
        std::ofstream out(path, std::ios::binary);
        if (!out.good())
            throw std::runtime_error("cannot write " + path);
        out << serialize_realization(spec);
        std::printf("wrote %s\n", path.c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"exact lambda-bracket engine and flat-geometry checks"};
    app.require_subcommand(1);

    std::string alg_ref, a_text, b_text, c_text, json_path, real_path;
    std::string parse_path, export_dir, chirality = "both";
    int jobs = 1;
    bool check_only = false;

    auto *ope = app.add_subcommand("ope", "print the bracket of two expressions");
    ope->add_option("a", a_text, "first expression")->required();
    ope->add_option("b", b_text, "second expression")->required();
    ope->add_option("--algebra", alg_ref, "algebra reference (builtin:NAME or file)")
        ->required();

    auto *jac = app.add_subcommand("jacobi", "test the Jacobi identity on three expressions");
    jac->add_option("a", a_text, "first expression")->required();
    jac->add_option("b", b_text, "second expression")->required();
    jac->add_option("c", c_text, "third expression")->required();
    jac->add_option("--algebra", alg_ref, "algebra reference")->required();

    auto *ver = app.add_subcommand("verify", "run self-checks or verify a realization file");
    ver->add_option("--algebra", alg_ref, "algebra reference to self-check");
    ver->add_option("--realization", real_path, "realization file to verify");
    ver->add_option("--json", json_path, "write a structured report here");

    auto *g2 = app.add_subcommand("g2", "seven-dimensional geometry checks");
    g2->require_subcommand(1);
    auto *g2c = g2->add_subcommand("contractions", "verify the contraction identities");
    g2c->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    g2c->add_option("--json", json_path, "write a structured report here");
    auto *g2t = g2->add_subcommand("theorem",
                                   "verify the flat realization end to end");
    g2t->add_option("--chirality", chirality, "'+', '-' or 'both' (default both)");
    g2t->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    g2t->add_option("--json", json_path, "write a structured report here");

    auto *par = app.add_subcommand("parse", "parse a definition or realization file");
    par->add_option("file", parse_path, "input file")->required();
    par->add_flag("--check", check_only, "validate only, print nothing on success");

    auto *exp = app.add_subcommand("export", "write the catalog as definition files");
    exp->add_option("dir", export_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    }

    try {
        if (ope->parsed())
            return cmd_ope(alg_ref, a_text, b_text);
        if (jac->parsed())
            return cmd_jacobi(alg_ref, a_text, b_text, c_text);
        if (ver->parsed()) {
            if (alg_ref.empty() && real_path.empty()) {
                std::cerr << "verify needs --algebra or --realization\n";
                return 2;
            }
            return cmd_verify(alg_ref, real_path, json_path);
        }
        if (g2->parsed()) {
            if (g2c->parsed())
                return cmd_g2_contractions(jobs, json_path);
            return cmd_g2_theorem(chirality, jobs, json_path);
        }
        if (par->parsed())
            return cmd_parse(parse_path, check_only);
        if (exp->parsed())
            return cmd_export(export_dir);
    } catch (const CLI::ValidationError &e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
