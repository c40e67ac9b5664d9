#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "scalar.hpp"

namespace lf {

enum class Parity : uint8_t { even = 0, odd = 1 };

// A named generator of a vertex superalgebra. `sort_key` fixes the canonical
// order of factors inside normally ordered monomials; keys are unique per
// algebra. `weight` is the conformal weight when one is declared.
struct GeneratorSpec {
    std::string name;
    Parity parity = Parity::even;
    std::optional<Rat> weight;
    int sort_key = 0;

    friend bool operator==(const GeneratorSpec &a, const GeneratorSpec &b) {
        return a.name == b.name && a.parity == b.parity && a.weight == b.weight &&
               a.sort_key == b.sort_key;
    }
};

// One factor of a monomial: the dorder-th derivative of a generator.
struct Factor {
    uint16_t gen = 0;
    uint16_t dorder = 0;

    friend bool operator==(Factor a, Factor b) { return a.gen == b.gen && a.dorder == b.dorder; }
};

// Monomials are hash-consed per algebra; a MonoId indexes the algebra's
// intern table. Id 0 is always the vacuum (the empty monomial).
using MonoId = uint32_t;
inline constexpr MonoId kVacuum = 0;

struct MonoData {
    std::vector<Factor> factors;
    Parity parity = Parity::even;
    std::optional<Rat> weight;
};

class Algebra;

// A finite Scalar-linear combination of interned monomials. Zero coefficients
// are never stored, so equality of expressions over one algebra is map
// equality.
class FieldExpr {
  public:
    FieldExpr() = default;

    static FieldExpr term(MonoId m, Scalar s) {
        FieldExpr e;
        if (!s.is_zero())
            e.terms_[m] = std::move(s);
        return e;
    }
    static FieldExpr constant(Scalar s) { return term(kVacuum, std::move(s)); }

    bool is_zero() const { return terms_.empty(); }
    const std::map<MonoId, Scalar> &terms() const { return terms_; }

    void add(MonoId m, Scalar s) {
        if (s.is_zero())
            return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, std::move(s));
        } else {
            it->second += s;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }
    void add(const FieldExpr &o, const Scalar &scale = Scalar(1)) {
        if (scale.is_one()) {
            for (const auto &[m, s] : o.terms_)
                add(m, s);
        } else if (scale.is_minus_one()) {
            for (const auto &[m, s] : o.terms_)
                add(m, -s);
        } else {
            for (const auto &[m, s] : o.terms_)
                add(m, s * scale);
        }
    }

    friend FieldExpr operator+(FieldExpr a, const FieldExpr &b) {
        a.add(b);
        return a;
    }
    friend FieldExpr operator-(FieldExpr a, const FieldExpr &b) {
        a.add(b, Scalar(-1));
        return a;
    }
    friend FieldExpr operator*(const Scalar &s, const FieldExpr &e) {
        if (s.is_one())
            return e;
        FieldExpr r;
        if (s.is_zero())
            return r;
        for (const auto &[m, q] : e.terms_)
            r.add(m, s * q);
        return r;
    }
    friend bool operator==(const FieldExpr &a, const FieldExpr &b) { return a.terms_ == b.terms_; }

    std::size_t approx_bytes() const {
        std::size_t n = sizeof(*this);
        for (const auto &[m, s] : terms_)
            n += sizeof(m) + s.approx_bytes() + 48;
        return n;
    }

  private:
    std::map<MonoId, Scalar> terms_;
};

// A lambda-bracket value: finitely many nonzero coefficients indexed by j,
// stored in the divided-power convention — coeffs[j] is the coefficient of
// lambda^j / j!, i.e. the j-th product a_(j)b. The plain lambda^j coefficient
// is coeffs[j] / j!.
class LambdaPoly {
  public:
    LambdaPoly() = default;

    bool is_zero() const { return coeffs_.empty(); }
    const std::map<int, FieldExpr> &coeffs() const { return coeffs_; }
    // a_(j)b; zero expression when absent.
    FieldExpr nth(int j) const {
        auto it = coeffs_.find(j);
        return it == coeffs_.end() ? FieldExpr{} : it->second;
    }
    int degree() const { return coeffs_.empty() ? -1 : coeffs_.rbegin()->first; }

    void set(int j, FieldExpr e) {
        if (e.is_zero())
            coeffs_.erase(j);
        else
            coeffs_[j] = std::move(e);
    }
    void add(int j, const FieldExpr &e, const Scalar &scale = Scalar(1)) {
        if (e.is_zero() || scale.is_zero())
            return;
        auto it = coeffs_.find(j);
        if (it == coeffs_.end()) {
            FieldExpr v = scale * e;
            if (!v.is_zero())
                coeffs_.emplace(j, std::move(v));
        } else {
            it->second.add(e, scale);
            if (it->second.is_zero())
                coeffs_.erase(it);
        }
    }
    void add(const LambdaPoly &o, const Scalar &scale = Scalar(1)) {
        for (const auto &[j, e] : o.coeffs_)
            add(j, e, scale);
    }

    friend LambdaPoly operator+(LambdaPoly a, const LambdaPoly &b) {
        a.add(b);
        return a;
    }
    friend LambdaPoly operator-(LambdaPoly a, const LambdaPoly &b) {
        a.add(b, Scalar(-1));
        return a;
    }
    friend LambdaPoly operator*(const Scalar &s, const LambdaPoly &p) {
        LambdaPoly r;
        r.add(p, s);
        return r;
    }
    friend bool operator==(const LambdaPoly &a, const LambdaPoly &b) {
        return a.coeffs_ == b.coeffs_;
    }

    std::size_t approx_bytes() const {
        std::size_t n = sizeof(*this);
        for (const auto &[j, e] : coeffs_)
            n += sizeof(j) + e.approx_bytes();
        return n;
    }

  private:
    std::map<int, FieldExpr> coeffs_;
};

// Bracket table in one stored orientation; pairs absent in both orientations
// are zero when `zero_default` is set (free-field tables) and an error
// otherwise. Generator-pair keys index into the owning algebra's generators.
struct BracketTable {
    std::map<std::pair<int, int>, LambdaPoly> entries;
    bool zero_default = false;
};

// Oriented rewrite replacing the normally ordered pair :a b: (two dorder-0
// factors) by an equivalent expression, used to orient a relation ideal.
struct Rewrite {
    Factor lhs_head;
    Factor lhs_tail;
    FieldExpr rhs;
};

// An algebra definition: generators, the stored bracket table, relation
// expressions (each asserted = 0), an optional central charge, plus the
// per-algebra monomial intern table and the engine's memo caches.
class Algebra {
  public:
    std::string name;
    std::vector<GeneratorSpec> gens;
    BracketTable table;
    std::vector<FieldExpr> relations;
    std::vector<Rewrite> rewrites;
    std::optional<Scalar> central_charge;
    // Set on bc-betagamma algebras: the generator of the supersymmetry
    // D = G_(0), and the number of (b,c,beta,gamma) quadruples.
    std::optional<FieldExpr> susy_gen;
    int quadruples = 0;

    Algebra() {
        monos_.push_back(MonoData{});
        intern_idx_.emplace(std::vector<Factor>{}, kVacuum);
    }
    Algebra(const Algebra &) = delete;
    Algebra &operator=(const Algebra &) = delete;

    int gen_index(const std::string &n) const {
        for (std::size_t k = 0; k < gens.size(); ++k)
            if (gens[k].name == n)
                return static_cast<int>(k);
        throw std::out_of_range("unknown generator: " + n);
    }
    bool has_gen(const std::string &n) const {
        for (const auto &g : gens)
            if (g.name == n)
                return true;
        return false;
    }

    // Canonical factor order: ascending generator sort_key, then descending
    // dorder (a generator's derivative tower groups together, highest first).
    bool factor_less(Factor a, Factor b) const {
        int ka = gens[a.gen].sort_key, kb = gens[b.gen].sort_key;
        if (ka != kb)
            return ka < kb;
        return a.dorder > b.dorder;
    }
    bool factor_canonical(const std::vector<Factor> &f) const {
        for (std::size_t k = 0; k + 1 < f.size(); ++k) {
            if (factor_less(f[k + 1], f[k]))
                return false;
            if (f[k] == f[k + 1] && gens[f[k].gen].parity == Parity::odd)
                return false;
        }
        return true;
    }

    // Intern a canonical factor list. Reordering is the engine's job; a
    // non-canonical list (or a repeated odd factor) is rejected here.
    MonoId intern(const std::vector<Factor> &factors) const {
        if (!factor_canonical(factors))
            throw std::invalid_argument("monomial factors not in canonical order");
        {
            std::shared_lock lk(intern_mx_);
            auto it = intern_idx_.find(factors);
            if (it != intern_idx_.end())
                return it->second;
        }
        std::unique_lock lk(intern_mx_);
        auto it = intern_idx_.find(factors);
        if (it != intern_idx_.end())
            return it->second;
        MonoData d;
        d.factors = factors;
        int par = 0;
        bool weighted = true;
        Rat w = 0;
        for (const Factor &f : factors) {
            const GeneratorSpec &g = gens[f.gen];
            par ^= static_cast<int>(g.parity);
            if (g.weight)
                w += *g.weight + f.dorder;
            else
                weighted = false;
        }
        d.parity = static_cast<Parity>(par);
        if (weighted)
            d.weight = w;
        MonoId id = static_cast<MonoId>(monos_.size());
        monos_.push_back(std::move(d));
        intern_idx_.emplace(factors, id);
        return id;
    }
    const MonoData &mono(MonoId id) const {
        std::shared_lock lk(intern_mx_);
        return monos_[id];
    }
    MonoId gen_mono(int gen, int dorder = 0) const {
        return intern({Factor{static_cast<uint16_t>(gen), static_cast<uint16_t>(dorder)}});
    }
    FieldExpr gen_expr(int gen, int dorder = 0) const {
        return FieldExpr::term(gen_mono(gen, dorder), Scalar(1));
    }

    Parity mono_parity(MonoId id) const { return mono(id).parity; }
    std::optional<Rat> mono_weight(MonoId id) const { return mono(id).weight; }

    // Content order on monomials (independent of intern ids), used wherever a
    // run-deterministic ordering is needed: report rendering, golden files.
    bool mono_content_less(MonoId a, MonoId b) const {
        if (a == b)
            return false;
        const MonoData da = mono(a), db = mono(b);
        std::size_t n = std::min(da.factors.size(), db.factors.size());
        for (std::size_t k = 0; k < n; ++k) {
            Factor x = da.factors[k], y = db.factors[k];
            if (!(x == y))
                return factor_less(x, y);
        }
        return da.factors.size() < db.factors.size();
    }
    std::vector<MonoId> content_sorted(const FieldExpr &e) const {
        std::vector<MonoId> ids;
        ids.reserve(e.terms().size());
        for (const auto &[m, s] : e.terms())
            ids.push_back(m);
        std::sort(ids.begin(), ids.end(),
                  [this](MonoId a, MonoId b) { return mono_content_less(a, b); });
        return ids;
    }

    // --- engine memo caches -------------------------------------------------
    std::shared_ptr<const LambdaPoly> memo_bracket_find(uint64_t key) const {
        std::shared_lock lk(memo_mx_);
        auto it = bracket_memo_.find(key);
        return it == bracket_memo_.end() ? nullptr : it->second;
    }
    void memo_bracket_store(uint64_t key, std::shared_ptr<const LambdaPoly> v) const {
        std::size_t sz = v->approx_bytes();
        std::unique_lock lk(memo_mx_);
        memo_make_room(sz);
        if (bracket_memo_.emplace(key, std::move(v)).second)
            memo_bytes_ += sz;
    }
    std::shared_ptr<const FieldExpr> memo_nprod_find(uint64_t key) const {
        std::shared_lock lk(memo_mx_);
        auto it = nprod_memo_.find(key);
        return it == nprod_memo_.end() ? nullptr : it->second;
    }
    void memo_nprod_store(uint64_t key, std::shared_ptr<const FieldExpr> v) const {
        std::size_t sz = v->approx_bytes();
        std::unique_lock lk(memo_mx_);
        memo_make_room(sz);
        if (nprod_memo_.emplace(key, std::move(v)).second)
            memo_bytes_ += sz;
    }

    // The LF_CACHE_BYTES environment variable caps the memo cache (default
    // 3 GiB).  When a store would push past the cap, both memo tables are
    // flushed and refilled by the computation in flight: recent results —
    // exactly the ones a deep recursion shares between its branches — always
    // land in the cache, which keeps long randomized runs from degrading
    // into exponential recomputation once the cap is first reached.
    static std::size_t cache_limit() {
        static const std::size_t limit = [] {
            if (const char *v = std::getenv("LF_CACHE_BYTES"))
                return static_cast<std::size_t>(std::strtoull(v, nullptr, 10));
            return static_cast<std::size_t>(3) << 30;
        }();
        return limit;
    }

  private:
    // Caller holds memo_mx_ exclusively.
    void memo_make_room(std::size_t incoming) const {
        if (memo_bytes_ + incoming <= cache_limit())
            return;
        bracket_memo_.clear();
        nprod_memo_.clear();
        memo_bytes_ = 0;
    }

    struct FactorsHash {
        std::size_t operator()(const std::vector<Factor> &f) const {
            std::size_t h = 1469598103934665603ull;
            for (const Factor &x : f) {
                h ^= (static_cast<std::size_t>(x.gen) << 16) | x.dorder;
                h *= 1099511628211ull;
            }
            return h;
        }
    };

    mutable std::shared_mutex intern_mx_;
    mutable std::unordered_map<std::vector<Factor>, MonoId, FactorsHash> intern_idx_;
    mutable std::deque<MonoData> monos_;

    mutable std::shared_mutex memo_mx_;
    mutable std::unordered_map<uint64_t, std::shared_ptr<const LambdaPoly>> bracket_memo_;
    mutable std::unordered_map<uint64_t, std::shared_ptr<const FieldExpr>> nprod_memo_;
    mutable std::size_t memo_bytes_ = 0;
};

using AlgebraPtr = std::shared_ptr<Algebra>;

// Parity of a homogeneous expression; empty when the expression mixes both.
inline std::optional<Parity> expr_parity(const Algebra &alg, const FieldExpr &e) {
    std::optional<Parity> p;
    for (const auto &[m, s] : e.terms()) {
        Parity q = alg.mono_parity(m);
        if (!p)
            p = q;
        else if (*p != q)
            return std::nullopt;
    }
    if (!p)
        p = Parity::even; // zero is even by convention
    return p;
}

// Largest conformal weight over the terms, when every generator has one.
inline std::optional<Rat> expr_max_weight(const Algebra &alg, const FieldExpr &e) {
    std::optional<Rat> w;
    for (const auto &[m, s] : e.terms()) {
        auto mw = alg.mono_weight(m);
        if (!mw)
            return std::nullopt;
        if (!w || *mw > *w)
            w = mw;
    }
    return w;
}

// ---------------------------------------------------------------------------
// Canonical text rendering (the expression grammar shared with the DSL).

inline std::string render_mono(const Algebra &alg, MonoId id) {
    const MonoData d = alg.mono(id);
    if (d.factors.empty())
        return "1";
    std::vector<std::string> parts;
    for (const Factor &f : d.factors) {
        std::string s = alg.gens[f.gen].name;
        for (int k = 0; k < f.dorder; ++k)
            s = "d(" + s + ")";
        parts.push_back(std::move(s));
    }
    // Right-nested normal product: :f1 :f2 f3:: and so on.
    std::string out = parts.back();
    for (std::size_t k = parts.size() - 1; k-- > 0;)
        out = ":" + parts[k] + " " + out + ":";
    return out;
}

inline std::string render_scalar_factor(const Scalar &s) {
    std::string t = s.to_string();
    bool sum = false;
    for (std::size_t k = 1; k < t.size(); ++k)
        if (t[k] == '+' || t[k] == '-')
            sum = true;
    return sum ? "(" + t + ")" : t;
}

inline std::string render_expr(const Algebra &alg, const FieldExpr &e) {
    if (e.is_zero())
        return "0";
    std::string out;
    for (MonoId id : alg.content_sorted(e)) {
        const Scalar &s = e.terms().at(id);
        std::string scal = render_scalar_factor(s);
        bool neg = scal.size() > 0 && scal[0] == '-';
        std::string abs_scal = neg ? render_scalar_factor(-s) : scal;
        std::string term;
        if (id == kVacuum)
            term = abs_scal;
        else if (abs_scal == "1")
            term = render_mono(alg, id);
        else
            term = abs_scal + "*" + render_mono(alg, id);
        if (out.empty())
            out = (neg ? "-" : "") + term;
        else
            out += (neg ? " - " : " + ") + term;
    }
    return out;
}

// Renders in plain lambda powers (dividing out the stored j! convention),
// matching the bracket grammar of the DSL: `2*L + (1/2)*lambda^2`.
inline std::string render_poly(const Algebra &alg, const LambdaPoly &p) {
    if (p.is_zero())
        return "0";
    std::string out;
    for (const auto &[j, divided] : p.coeffs()) {
        Rat fact = 1;
        for (int t = 2; t <= j; ++t)
            fact *= t;
        FieldExpr plain = Scalar(Rat(1) / fact) * divided;
        std::string lam = j == 0 ? "" : (j == 1 ? "lambda" : "lambda^" + std::to_string(j));
        std::string term;
        bool neg = false;
        if (plain.terms().size() == 1) {
            auto [m, s] = *plain.terms().begin();
            std::string scal = render_scalar_factor(s);
            neg = scal[0] == '-';
            std::string abs_scal = neg ? render_scalar_factor(-s) : scal;
            std::vector<std::string> fs;
            if (abs_scal != "1" || (m == kVacuum && lam.empty()))
                fs.push_back(abs_scal);
            if (!lam.empty())
                fs.push_back(lam);
            if (m != kVacuum)
                fs.push_back(render_mono(alg, m));
            for (std::size_t k = 0; k < fs.size(); ++k)
                term += (k ? "*" : "") + fs[k];
        } else {
            term = lam.empty() ? "(" + render_expr(alg, plain) + ")"
                               : lam + "*(" + render_expr(alg, plain) + ")";
        }
        if (out.empty())
            out = (neg ? "-" : "") + term;
        else
            out += (neg ? " - " : " + ") + term;
    }
    return out;
}

} // namespace lf
