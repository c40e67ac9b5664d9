#pragma once

#include <algorithm>
#include <array>
#include <cstdlib>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "checks.hpp"
#include "scalar.hpp"

// Exact tensor kernel for the G2 geometry of flat R^7: the associative
// 3-form, its coassociative dual, and the full table of contraction
// identities between them. Indices are 0-based internally and printed
// 1-based in the text format.

namespace lf {

inline constexpr int kDim = 7;

namespace detail {
// Sorts idx ascending, returning the permutation sign (0 on a repeated index).
inline int sort_sign(std::vector<int> &idx) {
    int sign = 1;
    for (std::size_t i = 1; i < idx.size(); ++i)
        for (std::size_t j = i; j > 0 && idx[j] < idx[j - 1]; --j) {
            std::swap(idx[j], idx[j - 1]);
            sign = -sign;
        }
    for (std::size_t i = 1; i < idx.size(); ++i)
        if (idx[i] == idx[i - 1])
            return 0;
    return sign;
}
} // namespace detail

// Totally antisymmetric tensor with exact rational components, stored on
// strictly increasing index tuples.
class TensorTable {
  public:
    explicit TensorTable(int rank) : rank_(rank) {
        if (rank < 0 || rank > kDim)
            throw std::invalid_argument("tensor rank out of range");
    }

    int rank() const { return rank_; }
    const std::map<std::vector<int>, Rat> &entries() const { return vals_; }

    void set(std::vector<int> idx, const Rat &v) {
        check_indices(idx);
        int sign = detail::sort_sign(idx);
        if (sign == 0) {
            if (v != 0)
                throw std::invalid_argument("repeated index in antisymmetric tensor entry");
            return;
        }
        Rat sv = sign > 0 ? v : Rat(-v);
        if (sv == 0)
            vals_.erase(idx);
        else
            vals_[idx] = sv;
    }

    Rat get(std::vector<int> idx) const {
        check_indices(idx);
        int sign = detail::sort_sign(idx);
        if (sign == 0)
            return 0;
        auto it = vals_.find(idx);
        if (it == vals_.end())
            return 0;
        return sign > 0 ? it->second : Rat(-it->second);
    }

    // Dense component array (row-major over all kDim^rank assignments), for
    // the integer-valued tensors used by the contraction checks.
    std::vector<long> dense_int() const {
        std::size_t total = 1;
        for (int r = 0; r < rank_; ++r)
            total *= kDim;
        std::vector<long> out(total, 0);
        std::vector<int> idx(rank_, 0);
        for (std::size_t flat = 0; flat < total; ++flat) {
            std::size_t rem = flat;
            for (int r = rank_ - 1; r >= 0; --r) {
                idx[r] = static_cast<int>(rem % kDim);
                rem /= kDim;
            }
            Rat v = get(idx);
            if (denominator(v) != 1)
                throw std::domain_error("dense_int requires integer tensor components");
            out[flat] = static_cast<long>(numerator(v));
        }
        return out;
    }

    friend bool operator==(const TensorTable &a, const TensorTable &b) {
        return a.rank_ == b.rank_ && a.vals_ == b.vals_;
    }

  private:
    void check_indices(const std::vector<int> &idx) const {
        if (static_cast<int>(idx.size()) != rank_)
            throw std::invalid_argument("tensor index count does not match rank");
        for (int v : idx)
            if (v < 0 || v >= kDim)
                throw std::out_of_range("tensor index out of range");
    }

    int rank_;
    std::map<std::vector<int>, Rat> vals_;
};

// Hodge dual on flat R^7 with the Euclidean metric: for w of rank r,
// (*w)_{b_1..b_{7-r}} = (1/r!) eps_{a_1..a_r b_1..b_{7-r}} w_{a_1..a_r},
// multiplied by `orientation` (+1: eps_{1..7} = +1; -1: the reversed one).
inline TensorTable hodge_dual(const TensorTable &w, int orientation = 1) {
    int r = w.rank();
    TensorTable out(kDim - r);
    // For each stored tuple, the complementary sorted tuple receives the sign
    // of the concatenated permutation (each of the r! index orders of the
    // stored tuple contributes equally, cancelling the 1/r!).
    for (const auto &[a, v] : w.entries()) {
        std::vector<int> b;
        std::vector<bool> used(kDim, false);
        for (int x : a)
            used[x] = true;
        for (int x = 0; x < kDim; ++x)
            if (!used[x])
                b.push_back(x);
        std::vector<int> concat = a;
        concat.insert(concat.end(), b.begin(), b.end());
        int sign = detail::sort_sign(concat) * orientation;
        out.set(b, sign > 0 ? v : Rat(-v));
    }
    return out;
}

// The orientation of R^7 used throughout the G2 kernel. It is pinned by the
// contraction table below: the double phi-psi contraction must equal
// -4 phi_{iab}, which selects the reversed orientation for the dual pair
// (phi, psi). Both dual-involution identities *phi = psi and *psi = phi hold
// for this orientation.
inline constexpr int kG2Orientation = -1;

// The associative 3-form of flat R^7 (components on 1-based index triples
// 123, 145, 167, 246, -257, -347, -356).
inline const TensorTable &phi0() {
    static const TensorTable t = [] {
        TensorTable p(3);
        p.set({0, 1, 2}, 1);
        p.set({0, 3, 4}, 1);
        p.set({0, 5, 6}, 1);
        p.set({1, 3, 5}, 1);
        p.set({1, 4, 6}, -1);
        p.set({2, 3, 6}, -1);
        p.set({2, 4, 5}, -1);
        return p;
    }();
    return t;
}

// The coassociative 4-form: the Hodge dual of phi0 in the kernel orientation.
inline const TensorTable &psi0() {
    static const TensorTable t = hodge_dual(phi0(), kG2Orientation);
    return t;
}

// Taylor coefficients T_{r,s} = (r+s)! / ((r-s)! s! 2^s) of the half-integer
// Bessel-type expansion used by parallel-transport kernels; zero outside
// 0 <= s <= r.
inline Rat bessel_coeff(long r, long s) {
    if (s < 0 || s > r)
        return 0;
    Rat num = 1;
    for (long t = r - s + 1; t <= r + s; ++t)
        num *= t;
    Rat den = 1;
    for (long t = 2; t <= s; ++t)
        den *= t;
    for (long t = 0; t < s; ++t)
        den *= 2;
    return num / den;
}

// --- the contraction identity table -------------------------------------------

namespace detail {

struct DenseG2 {
    std::vector<long> phi; // 7^3
    std::vector<long> psi; // 7^4
    long p3(int i, int j, int k) const { return phi[(i * kDim + j) * kDim + k]; }
    long p4(int i, int j, int k, int l) const {
        return psi[((i * kDim + j) * kDim + k) * kDim + l];
    }
};

inline const DenseG2 &dense_g2() {
    static const DenseG2 d{phi0().dense_int(), psi0().dense_int()};
    return d;
}

// Runs `body(first)` over a 7^n outer index block, chunked across jobs.
inline void parallel_assignments(long total, int jobs, const std::function<void(long, long)> &body) {
    if (jobs <= 1) {
        body(0, total);
        return;
    }
    std::vector<std::thread> pool;
    long chunk = (total + jobs - 1) / jobs;
    for (long lo = 0; lo < total; lo += chunk) {
        long hi = std::min(total, lo + chunk);
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto &t : pool)
        t.join();
}

struct IdentityScan {
    long failures = 0;
    long first_bad = -1; // flat index of the first failing assignment
    long lhs_at_bad = 0, rhs_at_bad = 0;

    void merge(const IdentityScan &o) {
        failures += o.failures;
        if (o.first_bad >= 0 && (first_bad < 0 || o.first_bad < first_bad)) {
            first_bad = o.first_bad;
            lhs_at_bad = o.lhs_at_bad;
            rhs_at_bad = o.rhs_at_bad;
        }
    }
};

// Evaluates lhs/rhs over all 7^n free-index assignments in parallel.
inline CheckResult scan_identity(const std::string &name, int free_count, int jobs,
                                 const std::function<long(const int *)> &lhs,
                                 const std::function<long(const int *)> &rhs) {
    long total = 1;
    for (int r = 0; r < free_count; ++r)
        total *= kDim;
    std::vector<IdentityScan> parts;
    std::mutex mx;
    parallel_assignments(total, jobs, [&](long lo, long hi) {
        IdentityScan part;
        std::vector<int> idx(free_count ? free_count : 1, 0);
        for (long flat = lo; flat < hi; ++flat) {
            long rem = flat;
            for (int r = free_count - 1; r >= 0; --r) {
                idx[r] = static_cast<int>(rem % kDim);
                rem /= kDim;
            }
            long l = lhs(idx.data()), rr = rhs(idx.data());
            if (l != rr) {
                ++part.failures;
                if (part.first_bad < 0) {
                    part.first_bad = flat;
                    part.lhs_at_bad = l;
                    part.rhs_at_bad = rr;
                }
            }
        }
        std::lock_guard lk(mx);
        parts.push_back(part);
    });
    IdentityScan scan;
    for (const auto &p : parts)
        scan.merge(p);
    CheckResult out;
    out.name = name;
    out.pass = scan.failures == 0;
    if (out.pass) {
        out.lhs = "lhs(all " + std::to_string(total) + " assignments)";
        out.rhs = "rhs(all " + std::to_string(total) + " assignments)";
        out.difference = "0";
    } else {
        std::vector<int> idx(free_count, 0);
        long rem = scan.first_bad;
        for (int r = free_count - 1; r >= 0; --r) {
            idx[r] = static_cast<int>(rem % kDim);
            rem /= kDim;
        }
        std::string at = "(";
        for (int r = 0; r < free_count; ++r)
            at += (r ? "," : "") + std::to_string(idx[r] + 1);
        at += ")";
        out.lhs = std::to_string(scan.lhs_at_bad) + " at " + at;
        out.rhs = std::to_string(scan.rhs_at_bad) + " at " + at;
        out.difference = std::to_string(scan.failures) + " failing assignments, first at " + at;
    }
    return out;
}

// Signs of all permutations of {0..4}, precomputed for the 5-index
// antisymmetrizations.
inline const std::vector<std::pair<std::array<int, 5>, int>> &s5_table() {
    static const std::vector<std::pair<std::array<int, 5>, int>> table = [] {
        std::vector<std::pair<std::array<int, 5>, int>> t;
        std::array<int, 5> p{0, 1, 2, 3, 4};
        do {
            std::vector<int> v(p.begin(), p.end());
            int inv = 0;
            for (int i = 0; i < 5; ++i)
                for (int j = i + 1; j < 5; ++j)
                    if (v[i] > v[j])
                        ++inv;
            t.push_back({p, inv % 2 == 0 ? 1 : -1});
        } while (std::next_permutation(p.begin(), p.end()));
        return t;
    }();
    return table;
}

} // namespace detail

// The full contraction table between the associative and coassociative forms
// over flat R^7, each verified exactly over every free-index assignment.
inline std::vector<CheckResult> g2_contraction_checks(int jobs = 1,
                                                      const TensorTable *phi_in = nullptr) {
    const TensorTable &phi_t = phi_in ? *phi_in : phi0();
    const TensorTable psi_t = hodge_dual(phi_t, kG2Orientation);
    const std::vector<long> phi = phi_t.dense_int();
    const std::vector<long> psi = psi_t.dense_int();
    auto p3 = [&phi](int i, int j, int k) { return phi[(i * kDim + j) * kDim + k]; };
    auto p4 = [&psi](int i, int j, int k, int l) {
        return psi[((i * kDim + j) * kDim + k) * kDim + l];
    };
    auto g = [](int i, int j) { return i == j ? 1L : 0L; };

    std::vector<CheckResult> out;

    // Full contraction: phi_{ijk} phi_{ijk} = 42.
    {
        long total = 0;
        for (int i = 0; i < kDim; ++i)
            for (int j = 0; j < kDim; ++j)
                for (int k = 0; k < kDim; ++k)
                    total += p3(i, j, k) * p3(i, j, k);
        CheckResult c;
        c.name = "contraction_42";
        c.pass = total == 42;
        c.lhs = std::to_string(total);
        c.rhs = "42";
        c.difference = std::to_string(total - 42);
        out.push_back(c);
    }

    // Double contraction: phi_{ijk} phi_{ajk} = 6 g_{ia}.
    out.push_back(detail::scan_identity(
        "contraction_6g", 2, jobs,
        [&](const int *x) {
            long s = 0;
            for (int j = 0; j < kDim; ++j)
                for (int k = 0; k < kDim; ++k)
                    s += p3(x[0], j, k) * p3(x[1], j, k);
            return s;
        },
        [&](const int *x) { return 6 * g(x[0], x[1]); }));

    // Single contraction: phi_{ijk} phi_{abk} = g_{ia}g_{jb} - g_{ib}g_{ja} - psi_{ijab}.
    out.push_back(detail::scan_identity(
        "contraction_phi_phi_single", 4, jobs,
        [&](const int *x) {
            long s = 0;
            for (int k = 0; k < kDim; ++k)
                s += p3(x[0], x[1], k) * p3(x[2], x[3], k);
            return s;
        },
        [&](const int *x) {
            return g(x[0], x[2]) * g(x[1], x[3]) - g(x[0], x[3]) * g(x[1], x[2]) -
                   p4(x[0], x[1], x[2], x[3]);
        }));

    // Triple contraction of phi against psi vanishes: phi_{ijk} psi_{aijk} = 0.
    out.push_back(detail::scan_identity(
        "contraction_phi_psi_triple", 1, jobs,
        [&](const int *x) {
            long s = 0;
            for (int i = 0; i < kDim; ++i)
                for (int j = 0; j < kDim; ++j)
                    for (int k = 0; k < kDim; ++k)
                        s += p3(i, j, k) * p4(x[0], i, j, k);
            return s;
        },
        [&](const int *) { return 0L; }));

    // Double contraction: phi_{ipq} psi_{abpq} = -4 phi_{iab}.
    out.push_back(detail::scan_identity(
        "contraction_phi_psi_double", 3, jobs,
        [&](const int *x) {
            long s = 0;
            for (int p = 0; p < kDim; ++p)
                for (int q = 0; q < kDim; ++q)
                    s += p3(x[0], p, q) * p4(x[1], x[2], p, q);
            return s;
        },
        [&](const int *x) { return -4 * p3(x[0], x[1], x[2]); }));

    // Single contraction: phi_{ijk} psi_{abck} =
    //   g_{ia}phi_{jbc} + g_{ib}phi_{ajc} + g_{ic}phi_{abj}
    //   - g_{aj}phi_{ibc} - g_{bj}phi_{aic} - g_{cj}phi_{abi}.
    out.push_back(detail::scan_identity(
        "contraction_phi_psi_single", 5, jobs,
        [&](const int *x) {
            long s = 0;
            for (int k = 0; k < kDim; ++k)
                s += p3(x[0], x[1], k) * p4(x[2], x[3], x[4], k);
            return s;
        },
        [&](const int *x) {
            int i = x[0], j = x[1], a = x[2], b = x[3], c = x[4];
            return g(i, a) * p3(j, b, c) + g(i, b) * p3(a, j, c) + g(i, c) * p3(a, b, j) -
                   g(a, j) * p3(i, b, c) - g(b, j) * p3(a, i, c) - g(c, j) * p3(a, b, i);
        }));

    // Single contraction of two psi's: psi_{ijkl} psi_{abcl} =
    //   - phi_{ajk}phi_{ibc} - phi_{iak}phi_{jbc} - phi_{ija}phi_{kbc}
    //   + g_{ia}g_{jb}g_{kc} + g_{ib}g_{jc}g_{ka} + g_{ic}g_{ja}g_{kb}
    //   - g_{ia}g_{jc}g_{kb} - g_{ib}g_{ja}g_{kc} - g_{ic}g_{jb}g_{ka}
    //   - g_{ia}psi_{jkbc} - g_{ja}psi_{kibc} - g_{ka}psi_{ijbc}
    //   + g_{ab}psi_{ijkc} - g_{ac}psi_{ijkb}.
    out.push_back(detail::scan_identity(
        "contraction_psi_psi_single", 6, jobs,
        [&](const int *x) {
            long s = 0;
            for (int l = 0; l < kDim; ++l)
                s += p4(x[0], x[1], x[2], l) * p4(x[3], x[4], x[5], l);
            return s;
        },
        [&](const int *x) {
            int i = x[0], j = x[1], k = x[2], a = x[3], b = x[4], c = x[5];
            return -p3(a, j, k) * p3(i, b, c) - p3(i, a, k) * p3(j, b, c) -
                   p3(i, j, a) * p3(k, b, c) + g(i, a) * g(j, b) * g(k, c) +
                   g(i, b) * g(j, c) * g(k, a) + g(i, c) * g(j, a) * g(k, b) -
                   g(i, a) * g(j, c) * g(k, b) - g(i, b) * g(j, a) * g(k, c) -
                   g(i, c) * g(j, b) * g(k, a) - g(i, a) * p4(j, k, b, c) -
                   g(j, a) * p4(k, i, b, c) - g(k, a) * p4(i, j, b, c) +
                   g(a, b) * p4(i, j, k, c) - g(a, c) * p4(i, j, k, b);
        }));

    // Antisymmetrized product: the alternation of phi_{ijk} phi_{mnl} over the
    // five indices (i,j,k,m,n) equals -2 times the alternation of
    // g_{lm} psi_{nijk} over the same five, when each alternation sums once
    // over distinct index arrangements. Both sides are carried here as full
    // signed S5 sums; the phi-phi term repeats each distinct arrangement
    // 3!*2! = 12 times and the g-psi term 4! = 24 times, so the coefficient
    // -2 on distinct arrangements becomes -1 between the S5 sums.
    out.push_back(detail::scan_identity(
        "alternation_quintic", 6, jobs,
        [&](const int *x) {
            long s = 0;
            for (const auto &[p, sgn] : detail::s5_table())
                s += sgn * p3(x[p[0]], x[p[1]], x[p[2]]) * p3(x[p[3]], x[p[4]], x[5]);
            return s;
        },
        [&](const int *x) {
            const int slots[5] = {3, 4, 0, 1, 2}; // (m, n, i, j, k)
            long s = 0;
            for (const auto &[p, sgn] : detail::s5_table()) {
                int m = x[slots[p[0]]], n = x[slots[p[1]]], i = x[slots[p[2]]],
                    j = x[slots[p[3]]], k = x[slots[p[4]]];
                s -= sgn * g(x[5], m) * p4(n, i, j, k);
            }
            return s;
        }));

    // Inner-product identity: (u . phi) ^ (v . phi) ^ phi = 6 <u,v> dvol with
    // dvol = dx1...dx7 (coefficient extracted by a full S7 alternation).
    {
        std::array<int, 7> perm{0, 1, 2, 3, 4, 5, 6};
        std::vector<std::pair<std::array<int, 7>, int>> s7;
        do {
            int inv = 0;
            for (int i = 0; i < 7; ++i)
                for (int j = i + 1; j < 7; ++j)
                    if (perm[i] > perm[j])
                        ++inv;
            s7.push_back({perm, inv % 2 == 0 ? 1 : -1});
        } while (std::next_permutation(perm.begin(), perm.end()));
        // Both sides scaled by the 2!2!3! wedge normalization to stay in
        // integer arithmetic.
        out.push_back(detail::scan_identity(
            "inner_product_wedge", 2, jobs,
            [&](const int *x) {
                long s = 0;
                for (const auto &[p, sgn] : s7)
                    s += sgn * p3(x[0], p[0], p[1]) * p3(x[1], p[2], p[3]) *
                         p3(p[4], p[5], p[6]);
                return s;
            },
            [&](const int *x) { return 6 * (2 * 2 * 6) * g(x[0], x[1]); }));
    }

    return out;
}

// --- text format ----------------------------------------------------------------

// Renders a tensor in the versioned component-table text format (1-based
// indices, one strictly increasing tuple per line).
inline std::string render_tensor(const std::string &name, const TensorTable &t) {
    std::ostringstream os;
    os << "format=1\n";
    os << "tensor " << name << " rank=" << t.rank() << " dim=" << kDim << "\n";
    for (const auto &[idx, v] : t.entries()) {
        for (int x : idx)
            os << (x + 1);
        os << " " << v.str() << "\n";
    }
    return os.str();
}

} // namespace lf
