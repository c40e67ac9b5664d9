#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace lf {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

namespace detail {

inline unsigned __int128 gcd128(unsigned __int128 a, unsigned __int128 b) {
    while (b != 0) {
        unsigned __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline Int int128_to_int(__int128 v) {
    const bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    Int out = static_cast<std::uint64_t>(u >> 64);
    out <<= 64;
    out += static_cast<std::uint64_t>(u);
    return neg ? Int(-out) : out;
}

// Exact rational with a machine-word fast path.  Values whose reduced form
// fits in int64 (excluding INT64_MIN, so negation never overflows) are kept
// as a plain numerator/denominator pair; anything larger is promoted to a
// heap cpp_rational.  Every operation renormalizes, so the small form is
// canonical: a big value never holds something the small form could.
class SmallRat {
  public:
    SmallRat() = default;
    SmallRat(long long v) : n_(v), d_(1) {}
    SmallRat(long long num, long long den) {
        if (den == 0)
            throw std::domain_error("SmallRat: zero denominator");
        *this = make(static_cast<__int128>(num), static_cast<__int128>(den));
    }
    SmallRat(const Rat &v) { assign_rat(v); }
    SmallRat &operator=(const Rat &v) {
        assign_rat(v);
        return *this;
    }

    bool is_zero() const { return !big_ && n_ == 0; }
    bool is_one() const { return !big_ && n_ == 1 && d_ == 1; }
    bool is_minus_one() const { return !big_ && n_ == -1 && d_ == 1; }
    bool negative() const { return big_ ? (*big_ < 0) : (n_ < 0); }

    Rat to_rat() const { return big_ ? *big_ : Rat(n_, d_); }

    friend SmallRat operator+(const SmallRat &a, const SmallRat &b) {
        if (!a.big_ && !b.big_) {
            const __int128 n = static_cast<__int128>(a.n_) * b.d_ + static_cast<__int128>(b.n_) * a.d_;
            const __int128 d = static_cast<__int128>(a.d_) * b.d_;
            return make(n, d);
        }
        return from_rat(a.to_rat() + b.to_rat());
    }
    friend SmallRat operator-(const SmallRat &a, const SmallRat &b) {
        if (!a.big_ && !b.big_) {
            const __int128 n = static_cast<__int128>(a.n_) * b.d_ - static_cast<__int128>(b.n_) * a.d_;
            const __int128 d = static_cast<__int128>(a.d_) * b.d_;
            return make(n, d);
        }
        return from_rat(a.to_rat() - b.to_rat());
    }
    friend SmallRat operator*(const SmallRat &a, const SmallRat &b) {
        if (!a.big_ && !b.big_) {
            const __int128 n = static_cast<__int128>(a.n_) * b.n_;
            const __int128 d = static_cast<__int128>(a.d_) * b.d_;
            return make(n, d);
        }
        return from_rat(a.to_rat() * b.to_rat());
    }
    friend SmallRat operator/(const SmallRat &a, const SmallRat &b) {
        if (b.is_zero())
            throw std::domain_error("SmallRat: division by zero");
        if (!a.big_ && !b.big_) {
            __int128 n = static_cast<__int128>(a.n_) * b.d_;
            __int128 d = static_cast<__int128>(a.d_) * b.n_;
            if (d < 0) {
                n = -n;
                d = -d;
            }
            return make(n, d);
        }
        return from_rat(a.to_rat() / b.to_rat());
    }
    SmallRat operator-() const {
        if (!big_) {
            SmallRat r;
            r.n_ = -n_;
            r.d_ = d_;
            return r;
        }
        return from_rat(Rat(-*big_));
    }
    SmallRat &operator+=(const SmallRat &o) { return *this = *this + o; }
    SmallRat &operator-=(const SmallRat &o) { return *this = *this - o; }
    SmallRat &operator*=(const SmallRat &o) { return *this = *this * o; }
    SmallRat &operator/=(const SmallRat &o) { return *this = *this / o; }

    SmallRat times_int(long long k) const {
        if (!big_)
            return make(static_cast<__int128>(n_) * k, static_cast<__int128>(d_));
        return from_rat(Rat(*big_ * k));
    }

    friend bool operator==(const SmallRat &a, const SmallRat &b) {
        if (!a.big_ && !b.big_)
            return a.n_ == b.n_ && a.d_ == b.d_;
        if (a.big_ && b.big_)
            return *a.big_ == *b.big_;
        return false; // canonical: a big value never equals a small-form value
    }
    friend bool operator!=(const SmallRat &a, const SmallRat &b) { return !(a == b); }

    // Reduced decimal form matching cpp_rational::str(): "5", "-7/2".
    std::string str() const {
        if (big_)
            return big_->str();
        std::string out = std::to_string(n_);
        if (d_ != 1)
            out += "/" + std::to_string(d_);
        return out;
    }

    std::size_t approx_bytes() const {
        std::size_t n = sizeof(*this);
        if (big_)
            n += numerator(*big_).backend().size() * sizeof(boost::multiprecision::limb_type) +
                 denominator(*big_).backend().size() * sizeof(boost::multiprecision::limb_type) +
                 sizeof(Rat);
        return n;
    }

  private:
    static constexpr long long kFit = std::numeric_limits<long long>::max();

    // Reduce n/d (d > 0 required) and choose the small or big representation.
    static SmallRat make(__int128 n, __int128 d) {
        if (d == 0)
            throw std::domain_error("SmallRat: zero denominator");
        if (n == 0)
            return SmallRat();
        unsigned __int128 un = n < 0 ? -static_cast<unsigned __int128>(n) : static_cast<unsigned __int128>(n);
        unsigned __int128 ud = static_cast<unsigned __int128>(d);
        const unsigned __int128 g = gcd128(un, ud);
        un /= g;
        ud /= g;
        SmallRat r;
        if (un <= static_cast<unsigned __int128>(kFit) && ud <= static_cast<unsigned __int128>(kFit)) {
            r.n_ = n < 0 ? -static_cast<long long>(un) : static_cast<long long>(un);
            r.d_ = static_cast<long long>(ud);
        } else {
            Int bn = int128_to_int(n < 0 ? -static_cast<__int128>(un) : static_cast<__int128>(un));
            Int bd = int128_to_int(static_cast<__int128>(ud));
            r.big_ = std::make_shared<const Rat>(Rat(bn, bd));
        }
        return r;
    }

    static SmallRat from_rat(const Rat &v) {
        SmallRat r;
        r.assign_rat(v);
        return r;
    }

    void assign_rat(const Rat &v) {
        const Int &num = numerator(v);
        const Int &den = denominator(v);
        if (num >= -kFit && num <= kFit && den <= kFit) {
            n_ = num.convert_to<long long>();
            d_ = den.convert_to<long long>();
            big_.reset();
        } else {
            n_ = 0;
            d_ = 1;
            big_ = std::make_shared<const Rat>(v);
        }
    }

    long long n_ = 0;
    long long d_ = 1; // always > 0; reduced against n_
    std::shared_ptr<const Rat> big_;
};

} // namespace detail

// Exact arithmetic in the field Q(i, sqrt2, sqrt15), represented as an
// 8-dimensional Q-vector space with basis
//
//   index:  0    1    2        3          4        5          6        7
//   value:  1    i    sqrt2    i*sqrt2    sqrt15   i*sqrt15   sqrt30   i*sqrt30
//
// Basis index bits: bit0 = a factor of i, bit1 = sqrt2, bit2 = sqrt15.
// Products of basis elements reduce by i^2 = -1, sqrt2^2 = 2, sqrt15^2 = 15,
// so multiplication is an XOR of indices times a rational factor.
class Scalar {
  public:
    Scalar() = default;
    Scalar(long v) { c_[0] = detail::SmallRat(static_cast<long long>(v)); }
    Scalar(const Rat &v) { c_[0] = v; }
    Scalar(long num, long den) { c_[0] = detail::SmallRat(num, den); }

    static Scalar basis(int k, const Rat &q = 1) {
        Scalar s;
        s.c_[k] = q;
        return s;
    }
    static Scalar i() { return basis(1); }
    static Scalar sqrt2() { return basis(2); }
    static Scalar sqrt15() { return basis(4); }

    bool is_zero() const {
        for (const auto &q : c_)
            if (!q.is_zero())
                return false;
        return true;
    }
    // True when the value lies in Q (only the basis-1 coordinate is set).
    bool is_rational() const {
        for (int k = 1; k < 8; ++k)
            if (!c_[k].is_zero())
                return false;
        return true;
    }
    bool is_one() const { return c_[0].is_one() && is_rational(); }
    bool is_minus_one() const { return c_[0].is_minus_one() && is_rational(); }
    Rat coord(int k) const { return c_[k].to_rat(); }
    Rat rat() const {
        if (!is_rational())
            throw std::domain_error("Scalar: value is not rational: " + to_string());
        return c_[0].to_rat();
    }

    // The coordinate loops skip zero slots: most values live in Q alone, and
    // even a trivial rational add costs a normalization pass.
    friend Scalar operator+(const Scalar &a, const Scalar &b) {
        Scalar r;
        for (int k = 0; k < 8; ++k) {
            if (b.c_[k].is_zero())
                r.c_[k] = a.c_[k];
            else if (a.c_[k].is_zero())
                r.c_[k] = b.c_[k];
            else
                r.c_[k] = a.c_[k] + b.c_[k];
        }
        return r;
    }
    friend Scalar operator-(const Scalar &a, const Scalar &b) {
        Scalar r;
        for (int k = 0; k < 8; ++k) {
            if (b.c_[k].is_zero())
                r.c_[k] = a.c_[k];
            else if (a.c_[k].is_zero())
                r.c_[k] = -b.c_[k];
            else
                r.c_[k] = a.c_[k] - b.c_[k];
        }
        return r;
    }
    Scalar operator-() const {
        Scalar r;
        for (int k = 0; k < 8; ++k)
            if (!c_[k].is_zero())
                r.c_[k] = -c_[k];
        return r;
    }
    friend Scalar operator*(const Scalar &a, const Scalar &b) {
        Scalar r;
        for (int ka = 0; ka < 8; ++ka) {
            if (a.c_[ka].is_zero())
                continue;
            for (int kb = 0; kb < 8; ++kb) {
                if (b.c_[kb].is_zero())
                    continue;
                detail::SmallRat f = a.c_[ka] * b.c_[kb];
                if (ka & kb & 1)
                    f = -f;
                if (ka & kb & 2)
                    f = f.times_int(2);
                if (ka & kb & 4)
                    f = f.times_int(15);
                r.c_[ka ^ kb] += f;
            }
        }
        return r;
    }
    friend Scalar operator/(const Scalar &a, const Scalar &b) { return a * b.inverse(); }

    Scalar &operator+=(const Scalar &o) {
        for (int k = 0; k < 8; ++k)
            if (!o.c_[k].is_zero())
                c_[k] += o.c_[k];
        return *this;
    }
    Scalar &operator-=(const Scalar &o) {
        for (int k = 0; k < 8; ++k)
            if (!o.c_[k].is_zero())
                c_[k] -= o.c_[k];
        return *this;
    }
    Scalar &operator*=(const Scalar &o) { return *this = *this * o; }
    Scalar &operator/=(const Scalar &o) { return *this = *this / o; }

    friend bool operator==(const Scalar &a, const Scalar &b) { return a.c_ == b.c_; }
    friend bool operator!=(const Scalar &a, const Scalar &b) { return !(a == b); }

    // Multiplicative inverse via the conjugation chain: kill i, then sqrt2,
    // then sqrt15; each norm stays inside the smaller subfield.
    Scalar inverse() const {
        if (is_zero())
            throw std::domain_error("Scalar: division by zero");
        Scalar z1 = conj(1);
        Scalar n1 = *this * z1;
        Scalar z2 = n1.conj(2);
        Scalar n2 = n1 * z2;
        Scalar z3 = n2.conj(4);
        Scalar n3 = n2 * z3;
        // n3 is a nonzero rational by construction.
        const detail::SmallRat d = n3.c_[0];
        Scalar r = z1 * z2 * z3;
        for (int k = 0; k < 8; ++k)
            if (!r.c_[k].is_zero())
                r.c_[k] /= d;
        return r;
    }

    // Canonical text form, e.g. "3/2", "-7/2", "1/2*sqrt2", "i", "1/24*i*sqrt2".
    std::string to_string() const {
        static const char *names[8] = {"",       "i",        "sqrt2",  "i*sqrt2",
                                       "sqrt15", "i*sqrt15", "sqrt2*sqrt15",
                                       "i*sqrt2*sqrt15"};
        std::string out;
        for (int k = 0; k < 8; ++k) {
            if (c_[k].is_zero())
                continue;
            const bool neg = c_[k].negative();
            if (out.empty())
                out += neg ? "-" : "";
            else
                out += neg ? "-" : "+";
            const detail::SmallRat a = neg ? -c_[k] : c_[k];
            std::string base = names[k];
            if (base.empty())
                out += a.str();
            else if (a.is_one())
                out += base;
            else
                out += a.str() + "*" + base;
        }
        return out.empty() ? "0" : out;
    }

    // Total size of the coordinates, used for cache accounting.
    std::size_t approx_bytes() const {
        std::size_t n = sizeof(*this);
        for (const auto &q : c_)
            n += q.approx_bytes() - sizeof(q);
        return n;
    }

  private:
    // Flip the sign of every coordinate whose index has `bit` set.
    Scalar conj(int bit) const {
        Scalar r = *this;
        for (int k = 0; k < 8; ++k)
            if ((k & bit) && !r.c_[k].is_zero())
                r.c_[k] = -r.c_[k];
        return r;
    }

    std::array<detail::SmallRat, 8> c_{};
};

inline Scalar operator*(const Rat &q, const Scalar &s) { return Scalar(q) * s; }
inline Scalar operator*(long q, const Scalar &s) { return Scalar(q) * s; }

} // namespace lf
