#pragma once

#include <compare>
#include <ostream>
#include <sstream>
#include <string>

#include <gmpxx.h>

#include "qtj/error.hpp"

namespace qtj
{

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Integer &num, const Integer &den)
{
    if (den == 0)
        throw Error(Errc::ZeroDenominator, "rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline int sign_of(const Integer &x) { return sgn(x); }
inline int sign_of(const Rational &x) { return sgn(x); }

inline Integer floor_div(const Integer &num, const Integer &den)
{
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

inline Integer isqrt(const Integer &x)
{
    Integer r;
    mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
    return r;
}

inline Integer floor_of(const Rational &q) { return floor_div(q.get_num(), q.get_den()); }

/// Real quadratic number (a + b*sqrt(d)) / c held in canonical form:
/// c > 0, d >= 1 squarefree, gcd(a, b, c) = 1, and d == 1 whenever b == 0.
/// Values with d == 1 are rational and mix freely with any other radicand.
class QuadIrr
{
public:
    QuadIrr() : a_(0), b_(0), c_(1), d_(1) {}
    QuadIrr(long v) : a_(v), b_(0), c_(1), d_(1) {}
    QuadIrr(const Integer &v) : a_(v), b_(0), c_(1), d_(1) {}
    QuadIrr(const Rational &q) : a_(q.get_num()), b_(0), c_(q.get_den()), d_(1) {}

    static QuadIrr make(Integer a, Integer b, Integer c, Integer d)
    {
        if (c == 0)
            throw Error(Errc::ZeroDenominator, "quadratic number with c = 0");
        if (d <= 0)
            throw Error(Errc::InvalidArgument, "radicand must be positive");
        // pull square factors out of the radicand
        Integer core = 1;
        Integer rest = d;
        for (Integer p = 2; p * p <= rest; ++p)
        {
            Integer p2 = p * p;
            while (rest % p2 == 0)
            {
                rest /= p2;
                b *= p;
            }
            if (rest % p == 0)
            {
                rest /= p;
                core *= p;
            }
        }
        core *= rest;
        QuadIrr x;
        x.a_ = std::move(a);
        x.b_ = std::move(b);
        x.c_ = std::move(c);
        x.d_ = std::move(core);
        if (x.d_ == 1)
        {
            x.a_ += x.b_;
            x.b_ = 0;
        }
        x.canonicalize();
        return x;
    }

    static QuadIrr sqrt_of(const Integer &d) { return make(0, 1, 1, d); }

    const Integer &a() const noexcept { return a_; }
    const Integer &b() const noexcept { return b_; }
    const Integer &c() const noexcept { return c_; }
    const Integer &d() const noexcept { return d_; }

    bool is_rational() const noexcept { return b_ == 0; }
    bool is_zero() const noexcept { return a_ == 0 && b_ == 0; }

    Rational to_rational() const
    {
        if (!is_rational())
            throw Error(Errc::NotRepresentable, "irrational value has no rational form");
        return make_rational(a_, c_);
    }

    /// Sign of the real number, decided with integer arithmetic only.
    int sign() const
    {
        int sa = sgn(a_);
        int sb = sgn(b_);
        if (sb == 0)
            return sa;
        if (sa == 0 || sa == sb)
            return sb;
        // a and b*sqrt(d) have opposite signs: compare a^2 with b^2 d
        Integer lhs = a_ * a_;
        Integer rhs = b_ * b_ * d_;
        return lhs > rhs ? sa : sb;
    }

    Integer floor() const
    {
        if (b_ == 0)
            return floor_div(a_, c_);
        // sqrt(b^2 d) lies strictly between s and s + 1 since d > 1 is squarefree
        Integer s = isqrt(b_ * b_ * d_);
        if (b_ > 0)
            return floor_div(a_ + s, c_);
        return floor_div(a_ - s - 1, c_);
    }

    Integer ceil() const
    {
        Integer f = floor();
        if (b_ == 0 && f * c_ == a_)
            return f;
        return f + 1;
    }

    QuadIrr conjugate() const { return with(a_, -b_, c_, d_); }

    /// x * conj(x), always rational.
    Rational norm() const { return make_rational(a_ * a_ - b_ * b_ * d_, c_ * c_); }

    QuadIrr abs() const { return sign() < 0 ? -*this : *this; }

    QuadIrr inverse() const
    {
        if (is_zero())
            throw Error(Errc::ZeroDenominator, "inverse of zero");
        Integer den = a_ * a_ - b_ * b_ * d_;
        return with(c_ * a_, -(c_ * b_), den, d_);
    }

    QuadIrr operator-() const { return with(-a_, -b_, c_, d_); }

    friend QuadIrr operator+(const QuadIrr &x, const QuadIrr &y)
    {
        Integer d = common_radicand(x, y);
        return with(x.a_ * y.c_ + y.a_ * x.c_, x.b_ * y.c_ + y.b_ * x.c_, x.c_ * y.c_, d);
    }
    friend QuadIrr operator-(const QuadIrr &x, const QuadIrr &y) { return x + (-y); }
    friend QuadIrr operator*(const QuadIrr &x, const QuadIrr &y)
    {
        Integer d = common_radicand(x, y);
        return with(x.a_ * y.a_ + x.b_ * y.b_ * d, x.a_ * y.b_ + x.b_ * y.a_, x.c_ * y.c_, d);
    }
    friend QuadIrr operator/(const QuadIrr &x, const QuadIrr &y) { return x * y.inverse(); }

    QuadIrr &operator+=(const QuadIrr &y) { return *this = *this + y; }
    QuadIrr &operator-=(const QuadIrr &y) { return *this = *this - y; }
    QuadIrr &operator*=(const QuadIrr &y) { return *this = *this * y; }
    QuadIrr &operator/=(const QuadIrr &y) { return *this = *this / y; }

    friend bool operator==(const QuadIrr &x, const QuadIrr &y)
    {
        return x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_ && x.d_ == y.d_;
    }
    friend std::strong_ordering operator<=>(const QuadIrr &x, const QuadIrr &y)
    {
        int s = (x - y).sign();
        return s < 0 ? std::strong_ordering::less
                     : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    std::string to_string() const
    {
        std::ostringstream os;
        os << *this;
        return os.str();
    }

    /// Round-trippable "quad:a:b:c:d" form.
    std::string to_spec() const
    {
        return "quad:" + a_.get_str() + ":" + b_.get_str() + ":" + c_.get_str() + ":" + d_.get_str();
    }

    friend std::ostream &operator<<(std::ostream &os, const QuadIrr &x)
    {
        if (x.b_ == 0)
        {
            os << x.a_;
            if (x.c_ != 1)
                os << "/" << x.c_;
            return os;
        }
        os << "(" << x.a_ << (x.b_ < 0 ? "-" : "+") << Integer(x.b_ < 0 ? -x.b_ : x.b_) << "*sqrt(" << x.d_ << "))";
        if (x.c_ != 1)
            os << "/" << x.c_;
        return os;
    }

private:
    static Integer common_radicand(const QuadIrr &x, const QuadIrr &y)
    {
        if (x.d_ == 1)
            return y.d_;
        if (y.d_ == 1 || x.d_ == y.d_)
            return x.d_;
        throw Error(Errc::NotRepresentable,
                    "mixed radicands sqrt(" + x.d_.get_str() + ") and sqrt(" + y.d_.get_str() + ")");
    }

    // d is already squarefree here
    static QuadIrr with(Integer a, Integer b, Integer c, Integer d)
    {
        if (c == 0)
            throw Error(Errc::ZeroDenominator, "quadratic number with c = 0");
        QuadIrr x;
        x.a_ = std::move(a);
        x.b_ = std::move(b);
        x.c_ = std::move(c);
        x.d_ = std::move(d);
        x.canonicalize();
        return x;
    }

    void canonicalize()
    {
        if (c_ < 0)
        {
            a_ = -a_;
            b_ = -b_;
            c_ = -c_;
        }
        if (b_ == 0)
            d_ = 1;
        Integer g = gcd(gcd(a_, b_), c_);
        if (g > 1)
        {
            a_ /= g;
            b_ /= g;
            c_ /= g;
        }
    }

    Integer a_, b_, c_, d_;
};

} // namespace qtj
