#pragma once

#include <ostream>
#include <string>

#include "qtj/numerics/quad_irr.hpp"

namespace qtj
{

/// Exact complex number re + i*im over a real field (Rational or QuadIrr).
template <class Field>
class ExactComplex
{
public:
    using field_type = Field;

    ExactComplex() : re_(0), im_(0) {}
    ExactComplex(long v) : re_(v), im_(0) {}
    ExactComplex(Field re, Field im = Field(0)) : re_(std::move(re)), im_(std::move(im)) {}

    static ExactComplex i() { return ExactComplex(Field(0), Field(1)); }

    const Field &re() const noexcept { return re_; }
    const Field &im() const noexcept { return im_; }

    bool is_zero() const { return re_ == Field(0) && im_ == Field(0); }

    ExactComplex conj() const { return ExactComplex(re_, -im_); }
    Field norm() const { return re_ * re_ + im_ * im_; }

    ExactComplex inverse() const
    {
        if (is_zero())
            throw Error(Errc::ZeroDenominator, "inverse of complex zero");
        Field n = norm();
        return ExactComplex(re_ / n, -im_ / n);
    }

    ExactComplex operator-() const { return ExactComplex(-re_, -im_); }

    friend ExactComplex operator+(const ExactComplex &x, const ExactComplex &y)
    {
        return ExactComplex(x.re_ + y.re_, x.im_ + y.im_);
    }
    friend ExactComplex operator-(const ExactComplex &x, const ExactComplex &y)
    {
        return ExactComplex(x.re_ - y.re_, x.im_ - y.im_);
    }
    friend ExactComplex operator*(const ExactComplex &x, const ExactComplex &y)
    {
        return ExactComplex(x.re_ * y.re_ - x.im_ * y.im_, x.re_ * y.im_ + x.im_ * y.re_);
    }
    friend ExactComplex operator/(const ExactComplex &x, const ExactComplex &y) { return x * y.inverse(); }

    friend ExactComplex operator*(const ExactComplex &x, long s) { return ExactComplex(x.re_ * Field(s), x.im_ * Field(s)); }
    friend ExactComplex operator*(long s, const ExactComplex &x) { return x * s; }
    friend ExactComplex operator/(const ExactComplex &x, long s) { return ExactComplex(x.re_ / Field(s), x.im_ / Field(s)); }

    ExactComplex &operator+=(const ExactComplex &y) { return *this = *this + y; }
    ExactComplex &operator-=(const ExactComplex &y) { return *this = *this - y; }
    ExactComplex &operator*=(const ExactComplex &y) { return *this = *this * y; }

    friend bool operator==(const ExactComplex &x, const ExactComplex &y) { return x.re_ == y.re_ && x.im_ == y.im_; }

    friend std::ostream &operator<<(std::ostream &os, const ExactComplex &z)
    {
        return os << "(" << z.re_ << ") + (" << z.im_ << ")i";
    }

private:
    Field re_;
    Field im_;
};

using GaussianRational = ExactComplex<Rational>;
using QuadComplex = ExactComplex<QuadIrr>;

template <class Field>
bool is_zero(const ExactComplex<Field> &z)
{
    return z.is_zero();
}
inline bool is_zero(const Rational &q) { return q == 0; }

/// z^e by binary exponentiation; negative exponents invert first.
template <class Field>
ExactComplex<Field> pow_int(const ExactComplex<Field> &z, long e)
{
    if (e < 0)
    {
        if (z.is_zero())
            throw Error(Errc::ZeroToNegativePower, "zero raised to a negative power");
        return pow_int(z.inverse(), -e);
    }
    ExactComplex<Field> result(1);
    ExactComplex<Field> base = z;
    unsigned long n = static_cast<unsigned long>(e);
    while (n)
    {
        if (n & 1UL)
            result *= base;
        n >>= 1;
        if (n)
            base *= base;
    }
    return result;
}

inline QuadComplex to_quad(const GaussianRational &z) { return QuadComplex(QuadIrr(z.re()), QuadIrr(z.im())); }

/// Radicand shared by both components (1 when both are rational).
inline Integer radicand(const QuadComplex &z)
{
    if (z.re().d() != 1)
        return z.re().d();
    return z.im().d();
}

inline bool is_gaussian(const QuadComplex &z) { return z.re().is_rational() && z.im().is_rational(); }

inline GaussianRational to_gaussian(const QuadComplex &z)
{
    return GaussianRational(z.re().to_rational(), z.im().to_rational());
}

} // namespace qtj
