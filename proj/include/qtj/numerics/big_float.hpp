#pragma once

#include <cstring>
#include <ostream>
#include <string>
#include <utility>

#include <gmpxx.h>
#include <mpfr.h>

#include "qtj/error.hpp"

namespace qtj
{

using Precision = mpfr_prec_t;

/// Owning MPFR value. Every operation rounds to nearest at the precision of
/// the destination, so equal-precision inputs give bit-identical outputs.
class BigFloat
{
public:
    explicit BigFloat(Precision p = 64)
    {
        mpfr_init2(v_, p);
        mpfr_set_zero(v_, 1);
    }
    BigFloat(long x, Precision p)
    {
        mpfr_init2(v_, p);
        mpfr_set_si(v_, x, MPFR_RNDN);
    }
    BigFloat(const mpz_class &x, Precision p)
    {
        mpfr_init2(v_, p);
        mpfr_set_z(v_, x.get_mpz_t(), MPFR_RNDN);
    }
    BigFloat(const mpq_class &x, Precision p)
    {
        mpfr_init2(v_, p);
        mpfr_set_q(v_, x.get_mpq_t(), MPFR_RNDN);
    }
    BigFloat(const BigFloat &x, Precision p)
    {
        mpfr_init2(v_, p);
        mpfr_set(v_, x.v_, MPFR_RNDN);
    }
    static BigFloat from_string(const std::string &text, Precision p)
    {
        BigFloat r(p);
        if (mpfr_set_str(r.v_, text.c_str(), 10, MPFR_RNDN) != 0)
            throw Error(Errc::Parse, "not a decimal number: '" + text + "'");
        return r;
    }
    static BigFloat pow2(long e, Precision p)
    {
        BigFloat r(1, p);
        mpfr_mul_2si(r.v_, r.v_, e, MPFR_RNDN);
        return r;
    }

    BigFloat(const BigFloat &x)
    {
        mpfr_init2(v_, mpfr_get_prec(x.v_));
        mpfr_set(v_, x.v_, MPFR_RNDN);
    }
    BigFloat(BigFloat &&x) noexcept
    {
        mpfr_init2(v_, mpfr_get_prec(x.v_));
        mpfr_swap(v_, x.v_);
    }
    BigFloat &operator=(const BigFloat &x)
    {
        if (this != &x)
        {
            mpfr_set_prec(v_, mpfr_get_prec(x.v_));
            mpfr_set(v_, x.v_, MPFR_RNDN);
        }
        return *this;
    }
    BigFloat &operator=(BigFloat &&x) noexcept
    {
        mpfr_swap(v_, x.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    Precision precision() const { return mpfr_get_prec(v_); }
    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    /// Binary exponent e with |x| in [2^(e-1), 2^e); very negative for zero.
    long exponent() const { return is_zero() ? -(1L << 40) : static_cast<long>(mpfr_get_exp(v_)); }

    BigFloat rounded(Precision p) const { return BigFloat(*this, p); }

    /// Exact binary value as a rational (finite values only).
    mpq_class to_rational() const
    {
        if (is_zero())
            return 0;
        mpz_class m;
        mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), v_);
        mpq_class q(m);
        if (e >= 0)
            mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
        else
            mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
        return q;
    }

    BigFloat operator-() const
    {
        BigFloat r(precision());
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }
    BigFloat abs() const
    {
        BigFloat r(precision());
        mpfr_abs(r.v_, v_, MPFR_RNDN);
        return r;
    }
    BigFloat sqrt() const
    {
        BigFloat r(precision());
        mpfr_sqrt(r.v_, v_, MPFR_RNDN);
        return r;
    }
    BigFloat log() const
    {
        BigFloat r(precision());
        mpfr_log(r.v_, v_, MPFR_RNDN);
        return r;
    }

#define QTJ_BIGFLOAT_BINOP(op, fn)                                                      \
    friend BigFloat operator op(const BigFloat &x, const BigFloat &y)                   \
    {                                                                                   \
        BigFloat r(std::max(x.precision(), y.precision()));                            \
        fn(r.v_, x.v_, y.v_, MPFR_RNDN);                                                \
        return r;                                                                       \
    }                                                                                   \
    BigFloat &operator op##=(const BigFloat &y)                                         \
    {                                                                                   \
        fn(v_, v_, y.v_, MPFR_RNDN);                                                    \
        return *this;                                                                   \
    }
    QTJ_BIGFLOAT_BINOP(+, mpfr_add)
    QTJ_BIGFLOAT_BINOP(-, mpfr_sub)
    QTJ_BIGFLOAT_BINOP(*, mpfr_mul)
    QTJ_BIGFLOAT_BINOP(/, mpfr_div)
#undef QTJ_BIGFLOAT_BINOP

    friend BigFloat operator*(const BigFloat &x, long s)
    {
        BigFloat r(x.precision());
        mpfr_mul_si(r.v_, x.v_, s, MPFR_RNDN);
        return r;
    }
    friend BigFloat operator/(const BigFloat &x, long s)
    {
        BigFloat r(x.precision());
        mpfr_div_si(r.v_, x.v_, s, MPFR_RNDN);
        return r;
    }

    friend bool operator<(const BigFloat &x, const BigFloat &y) { return mpfr_less_p(x.v_, y.v_) != 0; }
    friend bool operator>(const BigFloat &x, const BigFloat &y) { return mpfr_greater_p(x.v_, y.v_) != 0; }
    friend bool operator<=(const BigFloat &x, const BigFloat &y) { return mpfr_lessequal_p(x.v_, y.v_) != 0; }
    friend bool operator>=(const BigFloat &x, const BigFloat &y) { return mpfr_greaterequal_p(x.v_, y.v_) != 0; }
    friend bool operator==(const BigFloat &x, const BigFloat &y) { return mpfr_equal_p(x.v_, y.v_) != 0; }

    /// Same precision, same sign bit, same value: the representation is identical.
    friend bool identical(const BigFloat &x, const BigFloat &y)
    {
        if (x.precision() != y.precision())
            return false;
        if (mpfr_nan_p(x.v_) || mpfr_nan_p(y.v_))
            return mpfr_nan_p(x.v_) && mpfr_nan_p(y.v_);
        return mpfr_signbit(x.v_) == mpfr_signbit(y.v_) && mpfr_equal_p(x.v_, y.v_);
    }

    /// Scientific decimal text with `digits` significant digits (0 = enough
    /// digits to round-trip the binary value).
    std::string to_string(std::size_t digits = 0) const
    {
        if (mpfr_zero_p(v_))
            return mpfr_signbit(v_) ? "-0" : "0";
        if (mpfr_nan_p(v_))
            return "nan";
        if (mpfr_inf_p(v_))
            return mpfr_sgn(v_) < 0 ? "-inf" : "inf";
        if (digits == 0)
            digits = decimal_digits(precision());
        mpfr_exp_t exp10 = 0;
        char *s = mpfr_get_str(nullptr, &exp10, 10, digits, v_, MPFR_RNDN);
        std::string mant(s);
        mpfr_free_str(s);
        std::string out;
        std::size_t pos = 0;
        if (mant[0] == '-')
        {
            out += '-';
            pos = 1;
        }
        out += mant[pos];
        if (mant.size() > pos + 1)
        {
            out += '.';
            out += mant.substr(pos + 1);
        }
        long e = static_cast<long>(exp10) - 1;
        out += (e < 0 ? "e-" : "e+");
        std::string es = std::to_string(e < 0 ? -e : e);
        if (es.size() < 2)
            es.insert(0, "0");
        out += es;
        return out;
    }

    /// Decimal digits needed to round-trip p bits.
    static std::size_t decimal_digits(Precision p) { return static_cast<std::size_t>(mpfr_get_str_ndigits(10, p)); }

    friend std::ostream &operator<<(std::ostream &os, const BigFloat &x) { return os << x.to_string(); }

private:
    mpfr_t v_;
};

/// Complex pair of BigFloats sharing one precision.
class BigComplex
{
public:
    explicit BigComplex(Precision p = 64) : re_(p), im_(p) {}
    BigComplex(BigFloat re, BigFloat im) : re_(std::move(re)), im_(std::move(im))
    {
        if (re_.precision() != im_.precision())
            im_ = im_.rounded(re_.precision());
    }
    BigComplex(long re, long im, Precision p) : re_(re, p), im_(im, p) {}

    Precision precision() const { return re_.precision(); }
    const BigFloat &re() const noexcept { return re_; }
    const BigFloat &im() const noexcept { return im_; }
    BigFloat &re() noexcept { return re_; }
    BigFloat &im() noexcept { return im_; }

    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }

    BigComplex rounded(Precision p) const { return BigComplex(re_.rounded(p), im_.rounded(p)); }

    BigComplex conj() const { return BigComplex(re_, -im_); }
    BigComplex operator-() const { return BigComplex(-re_, -im_); }

    /// |z|^2 with a single rounding.
    BigFloat norm() const
    {
        BigFloat r(precision());
        mpfr_fmma(r.raw(), re_.raw(), re_.raw(), im_.raw(), im_.raw(), MPFR_RNDN);
        return r;
    }
    BigFloat abs() const
    {
        BigFloat r(precision());
        mpfr_hypot(r.raw(), re_.raw(), im_.raw(), MPFR_RNDN);
        return r;
    }

    BigComplex inverse() const
    {
        if (is_zero())
            throw Error(Errc::ZeroDenominator, "inverse of complex zero");
        BigFloat n = norm();
        BigComplex r(precision());
        mpfr_div(r.re_.raw(), re_.raw(), n.raw(), MPFR_RNDN);
        mpfr_div(r.im_.raw(), im_.raw(), n.raw(), MPFR_RNDN);
        mpfr_neg(r.im_.raw(), r.im_.raw(), MPFR_RNDN);
        return r;
    }

    BigComplex &operator+=(const BigComplex &y)
    {
        mpfr_add(re_.raw(), re_.raw(), y.re_.raw(), MPFR_RNDN);
        mpfr_add(im_.raw(), im_.raw(), y.im_.raw(), MPFR_RNDN);
        return *this;
    }
    BigComplex &operator-=(const BigComplex &y)
    {
        mpfr_sub(re_.raw(), re_.raw(), y.re_.raw(), MPFR_RNDN);
        mpfr_sub(im_.raw(), im_.raw(), y.im_.raw(), MPFR_RNDN);
        return *this;
    }

    friend BigComplex operator+(BigComplex x, const BigComplex &y) { return x += y; }
    friend BigComplex operator-(BigComplex x, const BigComplex &y) { return x -= y; }

    /// Each component of the product is rounded once (fused ab +/- cd).
    friend void multiply_into(BigComplex &out, const BigComplex &x, const BigComplex &y)
    {
        mpfr_fmms(out.re_.raw(), x.re_.raw(), y.re_.raw(), x.im_.raw(), y.im_.raw(), MPFR_RNDN);
        mpfr_fmma(out.im_.raw(), x.re_.raw(), y.im_.raw(), x.im_.raw(), y.re_.raw(), MPFR_RNDN);
    }
    friend BigComplex operator*(const BigComplex &x, const BigComplex &y)
    {
        BigComplex r(std::max(x.precision(), y.precision()));
        multiply_into(r, x, y);
        return r;
    }
    BigComplex &operator*=(const BigComplex &y)
    {
        BigComplex r(precision());
        multiply_into(r, *this, y);
        return *this = std::move(r);
    }
    friend BigComplex operator/(const BigComplex &x, const BigComplex &y) { return x * y.inverse(); }

    friend BigComplex operator*(const BigComplex &x, long s) { return BigComplex(x.re_ * s, x.im_ * s); }
    friend BigComplex operator*(long s, const BigComplex &x) { return x * s; }
    friend BigComplex operator/(const BigComplex &x, long s) { return BigComplex(x.re_ / s, x.im_ / s); }
    friend BigComplex operator*(const BigComplex &x, const BigFloat &s) { return BigComplex(x.re_ * s, x.im_ * s); }

    friend bool operator==(const BigComplex &x, const BigComplex &y) { return x.re_ == y.re_ && x.im_ == y.im_; }
    friend bool identical(const BigComplex &x, const BigComplex &y)
    {
        return identical(x.re_, y.re_) && identical(x.im_, y.im_);
    }

    friend std::ostream &operator<<(std::ostream &os, const BigComplex &z)
    {
        return os << z.re_ << (z.im_.sign() < 0 ? " - " : " + ") << z.im_.abs() << "i";
    }

private:
    BigFloat re_;
    BigFloat im_;
};

inline bool is_zero(const BigComplex &z) { return z.is_zero(); }

/// z^e by binary exponentiation; e < 0 inverts the positive power.
inline BigComplex pow_int(const BigComplex &z, long e)
{
    if (e < 0)
    {
        if (z.is_zero())
            throw Error(Errc::ZeroToNegativePower, "zero raised to a negative power");
        return pow_int(z, -e).inverse();
    }
    BigComplex result(1, 0, z.precision());
    BigComplex base = z;
    BigComplex scratch(z.precision());
    unsigned long n = static_cast<unsigned long>(e);
    bool first = true;
    while (n)
    {
        if (n & 1UL)
        {
            if (first)
            {
                result = base;
                first = false;
            }
            else
            {
                multiply_into(scratch, result, base);
                std::swap(result, scratch);
            }
        }
        n >>= 1;
        if (n)
        {
            multiply_into(scratch, base, base);
            std::swap(base, scratch);
        }
    }
    return result;
}

/// Upper bound, in ulps, on the relative error growth of pow_int.
inline long pow_int_ulp_bound(long e) { return 2 * (e < 0 ? -e : e) + 2; }

} // namespace qtj
