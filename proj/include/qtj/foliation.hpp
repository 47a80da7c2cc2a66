#pragma once

// Moduli data: mu in the upper or lower half plane, slopes theta on the
// projective line, and the GL(2,Z) action (mu, theta) -> (A mu, A^{-T} theta).

#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>

#include "qtj/gl2z.hpp"
#include "qtj/numerics.hpp"

namespace qtj
{

struct Infinity
{
    friend bool operator==(Infinity, Infinity) { return true; }
};

using Slope = std::variant<QuadIrr, Infinity>;

inline bool is_infinite(const Slope &s) { return std::holds_alternative<Infinity>(s); }

inline std::string slope_to_string(const Slope &s)
{
    if (is_infinite(s))
        return "inf";
    return std::get<QuadIrr>(s).to_string();
}

class Modulus
{
public:
    Modulus() : Modulus(QuadComplex::i()) {}

    Modulus(QuadComplex mu) : mu_(std::move(mu))
    {
        sign_ = std::get<QuadComplex>(mu_).im().sign();
        if (sign_ == 0)
            throw Error(Errc::InvalidArgument, "modulus must have nonzero imaginary part");
    }
    Modulus(const GaussianRational &mu) : Modulus(to_quad(mu)) {}
    Modulus(BigComplex mu) : mu_(std::move(mu))
    {
        sign_ = std::get<BigComplex>(mu_).im().sign();
        if (sign_ == 0)
            throw Error(Errc::InvalidArgument, "modulus must have nonzero imaginary part");
    }

    bool is_exact() const { return std::holds_alternative<QuadComplex>(mu_); }
    bool is_gaussian() const { return is_exact() && qtj::is_gaussian(exact()); }
    int half_plane_sign() const { return sign_; }

    const QuadComplex &exact() const
    {
        if (!is_exact())
            throw Error(Errc::ExactModeUnavailable, "modulus is only known as a float");
        return std::get<QuadComplex>(mu_);
    }
    const BigComplex &floating() const { return std::get<BigComplex>(mu_); }

    /// mu rounded to p bits (exact values are correctly rounded per component).
    BigComplex to_float(Precision p) const
    {
        if (is_exact())
            return BigComplex(embed_exact(exact().re(), p), embed_exact(exact().im(), p));
        return floating().rounded(p);
    }

    Modulus negated() const
    {
        if (is_exact())
            return Modulus(-exact());
        return Modulus(-floating());
    }

    friend bool operator==(const Modulus &x, const Modulus &y)
    {
        if (x.is_exact() != y.is_exact())
            return false;
        if (x.is_exact())
            return x.exact() == y.exact();
        return identical(x.floating(), y.floating());
    }

    std::string to_string() const
    {
        std::ostringstream os;
        if (is_exact())
            os << exact();
        else
            os << floating();
        return os.str();
    }

private:
    std::variant<QuadComplex, BigComplex> mu_;
    int sign_ = 1;
};

struct FoliationPoint
{
    Modulus modulus;
    Slope theta;

    friend bool operator==(const FoliationPoint &, const FoliationPoint &) = default;
};

/// 1 + theta*mu, or mu when theta = inf. Mixed radicands between theta and
/// mu have no exact form and raise NotRepresentable.
inline QuadComplex slope_direction(const FoliationPoint &p)
{
    const QuadComplex &mu = p.modulus.exact();
    if (is_infinite(p.theta))
        return mu;
    const QuadIrr &t = std::get<QuadIrr>(p.theta);
    return QuadComplex(QuadIrr(1) + t * mu.re(), t * mu.im());
}

inline BigComplex slope_direction_float(const FoliationPoint &p, Precision prec)
{
    BigComplex mu = p.modulus.to_float(prec);
    if (is_infinite(p.theta))
        return mu;
    BigFloat t = embed_exact(std::get<QuadIrr>(p.theta), prec);
    return BigComplex(BigFloat(1, prec) + t * mu.re(), t * mu.im());
}

/// Moebius image of mu.
inline Modulus act_modulus(const GL2Z &A, const Modulus &m)
{
    if (m.is_exact())
    {
        const QuadComplex &mu = m.exact();
        QuadComplex num = mu * A.a() + QuadComplex(A.b());
        QuadComplex den = mu * A.c() + QuadComplex(A.d());
        return Modulus(num / den);
    }
    const BigComplex &mu = m.floating();
    const Precision p = mu.precision();
    BigComplex num = mu * A.a() + BigComplex(A.b(), 0, p);
    BigComplex den = mu * A.c() + BigComplex(A.d(), 0, p);
    return Modulus(num / den);
}

/// Projective Moebius action of [[a,b],[c,d]] on a slope.
inline Slope moebius_projective(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d, const Slope &s)
{
    if (is_infinite(s))
    {
        if (c == 0)
            return Infinity{};
        return QuadIrr(make_rational(a, c));
    }
    const QuadIrr &t = std::get<QuadIrr>(s);
    QuadIrr den = QuadIrr(c) * t + QuadIrr(d);
    if (den.is_zero())
        return Infinity{};
    return (QuadIrr(a) * t + QuadIrr(b)) / den;
}

/// theta -> A^{-T} theta = (d theta - c) / (-b theta + a).
inline Slope act_slope(const GL2Z &A, const Slope &s) { return moebius_projective(A.d(), -A.c(), -A.b(), A.a(), s); }

inline FoliationPoint act(const GL2Z &A, const FoliationPoint &p)
{
    return FoliationPoint{act_modulus(A, p.modulus), act_slope(A, p.theta)};
}

/// Representative with Im mu > 0 under (mu, theta) ~ (-mu, -theta).
inline FoliationPoint canonicalize_sign(const FoliationPoint &p)
{
    if (p.modulus.half_plane_sign() > 0)
        return p;
    Slope t = p.theta;
    if (!is_infinite(t))
        t = -std::get<QuadIrr>(t);
    return FoliationPoint{p.modulus.negated(), t};
}

struct Reduction
{
    Modulus modulus;
    GL2Z matrix; // modulus = matrix applied to the input
};

namespace detail
{
inline Reduction reduce_exact(const QuadComplex &mu0, int sign)
{
    GL2Z M;
    QuadComplex mu = mu0;
    if (sign < 0)
    {
        M = GL2Z::negation();
        mu = -mu;
    }
    const QuadIrr half(make_rational(1, 2));
    for (;;)
    {
        Integer k = (mu.re() - half).ceil();
        if (k != 0)
        {
            if (!k.fits_slong_p())
                throw Error(Errc::NotRepresentable, "translation out of range");
            mu = mu - QuadComplex(QuadIrr(k));
            M = GL2Z::translation(-k.get_si()) * M;
        }
        QuadIrr n = mu.norm();
        int c = (n - QuadIrr(1)).sign();
        if (c < 0 || (c == 0 && mu.re().sign() < 0))
        {
            mu = -mu.inverse();
            M = GL2Z::inversion() * M;
            continue;
        }
        return Reduction{Modulus(mu), M};
    }
}

inline Reduction reduce_float(const BigComplex &mu0, int sign)
{
    const Precision p = mu0.precision();
    const BigFloat eps = BigFloat::pow2(-(p / 2), p);
    const BigFloat half = BigFloat::pow2(-1, p);
    const BigFloat one(1, p);
    auto near = [&](const BigFloat &x, const BigFloat &y) { return (x - y).abs() < eps; };
    GL2Z M;
    BigComplex mu = mu0;
    if (sign < 0)
    {
        M = GL2Z::negation();
        mu = -mu;
    }
    for (int guard = 0; guard < 100000; ++guard)
    {
        BigFloat shifted = mu.re() - half;
        BigFloat k(p);
        mpfr_ceil(k.raw(), shifted.raw());
        if (near(mu.re(), half) || near(mu.re(), -half))
            throw Error(Errc::PrecisionExhausted, "modulus is within 2^(-P/2) of the line Re = 1/2");
        if (!k.is_zero())
        {
            long kk = mpfr_get_si(k.raw(), MPFR_RNDN);
            mu = mu - BigComplex(k, BigFloat(0, p));
            M = GL2Z::translation(-kk) * M;
        }
        BigFloat n = mu.norm();
        if (near(n, one))
            throw Error(Errc::PrecisionExhausted, "modulus is within 2^(-P/2) of the unit circle");
        if (n < one)
        {
            mu = -mu.inverse();
            M = GL2Z::inversion() * M;
            continue;
        }
        return Reduction{Modulus(mu), M};
    }
    throw Error(Errc::PrecisionExhausted, "reduction did not terminate");
}
} // namespace detail

/// Representative in |Re| <= 1/2, |mu| >= 1, Im > 0; ties go to Re = +1/2 and
/// to Re >= 0 on the unit arc.
inline Reduction reduce_modulus(const Modulus &m)
{
    if (m.is_exact())
        return detail::reduce_exact(m.exact(), m.half_plane_sign());
    return detail::reduce_float(m.floating(), m.half_plane_sign());
}

} // namespace qtj
