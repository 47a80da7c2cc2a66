#pragma once

#include "qtj/numerics/big_float.hpp"
#include "qtj/numerics/exact_complex.hpp"

namespace qtj
{

inline BigFloat embed_exact(const Rational &x, Precision p)
{
    if (p < 64)
        throw Error(Errc::InvalidArgument, "precision below 64 bits");
    return BigFloat(x, p);
}

/// (a + b sqrt d)/c evaluated with 64 extra bits and rounded once to p, so the
/// relative error stays below 2^(1-p). When a and b*sqrt(d) have opposite signs
/// the value is formed as (a^2 - b^2 d) / (c (a - b sqrt d)) to avoid cancellation.
inline BigFloat embed_exact(const QuadIrr &x, Precision p)
{
    if (p < 64)
        throw Error(Errc::InvalidArgument, "precision below 64 bits");
    if (x.is_rational())
        return BigFloat(x.to_rational(), p);
    const Precision w = p + 64;
    auto exact = [](const Integer &v) {
        return BigFloat(v, std::max<Precision>(64, static_cast<Precision>(mpz_sizeinbase(v.get_mpz_t(), 2))));
    };
    const bool cancels = sgn(x.a()) * sgn(x.b()) < 0;
    BigFloat root(w);
    mpfr_sqrt(root.raw(), exact(x.b() * x.b() * x.d()).raw(), MPFR_RNDN);
    BigFloat q(w);
    if (!cancels)
    {
        if (x.b() < 0)
            root = -root;
        BigFloat num(w);
        mpfr_add(num.raw(), exact(x.a()).raw(), root.raw(), MPFR_RNDN);
        mpfr_div(q.raw(), num.raw(), exact(x.c()).raw(), MPFR_RNDN);
    }
    else
    {
        // a - b sqrt(d): both parts share a's sign
        if (x.b() < 0)
            root = -root;
        BigFloat den(w);
        mpfr_sub(den.raw(), exact(x.a()).raw(), root.raw(), MPFR_RNDN);
        BigFloat scaled(w);
        mpfr_mul(scaled.raw(), den.raw(), exact(x.c()).raw(), MPFR_RNDN);
        mpfr_div(q.raw(), exact(x.a() * x.a() - x.b() * x.b() * x.d()).raw(), scaled.raw(), MPFR_RNDN);
    }
    return q.rounded(p);
}

inline BigComplex embed_exact(const GaussianRational &z, Precision p)
{
    return BigComplex(embed_exact(z.re(), p), embed_exact(z.im(), p));
}

inline BigComplex embed_exact(const QuadComplex &z, Precision p)
{
    return BigComplex(embed_exact(z.re(), p), embed_exact(z.im(), p));
}

} // namespace qtj
