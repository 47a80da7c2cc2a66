#pragma once

// Generalized Richardson extrapolation: given samples E(h_i) of a model
// E(h) = E0 + sum_r c_r h^{e_r}, recover E0 as a fixed linear combination.

#include <span>
#include <vector>

#include "qtj/numerics.hpp"

namespace qtj
{

/// Weights w with E0 = sum_i w_i E(h_i). Needs one more sample than exponents.
inline std::vector<BigFloat> richardson_weights(std::span<const BigFloat> h, std::span<const long> exponents, Precision p)
{
    const std::size_t n = h.size();
    if (n != exponents.size() + 1)
        throw Error(Errc::InvalidArgument, "richardson: need exactly one more sample than correction terms");
    // Solve M^T w = e_0 where M[i] = (1, h_i^{e_1}, ..., h_i^{e_r}).
    std::vector<std::vector<BigFloat>> a(n, std::vector<BigFloat>(n + 1, BigFloat(p)));
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t r = 0; r < n; ++r)
        {
            BigFloat v(1, p);
            if (r > 0)
                mpfr_pow_si(v.raw(), BigFloat(h[i], p).raw(), exponents[r - 1], MPFR_RNDN);
            a[r][i] = v;
        }
    }
    for (std::size_t r = 0; r < n; ++r)
        a[r][n] = BigFloat(r == 0 ? 1 : 0, p);

    for (std::size_t col = 0; col < n; ++col)
    {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (a[r][col].abs() > a[piv][col].abs())
                piv = r;
        if (a[piv][col].is_zero())
            throw Error(Errc::InvalidArgument, "richardson: singular sample layout");
        std::swap(a[col], a[piv]);
        for (std::size_t r = 0; r < n; ++r)
        {
            if (r == col || a[r][col].is_zero())
                continue;
            BigFloat f = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= n; ++c)
                a[r][c] -= f * a[col][c];
        }
    }
    std::vector<BigFloat> w;
    for (std::size_t i = 0; i < n; ++i)
        w.push_back(a[i][n] / a[i][i]);
    return w;
}

inline BigComplex apply_weights(std::span<const BigFloat> w, std::span<const BigComplex> values, Precision p)
{
    BigComplex out(p);
    for (std::size_t i = 0; i < w.size(); ++i)
        out += values[i].rounded(p) * w[i];
    return out;
}

} // namespace qtj
