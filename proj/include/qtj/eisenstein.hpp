#pragma once

// Eisenstein partial sums G_k(mu)_F = sum over F minus the origin of
// (m mu + n)^(-2k), in exact or floating arithmetic, plus the box-limit
// extrapolation and the convergent-window sequences built on them.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qtj/extrapolate.hpp"
#include "qtj/foliation.hpp"
#include "qtj/lattice.hpp"
#include "qtj/schemes.hpp"

namespace qtj
{

enum class Mode
{
    Exact,
    Float
};

inline const char *mode_name(Mode m) { return m == Mode::Exact ? "exact" : "float"; }

struct PartialSum
{
    BigComplex value;                 // rounded to `precision`
    std::optional<QuadComplex> exact; // set in exact mode
    long k = 0;
    long scale = 1; // 60 for g2, 140 for g3
    Modulus mu;
    SetDescriptor descriptor;
    std::uint64_t term_count = 0;
    Mode mode = Mode::Float;
    Precision precision = 0;
};

struct EisTriple
{
    PartialSum g1, g2, g3;
};

inline constexpr long kG2Scale = 60;
inline constexpr long kG3Scale = 140;

namespace detail
{
inline void require_precision(Precision p)
{
    if (p < 64)
        throw Error(Errc::InvalidArgument, "precision must be at least 64 bits");
}

inline BigComplex embed(const QuadComplex &z, Precision p) { return {embed_exact(z.re(), p), embed_exact(z.im(), p)}; }

inline std::uint64_t nonzero_count(const PointSource &pts)
{
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        c += pts[i].is_origin() ? 0 : 1;
    return c;
}

/// Exact sums of omega^(-2k) for each k in ks, over the nonzero points.
template <class C>
std::vector<C> exact_sums(const C &mu, std::span<const long> ks, const PointSource &pts)
{
    std::vector<C> acc(ks.size(), C(0));
    for (std::size_t i = 0; i < pts.size(); ++i)
    {
        LatticePoint p = pts[i];
        if (p.is_origin())
            continue;
        C w = lattice_vector(mu, p);
        C inv2 = pow_int(w, -2);
        C w2 = w * w;
        for (std::size_t j = 0; j < ks.size(); ++j)
            acc[j] += ks[j] >= 0 ? pow_int(inv2, ks[j]) : pow_int(w2, -ks[j]);
    }
    return acc;
}

inline std::vector<QuadComplex> exact_sums(const Modulus &mu, std::span<const long> ks, const PointSource &pts)
{
    if (!mu.is_exact())
        throw Error(Errc::ExactModeUnavailable, "exact mode needs an exactly known modulus");
    if (mu.is_gaussian())
    {
        auto g = exact_sums(to_gaussian(mu.exact()), ks, pts);
        std::vector<QuadComplex> out;
        for (const auto &x : g)
            out.push_back(to_quad(x));
        return out;
    }
    return exact_sums(mu.exact(), ks, pts);
}

inline constexpr std::size_t kMaxWeights = 4;

/// Float sums of omega^(-2k) at working precision w (no final rounding).
inline std::vector<BigComplex> float_sums(const BigComplex &mu_w, std::span<const long> ks, const PointSource &pts,
                                          Precision w)
{
    if (ks.size() > kMaxWeights)
        throw Error(Errc::InvalidArgument, "at most four weights per pass");
    const std::size_t nk = ks.size();
    auto total = chunked_accumulate<kMaxWeights>(pts.size(), w, [&](std::size_t i, auto &acc) {
        LatticePoint p = pts[i];
        if (p.is_origin())
            return;
        BigComplex omega(w), sq(w);
        lattice_vector_into(omega, mu_w, p);
        multiply_into(sq, omega, omega);
        BigComplex inv2 = sq.inverse();
        for (std::size_t j = 0; j < nk; ++j)
        {
            long k = ks[j];
            if (k == 1)
                acc[j] += inv2;
            else if (k > 0)
                acc[j] += pow_int(inv2, k);
            else if (k < 0)
                acc[j] += pow_int(sq, -k);
            else
                acc[j] += BigComplex(1, 0, w);
        }
    });
    return {total.begin(), total.begin() + static_cast<std::ptrdiff_t>(nk)};
}

inline BigComplex float_mu(const Modulus &mu, Precision w)
{
    return mu.is_exact() ? embed(mu.exact(), w) : mu.floating().rounded(w);
}
} // namespace detail

/// k = 0 returns the number of points in d (origin counted when present).
inline PartialSum partial_G(const Modulus &mu, long k, const SetDescriptor &d, Precision p, Mode mode = Mode::Float)
{
    detail::require_precision(p);
    PointSource pts(d);
    PartialSum out{BigComplex(p), std::nullopt, k, 1, mu, d, 0, mode, p};
    if (mode == Mode::Exact && !mu.is_exact())
        throw Error(Errc::ExactModeUnavailable, "exact mode needs an exactly known modulus");
    if (k == 0)
    {
        out.term_count = pts.size();
        QuadComplex c(QuadIrr(Integer(static_cast<unsigned long>(pts.size()))));
        if (mode == Mode::Exact)
            out.exact = c;
        out.value = detail::embed(c, p);
        return out;
    }
    out.term_count = detail::nonzero_count(pts);
    const long ks[] = {k};
    if (mode == Mode::Exact)
    {
        out.exact = detail::exact_sums(mu, ks, pts)[0];
        out.value = detail::embed(*out.exact, p);
        return out;
    }
    const Precision w = working_precision(p, pts.size());
    out.value = detail::float_sums(detail::float_mu(mu, w), ks, pts, w)[0].rounded(p);
    return out;
}

/// (g1, g2, g3) = (G1, 60 G2, 140 G3) over one descriptor, sharing one pass.
inline EisTriple g_triple(const Modulus &mu, const SetDescriptor &d, Precision p, Mode mode = Mode::Float)
{
    detail::require_precision(p);
    PointSource pts(d);
    const std::uint64_t count = detail::nonzero_count(pts);
    const long ks[] = {1, 2, 3};
    const long scales[] = {1, kG2Scale, kG3Scale};
    std::array<PartialSum, 3> parts;
    if (mode == Mode::Exact)
    {
        auto sums = detail::exact_sums(mu, ks, pts);
        for (std::size_t j = 0; j < 3; ++j)
        {
            QuadComplex v = sums[j] * scales[j];
            parts[j] = PartialSum{detail::embed(v, p), v, ks[j], scales[j], mu, d, count, mode, p};
        }
    }
    else
    {
        const Precision w = working_precision(p, pts.size());
        auto sums = detail::float_sums(detail::float_mu(mu, w), ks, pts, w);
        for (std::size_t j = 0; j < 3; ++j)
            parts[j] = PartialSum{(sums[j] * scales[j]).rounded(p), std::nullopt, ks[j], scales[j], mu, d, count, mode, p};
    }
    return EisTriple{parts[0], parts[1], parts[2]};
}

struct AutomorphyResult
{
    BigComplex residual;
    std::optional<QuadComplex> exact;
    int det = 1;
    /// For det = -1 the factor (c mu + d)^(-2k) differs from A'(mu)^k by (-1)^k.
    int derivative_sign = 1;
};

/// (c mu + d)^(-2k) G_k(A mu)_F - G_k(mu)_{A^T F}; an identity at every finite stage.
inline AutomorphyResult automorphy_residual(const GL2Z &A, const Modulus &mu, long k, const SetDescriptor &d,
                                            Precision p, Mode mode = Mode::Float)
{
    detail::require_precision(p);
    const Modulus image = act_modulus(A, mu);
    PointSource left(d);
    PointSource right(transform_set(A.transpose(), d));
    const long ks[] = {k};
    AutomorphyResult out{BigComplex(p), std::nullopt, static_cast<int>(A.det()),
                         (A.det() < 0 && (k % 2 != 0)) ? -1 : 1};
    if (mode == Mode::Exact)
    {
        const QuadComplex &m = mu.exact();
        QuadComplex factor = pow_int(m * A.c() + QuadComplex(A.d()), -2 * k);
        QuadComplex r = factor * detail::exact_sums(image, ks, left)[0] - detail::exact_sums(mu, ks, right)[0];
        out.exact = r;
        out.residual = detail::embed(r, p);
        return out;
    }
    const Precision w = working_precision(p, std::max(left.size(), right.size())) + 32;
    BigComplex factor(w);
    if (mu.is_exact())
        factor = detail::embed(pow_int(mu.exact() * A.c() + QuadComplex(A.d()), -2 * k), w);
    else
        factor = pow_int(mu.floating().rounded(w) * A.c() + BigComplex(A.d(), 0, w), -2 * k);
    BigComplex lhs = factor * detail::float_sums(detail::float_mu(image, w), ks, left, w)[0];
    BigComplex rhs = detail::float_sums(detail::float_mu(mu, w), ks, right, w)[0];
    out.residual = (lhs - rhs).rounded(p);
    return out;
}

/// Smallest eigenvalue of the form |m mu + n|^2 in (m, n).
inline BigFloat lattice_form_min(const BigComplex &mu)
{
    const Precision p = mu.precision();
    BigFloat t = mu.norm() + BigFloat(1, p);
    BigFloat im2 = mu.im() * mu.im();
    BigFloat disc = (t * t - im2 * 4).sqrt();
    return im2 * 2 / (t + disc);
}

struct ClassicalEstimate
{
    long k = 0;
    BigComplex estimate;
    std::optional<BigFloat> error_bound; // absent for the shape-dependent k = 1 case
    std::optional<BigFloat> tail_bound;  // integral bound on the Box(N_max) tail
    int order = 0;
    bool shape_dependent = false;
    std::vector<std::int64_t> radii;
    std::vector<BigComplex> box_values;
};

/// Sum over |(m,n)|_inf > N of |m mu + n|^(-2k) is at most
/// (1 + 1/(N+1))^(2k) * 2 pi lambda^(-k) N^(2-2k) / (2k-2).
inline BigFloat box_tail_bound(const BigFloat &lambda, long k, std::int64_t n, Precision p)
{
    BigFloat pi(p);
    mpfr_const_pi(pi.raw(), MPFR_RNDU);
    BigFloat nn(static_cast<long>(n), p);
    BigFloat r(p), lk(p), grow(p);
    mpfr_pow_si(r.raw(), nn.raw(), 2 - 2 * k, MPFR_RNDU);
    mpfr_pow_si(lk.raw(), lambda.raw(), -k, MPFR_RNDU);
    BigFloat base = BigFloat(1, p) + BigFloat(1, p) / BigFloat(static_cast<long>(n + 1), p);
    mpfr_pow_si(grow.raw(), base.raw(), 2 * k, MPFR_RNDU);
    return grow * pi * 2 * lk * r / (2 * k - 2);
}

/// Box partial sums at N/2^order, ..., N/2, N and Richardson extrapolation in
/// h = 1/(N + 1/2) with exponents 2k-2, 2k, 2k+2, ... for each k in ks.
inline std::vector<ClassicalEstimate> classical_G_multi(const Modulus &mu, std::span<const long> ks, std::int64_t n_max,
                                                        Precision p, int order)
{
    detail::require_precision(p);
    if (order < 0)
        throw Error(Errc::InvalidArgument, "extrapolation order must be nonnegative");
    if (n_max < 1 || (n_max >> order) < 1)
        throw Error(Errc::InvalidArgument, "box radius too small for the requested extrapolation order");
    for (long k : ks)
        if (k < 1)
            throw Error(Errc::InvalidArgument, "classical limits need k >= 1");

    std::vector<std::int64_t> radii;
    for (int r = order; r >= 0; --r)
        radii.push_back(n_max >> r);
    const Precision w = working_precision(p, static_cast<std::size_t>(box_size(Box{n_max, false}))) + 16;
    const BigComplex mu_w = detail::float_mu(mu, w);

    std::vector<std::vector<BigComplex>> sums(ks.size());
    for (std::int64_t radius : radii)
    {
        PointSource pts(box(radius, false));
        auto s = detail::float_sums(mu_w, ks, pts, w);
        for (std::size_t j = 0; j < ks.size(); ++j)
            sums[j].push_back(s[j]);
    }

    std::vector<BigFloat> h;
    for (std::int64_t radius : radii)
        h.push_back(BigFloat(2, w) / BigFloat(2 * radius + 1, w));
    const BigFloat lambda = lattice_form_min(mu_w);

    std::vector<ClassicalEstimate> out;
    for (std::size_t j = 0; j < ks.size(); ++j)
    {
        const long k = ks[j];
        ClassicalEstimate e;
        e.k = k;
        e.order = order;
        e.radii = radii;
        for (const auto &v : sums[j])
            e.box_values.push_back(v.rounded(p));
        if (k == 1)
        {
            e.shape_dependent = true;
            e.order = 0;
            e.estimate = sums[j].back().rounded(p);
            out.push_back(std::move(e));
            continue;
        }
        e.tail_bound = box_tail_bound(lambda.rounded(p), k, n_max, p);
        // sum of |terms| is at most 7 lambda^(-k) for k >= 2
        BigFloat lk(p);
        mpfr_pow_si(lk.raw(), lambda.rounded(p).raw(), -k, MPFR_RNDU);
        lk = lk * 7;
        if (order == 0)
        {
            e.estimate = sums[j].back().rounded(p);
            e.error_bound = *e.tail_bound + lk * BigFloat::pow2(8 - p, p);
            out.push_back(std::move(e));
            continue;
        }
        auto extrapolate = [&](int r) {
            std::vector<long> ex;
            for (int i = 0; i < r; ++i)
                ex.push_back(2 * k - 2 + 2 * i);
            std::span<const BigFloat> hs(h.end() - (r + 1), h.end());
            std::span<const BigComplex> vs(sums[j].end() - (r + 1), sums[j].end());
            auto wts = richardson_weights(hs, ex, w);
            BigFloat amp(0, w);
            for (const auto &x : wts)
                amp += x.abs();
            return std::make_pair(apply_weights(wts, vs, w), amp);
        };
        auto [best, amp] = extrapolate(order);
        auto [coarse, amp_coarse] = extrapolate(order - 1);
        (void)amp_coarse;
        e.estimate = best.rounded(p);
        BigFloat rounding = (best.abs() + lk * amp) * BigFloat::pow2(8 - p, w);
        e.error_bound = ((best - coarse).abs() + rounding).rounded(p);
        out.push_back(std::move(e));
    }
    return out;
}

inline ClassicalEstimate classical_G(const Modulus &mu, long k, std::int64_t n_max, Precision p, int order = 2)
{
    const long ks[] = {k};
    return classical_G_multi(mu, ks, n_max, p, order)[0];
}

/// G_k over the convergent windows of theta at each stage.
inline std::vector<PartialSum> quantum_g_sequence(const Modulus &mu, const QuadIrr &theta, long k,
                                                  std::span<const std::size_t> stages, std::size_t window, Precision p,
                                                  Mode mode = Mode::Float)
{
    if (theta.is_rational())
        throw Error(Errc::InvalidArgument, "quantum windows need irrational theta");
    if (k < 1)
        throw Error(Errc::InvalidArgument, "quantum sequences need k >= 1");
    std::vector<PartialSum> out;
    for (std::size_t s : stages)
        out.push_back(partial_G(mu, k, quantum_window(theta, s, window), p, mode));
    return out;
}

} // namespace qtj
