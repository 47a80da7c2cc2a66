#pragma once

// The Weierstrass function summed over a finite set with no convergence
// correction terms, its derivative, and the polynomial
// E(X, Y) = Y^2 - 4X^3 + 12 g1 X^2 - (12 g1^2 - g2) X + (4 g1^3 - g1 g2 + g3)
// it nearly satisfies.

#include <atomic>
#include <cmath>
#include <optional>
#include <variant>
#include <vector>

#include "qtj/eisenstein.hpp"

namespace qtj
{

/// A point of the complex plane, exact or floating.
class CPoint
{
public:
    CPoint() : v_(QuadComplex(0)) {}
    CPoint(QuadComplex z) : v_(std::move(z)) {}
    CPoint(const GaussianRational &z) : v_(to_quad(z)) {}
    CPoint(BigComplex z) : v_(std::move(z)) {}

    bool is_exact() const { return std::holds_alternative<QuadComplex>(v_); }
    const QuadComplex &exact() const
    {
        if (!is_exact())
            throw Error(Errc::ExactModeUnavailable, "point is only known as a float");
        return std::get<QuadComplex>(v_);
    }
    const BigComplex &floating() const { return std::get<BigComplex>(v_); }
    BigComplex to_float(Precision p) const { return is_exact() ? detail::embed(exact(), p) : floating().rounded(p); }

private:
    std::variant<QuadComplex, BigComplex> v_;
};

/// z = t (1 + theta mu), a point on the line of slope theta through 0.
inline CPoint slope_point(const Modulus &mu, const QuadIrr &theta, const QuadIrr &t)
{
    FoliationPoint fp{mu, theta};
    if (mu.is_exact())
        return CPoint(slope_direction(fp) * QuadComplex(t));
    const Precision p = mu.floating().precision();
    return CPoint(slope_direction_float(fp, p) * embed_exact(t, p));
}

/// A sum value, or the marker that z hit a point of the set.
struct WpValue
{
    bool pole = false;
    BigComplex value;
    std::optional<QuadComplex> exact;
};

struct WeierstrassEval
{
    CPoint z;
    WpValue wp;
    WpValue wp_prime;
    SetDescriptor descriptor;
    Modulus mu;
    std::uint64_t term_count = 0;
    Mode mode = Mode::Float;
    Precision precision = 0;
};

namespace detail
{
inline bool is_lattice_hit(const QuadComplex &z, const QuadComplex &mu, const PointSource &pts)
{
    try
    {
        QuadIrr m = z.im() / mu.im();
        if (!m.is_rational() || m.to_rational().get_den() != 1)
            return false;
        QuadIrr n = z.re() - m * mu.re();
        if (!n.is_rational() || n.to_rational().get_den() != 1)
            return false;
        Integer mi = m.to_rational().get_num(), ni = n.to_rational().get_num();
        if (!mi.fits_slong_p() || !ni.fits_slong_p())
            return false;
        return pts.contains({mi.get_si(), ni.get_si()});
    }
    catch (const Error &e)
    {
        if (e.code() == Errc::NotRepresentable)
            return false;
        throw;
    }
}

template <class C>
std::pair<C, C> exact_wp(const C &z, const C &mu, const PointSource &pts)
{
    C s2(0), s3(0);
    for (std::size_t i = 0; i < pts.size(); ++i)
    {
        C inv = (z - lattice_vector(mu, pts[i])).inverse();
        C inv2 = inv * inv;
        s2 += inv2;
        s3 += inv2 * inv;
    }
    return {s2, s3 * -2};
}

/// Sums of (z - omega)^-2 and -2 (z - omega)^-3 at working precision w.
/// Returns nullopt when some z - omega is exactly zero.
inline std::optional<std::pair<BigComplex, BigComplex>> float_wp(const BigComplex &z_w, const BigComplex &mu_w,
                                                                 const PointSource &pts, Precision w)
{
    std::atomic<bool> hit{false};
    auto total = chunked_accumulate<2>(pts.size(), w, [&](std::size_t i, auto &acc) {
        BigComplex omega(w), diff(w), inv2(w), inv3(w);
        lattice_vector_into(omega, mu_w, pts[i]);
        diff = z_w - omega;
        if (diff.is_zero())
        {
            hit = true;
            return;
        }
        BigComplex inv = diff.inverse();
        multiply_into(inv2, inv, inv);
        multiply_into(inv3, inv2, inv);
        acc[0] += inv2;
        acc[1] += inv3;
    });
    if (hit)
        return std::nullopt;
    return std::make_pair(total[0], total[1] * -2);
}

struct WpRaw
{
    bool pole = false;
    std::optional<QuadComplex> x, y; // exact values
    BigComplex xf, yf;               // values at the working precision
    std::uint64_t count = 0;
};

inline WpRaw wp_raw(const CPoint &z, const Modulus &mu, const SetDescriptor &d, Precision p, Mode mode)
{
    PointSource pts(d);
    WpRaw out;
    out.count = pts.size();
    const Precision w = working_precision(p, pts.size()) + 16;
    if (z.is_exact() && mu.is_exact() && is_lattice_hit(z.exact(), mu.exact(), pts))
    {
        out.pole = true;
        return out;
    }
    if (mode == Mode::Exact)
    {
        const QuadComplex &ze = z.exact();
        const QuadComplex &me = mu.exact();
        if (is_gaussian(ze) && is_gaussian(me))
        {
            auto [a, b] = exact_wp(to_gaussian(ze), to_gaussian(me), pts);
            out.x = to_quad(a);
            out.y = to_quad(b);
        }
        else
        {
            auto [a, b] = exact_wp(ze, me, pts);
            out.x = a;
            out.y = b;
        }
        out.xf = embed(*out.x, w);
        out.yf = embed(*out.y, w);
        return out;
    }
    auto r = float_wp(z.to_float(w), float_mu(mu, w), pts, w);
    if (!r)
    {
        out.pole = true;
        return out;
    }
    out.xf = r->first;
    out.yf = r->second;
    return out;
}

inline WpValue finish(bool pole, const std::optional<QuadComplex> &exact, const BigComplex &v, Precision p)
{
    if (pole)
        return WpValue{true, BigComplex(p), std::nullopt};
    return WpValue{false, exact ? embed(*exact, p) : v.rounded(p), exact};
}
} // namespace detail

/// Both sums in one pass: sum (z - omega)^-2 and -2 sum (z - omega)^-3, origin included when in d.
inline WeierstrassEval weierstrass_eval(const CPoint &z, const Modulus &mu, const SetDescriptor &d, Precision p,
                                        Mode mode = Mode::Float)
{
    detail::require_precision(p);
    detail::WpRaw r = detail::wp_raw(z, mu, d, p, mode);
    return WeierstrassEval{z,
                           detail::finish(r.pole, r.x, r.xf, p),
                           detail::finish(r.pole, r.y, r.yf, p),
                           d,
                           mu,
                           r.count,
                           mode,
                           p};
}

inline WpValue wp_nc(const CPoint &z, const Modulus &mu, const SetDescriptor &d, Precision p, Mode mode = Mode::Float)
{
    return weierstrass_eval(z, mu, d, p, mode).wp;
}

inline WpValue wp_nc_prime(const CPoint &z, const Modulus &mu, const SetDescriptor &d, Precision p,
                           Mode mode = Mode::Float)
{
    return weierstrass_eval(z, mu, d, p, mode).wp_prime;
}

/// wp_F(z + m0 mu + n0) - wp_{F - (m0, n0)}(z). Shifting the argument by a
/// lattice vector moves the summation set by the opposite vector.
inline WpValue translation_identity_residual(const CPoint &z, LatticePoint shift, const Modulus &mu,
                                             const SetDescriptor &d, Precision p, Mode mode = Mode::Float)
{
    detail::require_precision(p);
    CPoint moved;
    if (mode == Mode::Exact || (z.is_exact() && mu.is_exact()))
        moved = CPoint(z.exact() + lattice_vector(mu.exact(), shift));
    else
    {
        const Precision w = working_precision(p, PointSource(d).size()) + 16;
        BigComplex s(w);
        lattice_vector_into(s, detail::float_mu(mu, w), shift);
        moved = CPoint(z.to_float(w) + s);
    }
    detail::WpRaw lhs = detail::wp_raw(moved, mu, d, p, mode);
    detail::WpRaw rhs = detail::wp_raw(z, mu, translated(-shift, d), p, mode);
    if (lhs.pole || rhs.pole)
        throw Error(Errc::PoleEncountered, "translation identity: the point hits the lattice");
    if (mode == Mode::Exact)
    {
        QuadComplex r = *lhs.x - *rhs.x;
        return WpValue{false, detail::embed(r, p), r};
    }
    return WpValue{false, (lhs.xf - rhs.xf).rounded(p), std::nullopt};
}

/// Coefficients of E(X, Y), always derived from the triple.
struct WeierPoly
{
    EisTriple triple;

    template <class C>
    static C evaluate(const C &x, const C &y, const C &g1, const C &g2, const C &g3)
    {
        C x2 = x * x;
        C g1sq = g1 * g1;
        return y * y - x2 * x * 4 + g1 * x2 * 12 - (g1sq * 12 - g2) * x + (g1sq * g1 * 4 - g1 * g2 + g3);
    }
};

struct ClassicalSource
{
};

/// g-coefficients over a convergent window of theta; when `start` is unset
/// the window of the evaluation set itself is used.
struct QuantumSource
{
    QuadIrr theta;
    std::optional<std::size_t> start;
    std::size_t length = 1;
};

using TripleSource = std::variant<ClassicalSource, QuantumSource>;

struct ResidualEval
{
    BigComplex residual;
    std::optional<QuadComplex> exact;
    WeierstrassEval eval;
    EisTriple triple;
};

inline SetDescriptor triple_descriptor(const SetDescriptor &d, const TripleSource &src)
{
    if (std::holds_alternative<ClassicalSource>(src))
        return d;
    const auto &q = std::get<QuantumSource>(src);
    if (q.start)
        return quantum_window(q.theta, *q.start, q.length);
    if (const auto *w = std::get_if<QuantumWindow>(&d.rule); w && w->theta == q.theta)
        return d;
    throw Error(Errc::InvalidArgument, "quantum triple source needs a window start or a window descriptor");
}

inline ResidualEval weier_residual(const CPoint &z, const Modulus &mu, const SetDescriptor &d, Precision p,
                                   Mode mode = Mode::Float, const TripleSource &src = ClassicalSource{})
{
    detail::require_precision(p);
    WeierstrassEval ev = weierstrass_eval(z, mu, d, p, mode);
    if (ev.wp.pole)
        throw Error(Errc::PoleEncountered, "evaluation point hits the lattice");
    EisTriple t = g_triple(mu, triple_descriptor(d, src), p, mode);
    if (mode == Mode::Exact)
    {
        QuadComplex r = WeierPoly::evaluate(*ev.wp.exact, *ev.wp_prime.exact, *t.g1.exact, *t.g2.exact, *t.g3.exact);
        return ResidualEval{detail::embed(r, p), r, std::move(ev), std::move(t)};
    }
    // evaluate at a few guard bits above p; inputs are already rounded to p
    const Precision w = p + 32;
    BigComplex r = WeierPoly::evaluate(ev.wp.value.rounded(w), ev.wp_prime.value.rounded(w), t.g1.value.rounded(w),
                                       t.g2.value.rounded(w), t.g3.value.rounded(w));
    return ResidualEval{r.rounded(p), std::nullopt, std::move(ev), std::move(t)};
}

struct ResidualRow
{
    std::size_t stage = 0;
    SetDescriptor descriptor;
    BigFloat residual_abs;
    BigFloat wp_abs;
    BigFloat g2_abs;
    std::optional<BigFloat> normalized; // quantum schemes only
};

struct ResidualSeries
{
    std::vector<ResidualRow> rows;
    std::optional<double> decay_exponent; // classical schemes: slope of log|res| against log N
};

inline double loglog_slope(const std::vector<double> &x, const std::vector<double> &y)
{
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline ResidualSeries residual_series(const CPoint &z, const Modulus &mu, const SchemeId &scheme,
                                      std::span<const std::size_t> stages, Precision p)
{
    ResidualSeries out;
    const bool classical = std::holds_alternative<ClassicalCone>(scheme);
    std::vector<double> lx, ly;
    for (std::size_t s : stages)
    {
        SetDescriptor d = stage(scheme, s);
        ResidualEval r = weier_residual(z, mu, d, p, Mode::Float, ClassicalSource{});
        ResidualRow row{s, d, r.residual.abs(), r.eval.wp.value.abs(), r.triple.g2.value.abs(), std::nullopt};
        if (classical)
        {
            double radius = static_cast<double>(std::get<Box>(d.rule).radius);
            double res = row.residual_abs.to_double();
            if (radius > 0 && res > 0)
            {
                lx.push_back(std::log(radius));
                ly.push_back(std::log(res));
            }
        }
        else
        {
            BigFloat g = row.g2_abs * row.g2_abs * row.g2_abs;
            BigFloat scale_g = g.sqrt();
            BigFloat scale_w = row.wp_abs * row.wp_abs * row.wp_abs;
            BigFloat scale = scale_g > scale_w ? scale_g : scale_w;
            if (!scale.is_zero())
                row.normalized = row.residual_abs / scale;
        }
        out.rows.push_back(std::move(row));
    }
    if (classical && lx.size() >= 2)
        out.decay_exponent = loglog_slope(lx, ly);
    return out;
}

} // namespace qtj
