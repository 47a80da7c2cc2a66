#pragma once

// Normal form of E(X, Y), the invariants c4 and c6, and j computed from box
// limits (classical) or from convergent windows (quantum).

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "qtj/eisenstein.hpp"

namespace qtj
{

template <class T>
struct NormalForm
{
    T a2, a4, a6;
};

/// Substituting Y = 2y in E(X, Y) gives y^2 = X^3 + a2 X^2 + a4 X + a6 with
/// a2 = -3 g1, a4 = 3 g1^2 - g2/4, a6 = -(g1^3 - g1 g2/4 + g3/4).
template <class T>
NormalForm<T> normal_form(const T &g1, const T &g2, const T &g3)
{
    T g1sq = T(g1 * g1);
    T a2 = T(g1 * -3L);
    T a4 = T(T(g1sq * 3L) - T(g2 / 4L));
    T a6 = T(-(T(g1sq * g1) - T(T(g1 * g2) / 4L) + T(g3 / 4L)));
    return {a2, a4, a6};
}

template <class T>
std::pair<T, T> c_invariants(const NormalForm<T> &nf)
{
    T b2 = T(nf.a2 * 4L);
    T b4 = T(nf.a4 * 2L);
    T b6 = T(nf.a6 * 4L);
    T c4 = T(T(b2 * b2) - T(b4 * 24L));
    T c6 = T(T(-T(T(b2 * b2) * b2)) + T(T(b2 * b4) * 36L) - T(b6 * 216L));
    return {c4, c6};
}

inline bool is_exact_zero(const Rational &x) { return x == 0; }
inline bool is_exact_zero(const QuadComplex &x) { return x.is_zero(); }
inline bool is_exact_zero(const GaussianRational &x) { return x.is_zero(); }
inline bool is_exact_zero(const BigComplex &x) { return x.is_zero(); }

/// 1728 c4^3 / (c4^3 - c6^2).
template <class T>
T j_from_c(const T &c4, const T &c6)
{
    T c43 = T(T(c4 * c4) * c4);
    T den = T(c43 - T(c6 * c6));
    if (is_exact_zero(den))
        throw Error(Errc::DegenerateDiscriminant, "c4^3 = c6^2");
    return T(T(c43 * 1728L) / den);
}

/// 1728 g2^3 / (g2^3 - 27 g3^2).
template <class T>
T j_from_g(const T &g2, const T &g3)
{
    T g23 = T(T(g2 * g2) * g2);
    T den = T(g23 - T(T(g3 * g3) * 27L));
    if (is_exact_zero(den))
        throw Error(Errc::DegenerateDiscriminant, "g2^3 = 27 g3^2");
    return T(T(g23 * 1728L) / den);
}

struct JClassical
{
    BigComplex value;
    BigFloat error_bound;
    BigComplex g2, g3;
    ClassicalEstimate G2, G3;
};

/// j from extrapolated box limits of G_2 and G_3. The bound is propagated by
/// evaluating j at g2 + u d2, g3 + v d3 for u, v in {1, i, -1, -i}, doubling
/// the largest deviation, and adding rounding slack.
inline JClassical j_classical(const Modulus &mu, std::int64_t n_max, Precision p, int order = 2)
{
    const long ks[] = {2, 3};
    auto est = classical_G_multi(mu, ks, n_max, p, order);
    const Precision w = p + 32;
    BigComplex g2 = est[0].estimate.rounded(w) * kG2Scale;
    BigComplex g3 = est[1].estimate.rounded(w) * kG3Scale;
    BigComplex j = j_from_g(g2, g3);
    BigFloat d2 = est[0].error_bound->rounded(w) * kG2Scale;
    BigFloat d3 = est[1].error_bound->rounded(w) * kG3Scale;

    const BigComplex units[] = {BigComplex(1, 0, w), BigComplex(0, 1, w), BigComplex(-1, 0, w), BigComplex(0, -1, w)};
    BigFloat worst(0, w);
    for (const auto &u : units)
    {
        for (const auto &v : units)
        {
            BigComplex jj = j_from_g(g2 + u * d2, g3 + v * d3);
            BigFloat dev = (jj - j).abs();
            if (dev > worst)
                worst = dev;
        }
    }
    BigFloat bound = worst * 2 + j.abs() * BigFloat::pow2(16 - p, w);
    return JClassical{j.rounded(p), bound.rounded(p), g2.rounded(p), g3.rounded(p), est[0], est[1]};
}

struct JStage
{
    std::size_t stage = 0;
    bool degenerate = false;
    BigComplex j;
    BigFloat im_fraction; // |Im j| / |j|
    std::size_t period_class = 0;
    BigComplex g2, g3;
    std::int64_t min_abs_n = 0;
};

struct JClassSummary
{
    std::size_t period_class = 0;
    std::size_t count = 0; // stages from the tail half in this class
    BigFloat median_re, median_im;
    BigFloat diameter;
};

struct JReport
{
    QuadIrr theta;
    Modulus mu;
    std::size_t window = 1;
    Precision precision = 0;
    std::size_t period_length = 1;
    std::vector<JStage> stages;
    std::vector<JClassSummary> classes;
};

namespace detail
{
inline BigFloat median(std::vector<BigFloat> v)
{
    std::sort(v.begin(), v.end(), [](const BigFloat &a, const BigFloat &b) { return a < b; });
    const std::size_t n = v.size();
    if (n % 2 == 1)
        return v[n / 2];
    return (v[n / 2 - 1] + v[n / 2]) / 2;
}
} // namespace detail

/// Per-stage j over convergent windows, grouped by stage modulo the period of
/// the continued fraction of theta. Class medians and diameters use the later
/// half of the stages.
inline JReport j_quantum(const Modulus &mu, const QuadIrr &theta, std::span<const std::size_t> stages,
                         std::size_t window, Precision p)
{
    if (theta.is_rational())
        throw Error(Errc::InvalidArgument, "quantum j needs irrational theta");
    for (std::size_t i = 1; i < stages.size(); ++i)
        if (stages[i] <= stages[i - 1])
            throw Error(Errc::InvalidArgument, "stages must be strictly increasing");
    JReport rep;
    rep.theta = theta;
    rep.mu = mu;
    rep.window = window;
    rep.precision = p;
    CFExpansion cf = cf_expand(theta, 1);
    rep.period_length = cf.period ? cf.period->length : 1;

    const Precision w = p + 32;
    for (std::size_t s : stages)
    {
        SetDescriptor d = quantum_window(theta, s, window);
        EisTriple t = g_triple(mu, d, w);
        JStage row;
        row.stage = s;
        row.period_class = s % rep.period_length;
        row.g2 = t.g2.value.rounded(p);
        row.g3 = t.g3.value.rounded(p);
        row.min_abs_n = min_abs_n(d);
        try
        {
            BigComplex j = j_from_g(t.g2.value, t.g3.value);
            row.j = j.rounded(p);
            row.im_fraction = (j.im().abs() / j.abs()).rounded(p);
        }
        catch (const Error &e)
        {
            if (e.code() != Errc::DegenerateDiscriminant)
                throw;
            row.degenerate = true;
            row.j = BigComplex(p);
            row.im_fraction = BigFloat(p);
        }
        rep.stages.push_back(std::move(row));
    }

    std::map<std::size_t, std::vector<const JStage *>> groups;
    const std::size_t tail_from = rep.stages.size() / 2;
    for (std::size_t i = tail_from; i < rep.stages.size(); ++i)
        if (!rep.stages[i].degenerate)
            groups[rep.stages[i].period_class].push_back(&rep.stages[i]);
    for (const auto &[cls, rows] : groups)
    {
        JClassSummary sum;
        sum.period_class = cls;
        sum.count = rows.size();
        std::vector<BigFloat> re, im;
        for (const auto *r : rows)
        {
            re.push_back(r->j.re());
            im.push_back(r->j.im());
        }
        sum.median_re = detail::median(re);
        sum.median_im = detail::median(im);
        sum.diameter = BigFloat(0, p);
        for (std::size_t a = 0; a < rows.size(); ++a)
            for (std::size_t b = a + 1; b < rows.size(); ++b)
            {
                BigFloat dist = (rows[a]->j - rows[b]->j).abs();
                if (dist > sum.diameter)
                    sum.diameter = dist;
            }
        rep.classes.push_back(std::move(sum));
    }
    return rep;
}

} // namespace qtj
