#pragma once

// Continued fractions and Diophantine approximation pairs. A pair (m, n)
// approximates theta when n*theta - m is small; the lattice vector it indexes
// downstream is m*mu + n, which is then close to n*(1 + theta*mu).

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qtj/gl2z.hpp"
#include "qtj/numerics.hpp"

namespace qtj
{

struct Period
{
    std::size_t preperiod = 0;
    std::size_t length = 0;
    friend bool operator==(const Period &, const Period &) = default;
};

struct CFExpansion
{
    QuadIrr theta;
    std::vector<Integer> partial_quotients;
    std::optional<Period> period; // set for irrational quadratic theta
    bool terminated = false;      // rational theta: the list is the whole expansion
    std::vector<Integer> prefix;  // quotients before the period
    std::vector<Integer> cycle;   // one full period

    /// j-th partial quotient, extending periodic expansions past the stored list.
    std::optional<Integer> quotient(std::size_t j) const
    {
        if (j < partial_quotients.size())
            return partial_quotients[j];
        if (!period || cycle.empty())
            return std::nullopt;
        if (j < prefix.size())
            return prefix[j];
        return cycle[(j - prefix.size()) % cycle.size()];
    }

    /// Number of quotients available (unbounded for periodic expansions).
    std::optional<std::size_t> available() const
    {
        if (period)
            return std::nullopt;
        return partial_quotients.size();
    }
};

struct DAPair
{
    Integer m;
    Integer n;
    QuadIrr err; // n*theta - m, exact

    friend bool operator==(const DAPair &, const DAPair &) = default;
};

/// Convergent data when theta is only known as a float.
struct HeuristicPair
{
    Integer m;
    Integer n;
    BigFloat err;
};

struct HeuristicExpansion
{
    BigFloat theta;
    std::vector<Integer> partial_quotients;
    std::vector<HeuristicPair> convergents;
    bool heuristic = true;
};

namespace detail
{
// Safety cap on the surd recurrence when hunting for the period.
inline constexpr std::size_t kPeriodSearchCap = 200000;
} // namespace detail

inline CFExpansion cf_expand(const QuadIrr &theta, std::size_t max_terms)
{
    if (max_terms < 1)
        throw Error(Errc::InvalidArgument, "cf_expand needs max_terms >= 1");
    CFExpansion cf;
    cf.theta = theta;

    if (theta.is_rational())
    {
        Integer num = theta.a(), den = theta.c();
        while (den != 0 && cf.partial_quotients.size() < max_terms)
        {
            Integer q = floor_div(num, den);
            cf.partial_quotients.push_back(q);
            Integer r = num - q * den;
            num = den;
            den = r;
        }
        cf.terminated = (den == 0);
        return cf;
    }

    // theta = (P + sqrt(D)) / Q with Q | D - P^2
    Integer P = theta.b() > 0 ? theta.a() : Integer(-theta.a());
    Integer Q = theta.b() > 0 ? theta.c() : Integer(-theta.c());
    Integer D = theta.b() * theta.b() * theta.d();
    if ((D - P * P) % Q != 0)
    {
        Integer aq = abs(Q);
        P *= aq;
        D *= Q * Q;
        Q *= aq;
    }
    const Integer root = isqrt(D);

    std::map<std::pair<Integer, Integer>, std::size_t> seen;
    std::vector<Integer> all;
    for (std::size_t k = 0; k < std::max(max_terms, detail::kPeriodSearchCap); ++k)
    {
        if (!cf.period)
        {
            auto [it, fresh] = seen.emplace(std::make_pair(P, Q), k);
            if (!fresh)
                cf.period = Period{it->second, k - it->second};
        }
        if (cf.period && k >= max_terms)
            break;
        Integer a = Q > 0 ? floor_div(P + root, Q) : floor_div(P + root + 1, Q);
        all.push_back(a);
        Integer nextP = a * Q - P;
        Integer nextQ = (D - nextP * nextP) / Q;
        P = std::move(nextP);
        Q = std::move(nextQ);
    }
    if (cf.period)
    {
        cf.prefix.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(cf.period->preperiod));
        cf.cycle.assign(all.begin() + static_cast<std::ptrdiff_t>(cf.period->preperiod),
                        all.begin() + static_cast<std::ptrdiff_t>(cf.period->preperiod + cf.period->length));
    }
    all.resize(std::min(all.size(), max_terms));
    cf.partial_quotients = std::move(all);
    return cf;
}

/// First `count` convergents (p_j, q_j) with err = q_j*theta - p_j.
inline std::vector<DAPair> convergents(const CFExpansion &cf, std::size_t count)
{
    std::vector<DAPair> out;
    out.reserve(count);
    Integer p_prev2 = 0, p_prev1 = 1;
    Integer q_prev2 = 1, q_prev1 = 0;
    for (std::size_t j = 0; j < count; ++j)
    {
        auto a = cf.quotient(j);
        if (!a)
            throw Error(Errc::InvalidArgument, "requested " + std::to_string(count) + " convergents but only " +
                                                   std::to_string(j) + " quotients are available");
        Integer p = *a * p_prev1 + p_prev2;
        Integer q = *a * q_prev1 + q_prev2;
        out.push_back(DAPair{p, q, QuadIrr(q) * cf.theta - QuadIrr(p)});
        p_prev2 = std::exchange(p_prev1, p);
        q_prev2 = std::exchange(q_prev1, q);
    }
    return out;
}

/// |n*theta - m|, exact.
inline QuadIrr pair_quality(const DAPair &p) { return p.err.abs(); }

inline DAPair make_pair(const Integer &m, const Integer &n, const QuadIrr &theta)
{
    return DAPair{m, n, QuadIrr(n) * theta - QuadIrr(m)};
}

/// Moebius image (a x + b) / (c x + d) of a real quadratic value.
inline QuadIrr moebius(const GL2Z &A, const QuadIrr &x)
{
    QuadIrr den = QuadIrr(A.c()) * x + QuadIrr(A.d());
    if (den.is_zero())
        throw Error(Errc::MoebiusPole, "c*theta + d = 0 for " + A.to_string());
    return (QuadIrr(A.a()) * x + QuadIrr(A.b())) / den;
}

/// (m', n') = A (m, n), re-measured against A(theta). The new error equals
/// det(A) * err / (c theta + d).
inline DAPair transform_pair(const GL2Z &A, const DAPair &p, const QuadIrr &theta)
{
    QuadIrr image = moebius(A, theta);
    Integer m = Integer(A.a()) * p.m + Integer(A.b()) * p.n;
    Integer n = Integer(A.c()) * p.m + Integer(A.d()) * p.n;
    return make_pair(m, n, image);
}

/// Integer combination sum_j c_j (m_j, n_j); err is recomputed from scratch.
inline DAPair group_combination(std::span<const DAPair> pairs, std::span<const long> coeffs, const QuadIrr &theta,
                                bool require_nonzero_n = false)
{
    if (pairs.size() != coeffs.size())
        throw Error(Errc::InvalidArgument, "group_combination: pairs and coefficients differ in length");
    Integer m = 0, n = 0;
    for (std::size_t j = 0; j < pairs.size(); ++j)
    {
        m += coeffs[j] * pairs[j].m;
        n += coeffs[j] * pairs[j].n;
    }
    if (require_nonzero_n && n == 0)
        throw Error(Errc::ZeroDenominator, "combination has n = 0");
    return make_pair(m, n, theta);
}

/// The integer m nearest to n*theta (the dual of n for a good approximation).
inline Integer dual_of(const Integer &n, const QuadIrr &theta)
{
    return (QuadIrr(n) * theta + QuadIrr(make_rational(1, 2))).floor();
}

/// Expansion of a float theta: quotients are produced until the convergent
/// error drops below 2^(-P/2), where P is the precision of theta.
inline HeuristicExpansion cf_expand_heuristic(const BigFloat &theta, std::size_t max_terms)
{
    const Precision p = theta.precision();
    HeuristicExpansion cf{theta, {}, {}};
    const BigFloat threshold = BigFloat::pow2(-(p / 2), p);
    BigFloat x = theta;
    Integer p_prev2 = 0, p_prev1 = 1, q_prev2 = 1, q_prev1 = 0;
    for (std::size_t j = 0; j < max_terms; ++j)
    {
        mpz_class a;
        BigFloat fl(p);
        mpfr_floor(fl.raw(), x.raw());
        mpfr_get_z(a.get_mpz_t(), fl.raw(), MPFR_RNDN);
        cf.partial_quotients.push_back(a);
        Integer pj = a * p_prev1 + p_prev2;
        Integer qj = a * q_prev1 + q_prev2;
        BigFloat err = BigFloat(qj, p) * theta - BigFloat(pj, p);
        cf.convergents.push_back(HeuristicPair{pj, qj, err});
        p_prev2 = std::exchange(p_prev1, pj);
        q_prev2 = std::exchange(q_prev1, qj);
        BigFloat frac = x - fl;
        if (err.abs() < threshold || frac.is_zero())
            break;
        x = BigFloat(1, p) / frac;
    }
    return cf;
}

} // namespace qtj
