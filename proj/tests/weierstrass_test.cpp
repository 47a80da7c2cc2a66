#include <random>

#include <gtest/gtest.h>

#include "qtj/weierstrass.hpp"

using namespace qtj;

namespace
{
constexpr Precision kP = 192;

QuadIrr golden() { return QuadIrr::make(1, 1, 2, 5); }
Rational rat(long a, long b) { return make_rational(a, b); }
Modulus mu_i() { return Modulus(GaussianRational(rat(0, 1), rat(1, 1))); }
Modulus gauss(long a, long b, long c, long d) { return Modulus(GaussianRational(rat(a, b), rat(c, d))); }
CPoint pt(long a, long b, long c, long d) { return CPoint(GaussianRational(rat(a, b), rat(c, d))); }
QuadComplex q(long re, long im = 0) { return QuadComplex(QuadIrr(re), QuadIrr(im)); }
BigFloat num(const char *s) { return BigFloat::from_string(s, kP); }

CPoint float_point(const char *re, const char *im) { return CPoint(BigComplex(num(re), num(im))); }
} // namespace

TEST(WpNc, SinglePointExamples)
{
    SetDescriptor origin = explicit_set({{0, 0}});
    WpValue w = wp_nc(pt(1, 2, 0, 1), mu_i(), origin, kP, Mode::Exact);
    EXPECT_FALSE(w.pole);
    EXPECT_EQ(*w.exact, q(4));
    EXPECT_EQ(wp_nc(pt(1, 2, 0, 1), mu_i(), origin, kP).value, BigComplex(4, 0, kP));
    EXPECT_EQ(*wp_nc_prime(pt(1, 2, 0, 1), mu_i(), origin, kP, Mode::Exact).exact, q(-16));
    EXPECT_EQ(wp_nc_prime(pt(1, 2, 0, 1), mu_i(), origin, kP).value, BigComplex(-16, 0, kP));
}

TEST(WpNc, PolesAreValues)
{
    SetDescriptor b = box(2, true);
    EXPECT_TRUE(wp_nc(pt(0, 1, 0, 1), mu_i(), b, kP).pole);
    EXPECT_TRUE(wp_nc(pt(0, 1, 0, 1), mu_i(), b, kP, Mode::Exact).pole);
    EXPECT_TRUE(wp_nc_prime(pt(2, 1, -1, 1), mu_i(), b, kP).pole);
    EXPECT_FALSE(wp_nc(pt(3, 1, 0, 1), mu_i(), b, kP).pole);
    EXPECT_FALSE(wp_nc(pt(0, 1, 0, 1), mu_i(), box(2, false), kP).pole);
    EXPECT_TRUE(wp_nc(CPoint(BigComplex(1, 1, kP)), mu_i(), b, kP).pole);
}

TEST(WpNc, BoxOneMatchesDirectSum)
{
    GaussianRational z(rat(1, 2), rat(1, 2));
    GaussianRational s2(0), s3(0);
    for (long m = -1; m <= 1; ++m)
        for (long n = -1; n <= 1; ++n)
        {
            GaussianRational d = z - GaussianRational(rat(n, 1), rat(m, 1));
            GaussianRational d2 = d * d;
            s2 += d2.inverse();
            s3 += (d2 * d).inverse();
        }
    WeierstrassEval e = weierstrass_eval(CPoint(z), mu_i(), box(1, true), kP, Mode::Exact);
    EXPECT_EQ(*e.wp.exact, to_quad(s2));
    EXPECT_EQ(*e.wp_prime.exact, to_quad(s3 * -2));
    WeierstrassEval f = weierstrass_eval(CPoint(z), mu_i(), box(1, true), kP);
    EXPECT_LE((f.wp.value - e.wp.value).abs(), BigFloat::pow2(-(kP - 40), kP));
    EXPECT_LE((f.wp_prime.value - e.wp_prime.value).abs(), BigFloat::pow2(-(kP - 40), kP));
    EXPECT_EQ(e.term_count, 9U);
}

TEST(WpNc, RealPointOnSquareLatticeGivesRealValues)
{
    for (long n : {1, 3, 6})
    {
        WeierstrassEval e = weierstrass_eval(pt(3, 10, 0, 1), mu_i(), box(n, true), kP, Mode::Exact);
        EXPECT_TRUE(e.wp.exact->im().is_zero());
        EXPECT_TRUE(e.wp_prime.exact->im().is_zero());
        WeierstrassEval f = weierstrass_eval(float_point("0.3", "0"), mu_i(), box(n, true), kP);
        EXPECT_LE(f.wp_prime.value.im().abs(), BigFloat::pow2(-(kP - 40), kP));
    }
}

TEST(TranslationIdentity, Examples)
{
    WpValue zero = translation_identity_residual(pt(1, 3, 0, 1), {0, 0}, mu_i(), box(2, true), kP, Mode::Exact);
    EXPECT_EQ(*zero.exact, q(0));
    WpValue r = translation_identity_residual(pt(1, 3, 0, 1), {0, 1}, mu_i(), box(2, true), kP, Mode::Exact);
    EXPECT_EQ(*r.exact, q(0));
    EXPECT_THROW(translation_identity_residual(pt(0, 1, 0, 1), {0, 1}, mu_i(), box(2, true), kP), Error);
}

TEST(TranslationIdentity, ShiftedArgumentNeedsOppositelyShiftedSet)
{
    // guards the direction of the set shift: the "+" shift gives a nonzero difference
    CPoint z = pt(1, 3, 1, 5);
    LatticePoint shift{1, 2};
    SetDescriptor d = box(2, true);
    WpValue wrong_lhs = wp_nc(CPoint(z.exact() + lattice_vector(mu_i().exact(), shift)), mu_i(), d, kP, Mode::Exact);
    WpValue wrong_rhs = wp_nc(z, mu_i(), translated(shift, d), kP, Mode::Exact);
    EXPECT_NE(*wrong_lhs.exact, *wrong_rhs.exact);
    EXPECT_EQ(*translation_identity_residual(z, shift, mu_i(), d, kP, Mode::Exact).exact, q(0));
}

TEST(TranslationIdentity, RandomizedExactAndFloat)
{
    std::mt19937_64 rng(77);
    int done = 0;
    while (done < 30)
    {
        CPoint z = pt(static_cast<long>(rng() % 19) - 9, 7, static_cast<long>(rng() % 19) - 9, 5);
        LatticePoint shift{static_cast<std::int64_t>(rng() % 7) - 3, static_cast<std::int64_t>(rng() % 7) - 3};
        Modulus mu = done % 2 ? mu_i() : gauss(1, 2, 3, 2);
        SetDescriptor d = box(static_cast<std::int64_t>(rng() % 5) + 1, true);
        try
        {
            WpValue e = translation_identity_residual(z, shift, mu, d, kP, Mode::Exact);
            EXPECT_EQ(*e.exact, q(0));
            WpValue f = translation_identity_residual(z, shift, mu, d, kP);
            EXPECT_LE(f.value.abs(), BigFloat::pow2(-(kP - 48), kP));
            ++done;
        }
        catch (const Error &err)
        {
            EXPECT_EQ(err.code(), Errc::PoleEncountered);
        }
    }
}

TEST(WeierResidual, SinglePoleCancelsExactly)
{
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t)
    {
        CPoint z = pt(static_cast<long>(rng() % 9) + 1, 4, static_cast<long>(rng() % 9) - 4, 3);
        ResidualEval r = weier_residual(z, gauss(1, 3, 2, 1), explicit_set({{0, 0}}), kP, Mode::Exact);
        EXPECT_EQ(*r.exact, q(0));
        ResidualEval f = weier_residual(z, gauss(1, 3, 2, 1), explicit_set({{0, 0}}), kP);
        EXPECT_LE(f.residual.abs(), BigFloat::pow2(-(kP - 64), kP) * (f.eval.wp.value.abs() + BigFloat(1, kP)) *
                                        f.eval.wp.value.norm() * f.eval.wp.value.abs());
    }
}

TEST(WeierResidual, PoleIsAnError)
{
    try
    {
        weier_residual(pt(1, 1, 1, 1), mu_i(), box(2, true), kP);
        FAIL();
    }
    catch (const Error &e)
    {
        EXPECT_EQ(e.code(), Errc::PoleEncountered);
    }
}

TEST(WeierResidual, ClassicalDecayAtI)
{
    CPoint z = float_point("0.31", "0.17");
    std::vector<double> res;
    for (std::int64_t n : {25, 50, 100})
        res.push_back(weier_residual(z, mu_i(), box(n, true), 128).residual.abs().to_double());
    EXPECT_LT(res[1], res[0]);
    EXPECT_LT(res[2], res[1]);
    EXPECT_LE(res[1] / res[0], 0.7);
    EXPECT_LE(res[2] / res[1], 0.7);
}

TEST(WeierResidual, ExactAgreesWithFloat)
{
    CPoint z = pt(31, 100, 17, 100);
    ResidualEval e = weier_residual(z, mu_i(), box(3, true), kP, Mode::Exact);
    ResidualEval f = weier_residual(z, mu_i(), box(3, true), kP);
    EXPECT_LE((e.residual - f.residual).abs(), BigFloat::pow2(-(kP - 64), kP) * BigFloat(1000, kP));
}

TEST(WeierResidual, QuantumWindowOnSlopeLine)
{
    CPoint z = slope_point(mu_i(), golden(), QuadIrr(rat(1, 3)));
    WpValue w = wp_nc(z, mu_i(), quantum_window(golden(), 12, 4), kP);
    EXPECT_LT(w.value.abs(), num("1e-4"));
    for (std::size_t s = 10; s <= 16; ++s)
    {
        ResidualEval r = weier_residual(z, mu_i(), quantum_window(golden(), s, 4), kP, Mode::Float,
                                        QuantumSource{golden(), std::nullopt, 4});
        EXPECT_LT(r.residual.abs(), num("1e-4")) << s;
        ResidualEval same = weier_residual(z, mu_i(), quantum_window(golden(), s, 4), kP, Mode::Float,
                                           QuantumSource{golden(), s, 4});
        EXPECT_TRUE(identical(same.residual, r.residual));
    }
    // exact arithmetic works across the sqrt(5) field as well
    ResidualEval ex = weier_residual(z, mu_i(), quantum_window(golden(), 6, 2), kP, Mode::Exact,
                                     QuantumSource{golden(), std::nullopt, 2});
    ResidualEval fl = weier_residual(z, mu_i(), quantum_window(golden(), 6, 2), kP, Mode::Float,
                                     QuantumSource{golden(), std::nullopt, 2});
    EXPECT_LE((ex.residual - fl.residual).abs(), BigFloat::pow2(-(kP - 64), kP));
}

TEST(ResidualSeries, ClassicalExponent)
{
    SchemeId cone = classical_cone({8, 16, 32, 64});
    std::vector<std::size_t> stages{0, 1, 2, 3};
    ResidualSeries s = residual_series(float_point("0.31", "0.17"), mu_i(), cone, stages, 128);
    ASSERT_TRUE(s.decay_exponent);
    EXPECT_LE(*s.decay_exponent, -0.8);
    ResidualSeries again = residual_series(float_point("0.31", "0.17"), mu_i(), cone, stages, 128);
    for (std::size_t i = 0; i < s.rows.size(); ++i)
        EXPECT_TRUE(identical(s.rows[i].residual_abs, again.rows[i].residual_abs));
}

TEST(ResidualSeries, QuantumRawResidualsDecrease)
{
    std::vector<std::size_t> stages;
    for (std::size_t s = 6; s <= 16; ++s)
        stages.push_back(s);
    SchemeId q = quantum_theta(golden(), 2, stages);
    CPoint z = slope_point(mu_i(), golden(), QuadIrr(rat(1, 3)));
    ResidualSeries s = residual_series(z, mu_i(), q, stages, kP);
    ASSERT_EQ(s.rows.size(), stages.size());
    for (std::size_t i = 1; i < s.rows.size(); ++i)
        EXPECT_LT(s.rows[i].residual_abs, s.rows[i - 1].residual_abs) << stages[i];
    for (const auto &row : s.rows)
        EXPECT_TRUE(row.normalized.has_value());
    EXPECT_FALSE(s.decay_exponent);
}
