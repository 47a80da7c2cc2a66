#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "qtj/numerics.hpp"

using namespace qtj;

namespace
{

Rational random_rational(std::mt19937_64 &rng)
{
    std::uniform_int_distribution<long> num(-50, 50);
    std::uniform_int_distribution<long> den(1, 30);
    return make_rational(num(rng), den(rng));
}

QuadIrr random_quad(std::mt19937_64 &rng, long d)
{
    std::uniform_int_distribution<long> coef(-20, 20);
    std::uniform_int_distribution<long> den(1, 15);
    return QuadIrr::make(coef(rng), coef(rng), den(rng), d);
}

QuadIrr golden() { return QuadIrr::make(1, 1, 2, 5); }

} // namespace

TEST(QuadIrr, CanonicalFormIsUnique)
{
    EXPECT_EQ(QuadIrr::make(2, 2, 4, 5), golden());
    EXPECT_EQ(QuadIrr::make(-2, -2, -4, 5), golden());
    EXPECT_EQ(QuadIrr::make(0, 1, 1, 8), QuadIrr::make(0, 2, 1, 2));
    EXPECT_EQ(QuadIrr::make(0, 3, 1, 12), QuadIrr::make(0, 6, 1, 3));
    // perfect-square radicand collapses to a rational
    QuadIrr five = QuadIrr::make(3, 1, 1, 4);
    EXPECT_TRUE(five.is_rational());
    EXPECT_EQ(five, QuadIrr(5));
    EXPECT_EQ(QuadIrr::make(3, 0, 6, 7).d(), 1);
}

TEST(QuadIrr, CanonicalizationIsIdempotent)
{
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t)
    {
        QuadIrr x = random_quad(rng, 7);
        EXPECT_EQ(QuadIrr::make(x.a(), x.b(), x.c(), x.d()), x);
        // scaling all three integers is the same number
        Integer s = 1 + t % 5;
        EXPECT_EQ(QuadIrr::make(x.a() * s, x.b() * s, x.c() * s, x.d()), x);
    }
}

TEST(QuadIrr, SignAndFloorAreExact)
{
    EXPECT_EQ(golden().floor(), 1);
    EXPECT_EQ((-golden()).floor(), -2);
    EXPECT_EQ(QuadIrr::sqrt_of(2).floor(), 1);
    EXPECT_EQ(QuadIrr::make(1, -1, 2, 5).floor(), -1);
    EXPECT_EQ(QuadIrr::make(7, 0, 2, 1).floor(), 3);
    EXPECT_EQ(QuadIrr::make(-7, 0, 2, 1).floor(), -4);
    EXPECT_EQ(QuadIrr::make(-7, 0, 2, 1).ceil(), -3);
    EXPECT_EQ(QuadIrr(4).ceil(), 4);
    // 1393 - 985 sqrt 2 is about -3.6e-4
    EXPECT_EQ(QuadIrr::make(1393, -985, 1, 2).sign(), -1);
    EXPECT_EQ(QuadIrr::make(1393, -984, 1, 2).sign(), 1);
    EXPECT_LT(QuadIrr::sqrt_of(2), QuadIrr(make_rational(99, 70)));
    EXPECT_GT(QuadIrr::sqrt_of(2), QuadIrr(make_rational(140, 99)));
}

TEST(QuadIrr, FloorMatchesBracketingOnRandomInputs)
{
    std::mt19937_64 rng(5);
    for (int t = 0; t < 300; ++t)
    {
        QuadIrr x = random_quad(rng, 13);
        Integer f = x.floor();
        EXPECT_LE(QuadIrr(f), x);
        EXPECT_GT(QuadIrr(Integer(f + 1)), x);
    }
}

TEST(QuadIrr, RejectsMixedRadicands)
{
    EXPECT_THROW(QuadIrr::sqrt_of(2) + QuadIrr::sqrt_of(3), Error);
    EXPECT_NO_THROW(QuadIrr::sqrt_of(2) + QuadIrr(3));
}

TEST(ExactArithmetic, FieldAxiomsOnRandomTriples)
{
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 100; ++t)
    {
        Rational x = random_rational(rng), y = random_rational(rng), z = random_rational(rng);
        EXPECT_EQ((x * y) * z, x * (y * z));
        if (x != 0)
        {
            EXPECT_EQ(x * (1 / x), 1);
        }

        QuadIrr p = random_quad(rng, 5), q = random_quad(rng, 5), r = random_quad(rng, 5);
        EXPECT_EQ((p * q) * r, p * (q * r));
        EXPECT_EQ(p * (q + r), p * q + p * r);
        if (!p.is_zero())
        {
            EXPECT_EQ(p * p.inverse(), QuadIrr(1));
        }

        GaussianRational u(random_rational(rng), random_rational(rng));
        GaussianRational v(random_rational(rng), random_rational(rng));
        GaussianRational w(random_rational(rng), random_rational(rng));
        EXPECT_EQ((u * v) * w, u * (v * w));
        if (!u.is_zero())
        {
            EXPECT_EQ(u * u.inverse(), GaussianRational(1));
        }
    }
}

TEST(EmbedExact, DyadicAndZeroAreExact)
{
    BigFloat half = embed_exact(make_rational(1, 2), 128);
    EXPECT_EQ(half.to_rational(), make_rational(1, 2));
    BigComplex zero = embed_exact(GaussianRational(0), 64);
    EXPECT_TRUE(zero.is_zero());
    EXPECT_THROW(embed_exact(make_rational(1, 3), 32), Error);
}

TEST(EmbedExact, GoldenRatioAgainstIntegerSquareRootBracket)
{
    // sqrt(5) in [s, s+1] / 2^256 with s = isqrt(5 * 2^512)
    Integer scale = Integer(1) << 256;
    Integer s = isqrt(Integer(5) * scale * scale);
    Rational lo = make_rational(scale + s, 2 * scale);
    Rational hi = make_rational(scale + s + 1, 2 * scale);

    BigFloat phi = embed_exact(golden(), 128);
    Rational v = phi.to_rational();
    Rational tol = lo / Rational(Integer(1) << 127); // 2^(1-128) relative
    EXPECT_LE(v, hi + tol);
    EXPECT_GE(v, lo - tol);
    EXPECT_EQ(phi.to_string(11).substr(0, 12), "1.6180339887");
}

TEST(EmbedExact, CancellingFormsKeepRelativeAccuracy)
{
    // 1393 - 985 sqrt 2 ~ -3.6e-4 : catastrophic cancellation if done naively
    QuadIrr x = QuadIrr::make(1393, -985, 1, 2);
    BigFloat v = embed_exact(x, 128);
    // reference: x = (1393^2 - 985^2 * 2) / (1393 + 985 sqrt 2) = -1 / (1393 + 985 sqrt 2),
    // computed naively at 1024 bits where no cancellation occurs
    BigFloat root2 = BigFloat(2, 1024).sqrt();
    BigFloat ref = BigFloat(-1, 1024) / (BigFloat(1393, 1024) + root2 * 985);
    BigFloat rel = ((v.rounded(1024) - ref) / ref).abs();
    EXPECT_LE(rel, BigFloat::pow2(-127, 64));
}

TEST(EmbedExact, MonotoneOnRealQuadraticValues)
{
    std::mt19937_64 rng(99);
    for (int t = 0; t < 300; ++t)
    {
        QuadIrr x = random_quad(rng, 3), y = random_quad(rng, 3);
        if (y < x)
            std::swap(x, y);
        BigFloat ex = embed_exact(x, 96), ey = embed_exact(y, 96);
        EXPECT_LE(ex, ey) << x << " vs " << y;
    }
}

TEST(PowInt, SmallCases)
{
    const Precision p = 128;
    BigComplex i(0, 1, p);
    EXPECT_EQ(pow_int(i, -2), BigComplex(-1, 0, p));
    EXPECT_EQ(pow_int(BigComplex(1, 1, p), 4), BigComplex(-4, 0, p));
    EXPECT_EQ(pow_int(BigComplex(3, -7, p), 0), BigComplex(1, 0, p));
    EXPECT_THROW(pow_int(BigComplex(p), -1), Error);

    // exact oracle for the same cases
    GaussianRational gi = GaussianRational::i();
    EXPECT_EQ(pow_int(gi, -2), GaussianRational(-1));
    EXPECT_EQ(pow_int(GaussianRational(1, 1), 2), GaussianRational(0, 2));
    EXPECT_EQ(pow_int(GaussianRational(1, 1), 4), GaussianRational(-4));
    EXPECT_THROW(pow_int(GaussianRational(0), -3), Error);
}

TEST(PowInt, AgreesWithExactPowersWithinUlpBound)
{
    std::mt19937_64 rng(7);
    const Precision p = 200;
    for (int t = 0; t < 50; ++t)
    {
        GaussianRational z(random_rational(rng), random_rational(rng));
        if (z.is_zero())
            continue;
        long e = static_cast<long>(rng() % 13) - 6;
        BigComplex approx = pow_int(embed_exact(z, p), e);
        BigComplex exact = embed_exact(pow_int(z, e), p + 64);
        BigFloat err = (approx.rounded(p + 64) - exact).abs();
        BigFloat scale = exact.abs();
        // (2|e|+2) ulps of growth, plus the input embedding
        BigFloat bound = scale * BigFloat::pow2(-(p - 4), p) * (pow_int_ulp_bound(e) + 2);
        EXPECT_LE(err, bound) << "e=" << e;
    }
}

TEST(SumFixedOrder, EmptyAndDyadic)
{
    EXPECT_TRUE(sum_fixed_order({}, 128).is_zero());
    const Precision p = 256;
    std::vector<BigComplex> terms{BigComplex(1, 0, p), BigComplex(-1, 0, p),
                                  BigComplex(BigFloat::pow2(-100, p), BigFloat(p))};
    BigComplex s = sum_fixed_order(terms);
    EXPECT_TRUE(identical(s, BigComplex(BigFloat::pow2(-100, p), BigFloat(p))));
}

TEST(SumFixedOrder, RejectsMixedPrecision)
{
    std::vector<BigComplex> terms{BigComplex(1, 0, 128), BigComplex(1, 0, 129)};
    try
    {
        sum_fixed_order(terms);
        FAIL() << "expected PrecisionMismatch";
    }
    catch (const Error &e)
    {
        EXPECT_EQ(e.code(), Errc::PrecisionMismatch);
    }
}

TEST(SumFixedOrder, BitIdenticalAcrossRunsAndWorkerCounts)
{
    const Precision p = 96;
    std::mt19937_64 rng(3);
    std::vector<BigComplex> terms;
    // magnitudes spread over 2^-60..2^60 so the order of additions matters
    for (int t = 0; t < 3 * static_cast<int>(kSumChunk) + 17; ++t)
    {
        long e = static_cast<long>(rng() % 121) - 60;
        BigFloat re = BigFloat::pow2(e, p) * static_cast<long>(rng() % 1000 + 1);
        BigFloat im = BigFloat::pow2(-e, p) / static_cast<long>(rng() % 997 + 3);
        terms.emplace_back(re, rng() % 2 ? im : -im);
    }
    set_worker_count(1);
    BigComplex a = sum_fixed_order(terms);
    BigComplex b = sum_fixed_order(terms);
    set_worker_count(4);
    BigComplex c = sum_fixed_order(terms);
    set_worker_count(1);
    EXPECT_TRUE(identical(a, b));
    EXPECT_TRUE(identical(a, c));

    // the kernel form used by the pipelines matches the list form
    BigComplex d = chunked_sum(terms.size(), p, [&](std::size_t i, BigComplex &acc) { acc += terms[i]; });
    EXPECT_TRUE(identical(a, d));

    // and a different order generally gives different bits
    std::vector<BigComplex> reversed(terms.rbegin(), terms.rend());
    BigComplex r = sum_fixed_order(reversed);
    EXPECT_LE((r - a).abs(), a.abs() * BigFloat::pow2(-80, p));
}

TEST(SumFixedOrder, WorkingPrecisionAddsGuardBits)
{
    EXPECT_EQ(working_precision(256, 1), 256 + 32);
    EXPECT_EQ(working_precision(256, 4096), 256 + 32 + 12);
    EXPECT_EQ(working_precision(128, 4097), 128 + 32 + 13);
}

TEST(BigFloat, DecimalTextRoundTrips)
{
    BigFloat x = embed_exact(golden(), 256);
    std::string s = x.to_string();
    BigFloat y = BigFloat::from_string(s, 256);
    EXPECT_TRUE(identical(x, y));
    EXPECT_EQ(BigFloat(3, 64).to_string(5), "3.0000e+00");
    EXPECT_EQ(BigFloat(-1, 64).to_string(3), "-1.00e+00");
}
