#include "kfr/checked_rational.hpp"
#include "kfr/rational.hpp"

#include <gtest/gtest.h>

#include <cstdint>
#include <random>

using kfr::CheckedRational;
using kfr::Rational;

TEST(ParseRational, IntegersDecimalsFractions) {
    EXPECT_EQ(kfr::parse_rational("12"), Rational(12));
    EXPECT_EQ(kfr::parse_rational("-3.25"), Rational(-13, 4));
    EXPECT_EQ(kfr::parse_rational("1e-3"), Rational(1, 1000));
    EXPECT_EQ(kfr::parse_rational("2.5E2"), Rational(250));
    EXPECT_EQ(kfr::parse_rational("14/6"), Rational(7, 3));
    EXPECT_EQ(kfr::parse_rational("-4/8"), Rational(-1, 2));
    EXPECT_EQ(kfr::parse_rational(" .5 "), Rational(1, 2));
    EXPECT_EQ(kfr::parse_rational("+7."), Rational(7));
}

TEST(ParseRational, RejectsGarbage) {
    for (const char* bad : {"", "abc", "1/0", "1.2.3", "1e", "--1", "1/-2", ".", "1e1234567"})
        EXPECT_THROW(kfr::parse_rational(bad), kfr::NumberFormatError) << bad;
}

TEST(ParseRational, FromDoubleUsesShortestDecimal) {
    EXPECT_EQ(kfr::rational_from_double(0.1), Rational(1, 10));
    EXPECT_EQ(kfr::rational_from_double(-2.5), Rational(-5, 2));
    EXPECT_EQ(kfr::rational_from_double(3.0), Rational(3));
}

TEST(DisplayString, FiniteDecimalOrFraction) {
    EXPECT_EQ(kfr::to_display_string(Rational(5, 2)), "2.5");
    EXPECT_EQ(kfr::to_display_string(Rational(-1, 8)), "-0.125");
    EXPECT_EQ(kfr::to_display_string(Rational(1, 3)), "1/3");
    EXPECT_EQ(kfr::to_display_string(Rational(42)), "42");
    EXPECT_EQ(kfr::to_exact_string(Rational(-7, 2)), "-7/2");
}

TEST(DisplayString, ExactStringRoundTrips) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 500; ++i) {
        Rational r(static_cast<long>(rng() % 20001) - 10000, static_cast<long>(rng() % 999) + 1);
        r.canonicalize();
        EXPECT_EQ(kfr::parse_rational(kfr::to_exact_string(r)), r);
        EXPECT_EQ(kfr::parse_rational(kfr::to_display_string(r)), r);
    }
}

TEST(CheckedRational, MatchesGmpOnRandomOperations) {
    std::mt19937_64 rng(11);
    auto pick = [&] {
        return CheckedRational(static_cast<std::int64_t>(rng() % 2001) - 1000, static_cast<std::int64_t>(rng() % 97) + 1);
    };
    for (int i = 0; i < 2000; ++i) {
        CheckedRational a = pick(), b = pick();
        Rational qa = a.to_mpq(), qb = b.to_mpq();
        EXPECT_EQ((a + b).to_mpq(), qa + qb);
        EXPECT_EQ((a - b).to_mpq(), qa - qb);
        EXPECT_EQ((a * b).to_mpq(), qa * qb);
        if (b != CheckedRational(0)) {
            EXPECT_EQ((a / b).to_mpq(), Rational(qa / qb));
        }
        EXPECT_EQ(a < b, qa < qb);
        EXPECT_EQ(a == b, qa == qb);
    }
}

TEST(CheckedRational, OverflowThrowsInsteadOfWrapping) {
    CheckedRational big(INT64_MAX / 2 + 1);
    EXPECT_THROW(big + big, kfr::RationalOverflow);
    EXPECT_THROW(big * CheckedRational(3), kfr::RationalOverflow);
    EXPECT_THROW(-CheckedRational(INT64_MIN), kfr::RationalOverflow);
    EXPECT_THROW(CheckedRational(1, INT64_MAX) + CheckedRational(1, INT64_MAX - 1), kfr::RationalOverflow);
    mpq_class huge("123456789012345678901234567890");
    EXPECT_THROW(CheckedRational::from_mpq(huge), kfr::RationalOverflow);
}
