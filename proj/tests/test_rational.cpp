#include <catch2/catch_amalgamated.hpp>

#include "pcrit/rational.hpp"
#include "support.hpp"

using namespace pcrit;

TEST_CASE("rational parsing accepts integers and fractions", "[rational]") {
    CHECK(parse_rational("0") == Rational(0));
    CHECK(parse_rational("-7") == Rational(-7));
    CHECK(parse_rational("3/4") == Rational(3, 4));
    CHECK(parse_rational("-10/4") == Rational(-5, 2));
    CHECK(parse_rational("+5/15") == Rational(1, 3));
}

TEST_CASE("rational parsing rejects malformed input", "[rational]") {
    for (const char* bad : {"", "1/0", "1.5", "a", "1/2/3", "2 /3", "0x10", "1e3", "/3", "3/"}) {
        INFO("input: '" << bad << "'");
        CHECK_THROWS_AS(parse_rational(bad), InputError);
    }
}

TEST_CASE("rational formatting is lowest-terms num/den", "[rational]") {
    CHECK(rational_to_string(Rational(6, 4)) == "3/2");
    CHECK(rational_to_string(Rational(-6, 3)) == "-2");
    CHECK(rational_to_string(Rational(0)) == "0");
    CHECK(rational_to_string(Rational(5, 24)) == "5/24");
}

TEST_CASE("parse and print round-trip on random rationals", "[rational]") {
    auto g = testsupport::make_rng(101);
    for (int i = 0; i < 200; ++i) {
        const Rational q = testsupport::rand_rational(g, 1000, 997);
        CHECK(parse_rational(rational_to_string(q)) == q);
    }
}

TEST_CASE("factorials and binomials", "[rational]") {
    CHECK(factorial(0) == 1);
    CHECK(factorial(5) == 120);
    CHECK(binomial(4, 2) == 6);
    CHECK(binomial(6, 0) == 1);
    CHECK(binomial(6, 6) == 1);
    CHECK(binomial(3, 5) == 0);
}

TEST_CASE("exact square roots are detected precisely", "[rational]") {
    CHECK(exact_sqrt(Rational(0)) == Rational(0));
    CHECK(exact_sqrt(Rational(9, 4)) == Rational(3, 2));
    CHECK(exact_sqrt(Rational(49)) == Rational(7));
    CHECK_FALSE(exact_sqrt(Rational(2)).has_value());
    CHECK_FALSE(exact_sqrt(Rational(8, 9)).has_value());
    CHECK_FALSE(exact_sqrt(Rational(-1)).has_value());
    // A square with huge coprime numerator and denominator.
    const Rational big = Rational(1234567891) * Rational(1234567891) / Rational(99991 * 99991ll);
    CHECK(exact_sqrt(big) == Rational(1234567891, 99991));
}

TEST_CASE("Gaussian rational arithmetic", "[rational]") {
    const GaussRational z(Rational(2), Rational(-3));
    const GaussRational w(Rational(1, 2), Rational(5));
    CHECK((z * w) == GaussRational(Rational(16), Rational(17, 2)));
    CHECK((z + w) == GaussRational(Rational(5, 2), Rational(2)));
    CHECK(z.conj() == GaussRational(Rational(2), Rational(3)));
    CHECK(z.norm2() == Rational(13));
    // i^k cycling: z, iz, -z, -iz.
    CHECK(z.times_i_pow(0) == z);
    CHECK(z.times_i_pow(1) == GaussRational(Rational(3), Rational(2)));
    CHECK(z.times_i_pow(2) == -z);
    CHECK(z.times_i_pow(3) == GaussRational(Rational(-3), Rational(-2)));
    CHECK(z.times_i_pow(4) == z);
    CHECK(z.times_i_pow(-1) == z.times_i_pow(3));
}

TEST_CASE("quadratic extension collapses perfect squares", "[rational]") {
    // 1 + 2*sqrt(9/4) = 1 + 3 = 4, a plain rational.
    const ExtScalar x = ExtScalar::with_root(Rational(1), Rational(2), Rational(9, 4));
    CHECK(x.is_rational());
    CHECK(x.rational_value() == Rational(4));
    // sqrt(2) stays irrational.
    const ExtScalar y = ExtScalar::with_root(Rational(0), Rational(1), Rational(2));
    CHECK_FALSE(y.is_rational());
    CHECK_THROWS_AS(y.rational_value(), Error);
}

TEST_CASE("extension arithmetic and canonical equality", "[rational]") {
    const Rational t2(5);
    const auto mk = [&](int a, int b) { return ExtScalar::with_root(Rational(a), Rational(b), t2); };
    // (1 + sqrt5)(1 - sqrt5) = 1 - 5 = -4.
    CHECK(mk(1, 1) * mk(1, -1) == ExtScalar(Rational(-4)));
    // (2 + 3 sqrt5) + (-2 - 3 sqrt5) = 0, and equality sees through representation.
    CHECK((mk(2, 3) + mk(-2, -3)).is_zero());
    CHECK(mk(2, 3) - mk(2, 3) == ExtScalar(0));
    // Squaring: (a + b sqrt5)^2 = a^2 + 5 b^2 + 2ab sqrt5.
    const ExtScalar sq = mk(2, 3) * mk(2, 3);
    CHECK(sq.rational_part() == Rational(49));
    CHECK(sq.root_part() == Rational(12));
}

TEST_CASE("extension sign is exact even near zero", "[rational]") {
    // 7 - 5 sqrt2 < 0 because 49 < 50.
    CHECK(ExtScalar::with_root(Rational(7), Rational(-5), Rational(2)).sign() == -1);
    // 99/70 - sqrt2 > 0 because 9801/4900 > 2 (a classic close approximant).
    CHECK(ExtScalar::with_root(Rational(99, 70), Rational(-1), Rational(2)).sign() == 1);
    // 3 - sqrt9 would collapse; build the genuine tie b*tau - b*tau instead.
    const ExtScalar t = ExtScalar::with_root(Rational(0), Rational(4), Rational(3));
    CHECK((t - t).sign() == 0);
    CHECK(ExtScalar(0).sign() == 0);
    CHECK(ExtScalar(Rational(-1, 7)).sign() == -1);
}

TEST_CASE("extension sign matches floating evaluation away from ties", "[rational]") {
    auto g = testsupport::make_rng(102);
    for (int i = 0; i < 300; ++i) {
        const Rational a = testsupport::rand_rational(g, 12, 7);
        const Rational b = testsupport::rand_rational(g, 12, 7);
        const Rational t2 = Rational(testsupport::rand_int(g, 0, 30));
        const ExtScalar x = ExtScalar::with_root(a, b, t2);
        const double v = x.to_double();
        if (std::abs(v) < 1e-9) continue; // too close to call in doubles
        CHECK(x.sign() == (v > 0 ? 1 : -1));
    }
}

TEST_CASE("mixing distinct quadratic extensions is rejected", "[rational]") {
    const ExtScalar r2 = ExtScalar::with_root(Rational(0), Rational(1), Rational(2));
    const ExtScalar r3 = ExtScalar::with_root(Rational(0), Rational(1), Rational(3));
    CHECK_THROWS_AS(r2 + r3, Error);
    CHECK_THROWS_AS(r2 * r3, Error);
    // A plain rational is compatible with any extension.
    CHECK((r2 + ExtScalar(1)) * ExtScalar(Rational(2)) ==
          ExtScalar::with_root(Rational(2), Rational(2), Rational(2)));
}

TEST_CASE("extension comparisons order consistently", "[rational]") {
    const auto mk = [](int a, int b) { return ExtScalar::with_root(Rational(a), Rational(b), Rational(2)); };
    CHECK(mk(0, 1) > ExtScalar(1));       // sqrt2 > 1
    CHECK(mk(0, 1) < ExtScalar(2));       // sqrt2 < 2
    CHECK(mk(1, 1) >= mk(1, 1));
    CHECK(mk(-3, 2) <= mk(0, 1));         // -3 + 2 sqrt2 < sqrt2 because sqrt2 < 3
}
