#include <msl/rational.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace msl;

TEST_CASE("gcd and lcm", "[rational]") {
    CHECK(int_gcd(Int(12), Int(18)) == 6);
    CHECK(int_gcd(Int(-12), Int(18)) == 6);
    CHECK(int_gcd(Int(0), Int(7)) == 7);
    CHECK(int_lcm(Int(4), Int(6)) == 12);
    CHECK(int_lcm(Int(1), Int(9)) == 9);
}

TEST_CASE("floor and ceiling are exact on negatives", "[rational]") {
    CHECK(rat_floor(Rational(7, 2)) == 3);
    CHECK(rat_floor(Rational(-7, 2)) == -4);
    CHECK(rat_floor(Rational(6)) == 6);
    CHECK(rat_floor(Rational(-6)) == -6);
    CHECK(rat_floor(Rational(0)) == 0);
    CHECK(rat_ceil(Rational(7, 2)) == 4);
    CHECK(rat_ceil(Rational(-7, 2)) == -3);
    CHECK(rat_ceil(Rational(5)) == 5);
}

TEST_CASE("floor identity floor(r) <= r < floor(r) + 1", "[rational][property]") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> num(-500, 500);
    std::uniform_int_distribution<long> den(1, 40);
    for (int k = 0; k < 500; ++k) {
        const Rational r(num(rng), den(rng));
        const Int f = rat_floor(r);
        CHECK(Rational(f) <= r);
        CHECK(r < Rational(f + 1));
        CHECK(rat_ceil(r) == -rat_floor(-r));
    }
}

TEST_CASE("absolute value and integrality", "[rational]") {
    CHECK(rat_abs(Rational(-3, 4)) == Rational(3, 4));
    CHECK(rat_abs(Rational(3, 4)) == Rational(3, 4));
    CHECK(rat_abs(Rational(0)) == 0);
    CHECK(is_integer(Rational(8, 2)));
    CHECK_FALSE(is_integer(Rational(1, 3)));
}

TEST_CASE("parsing accepts canonical and reducible forms", "[rational]") {
    CHECK(parse_rational("3") == Rational(3));
    CHECK(parse_rational("-3") == Rational(-3));
    CHECK(parse_rational("3/4") == Rational(3, 4));
    CHECK(parse_rational("-3/4") == Rational(-3, 4));
    CHECK(parse_rational("6/8") == Rational(3, 4));
    CHECK(parse_rational("0/5") == 0);
}

TEST_CASE("parsing rejects malformed text", "[rational]") {
    CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1.5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("/2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/2/3"), std::invalid_argument);
}

TEST_CASE("format is canonical and round-trips", "[rational]") {
    CHECK(format_rational(Rational(3, 4)) == "3/4");
    CHECK(format_rational(Rational(-3, 4)) == "-3/4");
    CHECK(format_rational(Rational(4, 2)) == "2");
    CHECK(format_rational(Rational(0)) == "0");

    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> num(-10000, 10000);
    std::uniform_int_distribution<long> den(1, 999);
    for (int k = 0; k < 500; ++k) {
        const Rational r(num(rng), den(rng));
        CHECK(parse_rational(format_rational(r)) == r);
    }
}

TEST_CASE("conversion helpers", "[rational]") {
    CHECK(to_double(Rational(1, 2)) == 0.5);
    CHECK(to_double(Rational(-3)) == -3.0);
    const std::vector<Int> v{Int(1), Int(-2), Int(0)};
    const std::vector<Rational> r = to_rational_vector(v);
    REQUIRE(r.size() == 3);
    CHECK(r[0] == 1);
    CHECK(r[1] == -2);
    CHECK(r[2] == 0);
}
