#include <msl/degeneracy.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace msl;

namespace {

MapSystem axes2() {
    return MapSystem({LinearMap{make_matrix({{1, 0}})}, LinearMap{make_matrix({{0, 1}})}});
}

Polynomial reassemble(const Decomposition& dec, const MapSystem& s, std::size_t d) {
    Polynomial out(d);
    for (std::size_t j = 0; j < s.size(); ++j)
        out += compose_linear(dec.parts[j], s.map(j).matrix);
    return out;
}

}  // namespace

TEST_CASE("bilinear phase is nondegenerate for the coordinate axes", "[degeneracy]") {
    const Polynomial p = Polynomial::monomial(2, {1, 1}, 1);
    const DegeneracyResult res = decide_degeneracy(p, axes2());
    CHECK_FALSE(res.degenerate);
    REQUIRE(res.unreachable_monomial.has_value());
    CHECK(*res.unreachable_monomial == Exponents{1, 1});
    // Composed monomials span {1, x1, x1^2, x2, x2^2}: codimension 1 inside
    // the six monomials of degree <= 2.
    CHECK(res.span_codimension == 1);
    CHECK_FALSE(res.decomposition.has_value());
}

TEST_CASE("additively split phase is degenerate with a verified decomposition",
          "[degeneracy]") {
    Polynomial p(2);
    p.add_term({1, 0}, 1);
    p.add_term({0, 2}, 1);
    const MapSystem s = axes2();
    const DegeneracyResult res = decide_degeneracy(p, s);
    REQUIRE(res.degenerate);
    REQUIRE(res.decomposition.has_value());
    REQUIRE(res.decomposition->parts.size() == 2);
    CHECK(res.decomposition->parts[0].dimension() == 1);
    CHECK(reassemble(*res.decomposition, s, 2) == p);
    CHECK(res.span_codimension == 0);
}

TEST_CASE("any quadratic is degenerate against three distinct directions", "[degeneracy]") {
    const MapSystem three({LinearMap{make_matrix({{1, 0}})},
                           LinearMap{make_matrix({{0, 1}})},
                           LinearMap{make_matrix({{1, 1}})}});
    std::mt19937_64 rng(71);
    std::uniform_int_distribution<int> c(-4, 4);
    for (int k = 0; k < 30; ++k) {
        Polynomial q(2);
        q.add_term({2, 0}, c(rng));
        q.add_term({1, 1}, c(rng));
        q.add_term({0, 2}, c(rng));
        q.add_term({1, 0}, c(rng));
        q.add_term({0, 1}, c(rng));
        q.add_term({0, 0}, c(rng));
        const DegeneracyResult res = decide_degeneracy(q, three);
        CHECK(res.degenerate);
        if (res.decomposition) CHECK(reassemble(*res.decomposition, three, 2) == q);
    }
    // A cubic escapes the same three directions.
    const Polynomial cubic = Polynomial::monomial(2, {2, 1}, 1);
    CHECK_FALSE(decide_degeneracy(cubic, three).degenerate);
}

TEST_CASE("diagonal directions absorb the bilinear phase", "[degeneracy]") {
    // x1 x2 = ((x1+x2)^2 - (x1-x2)^2) / 4.
    const MapSystem diag({LinearMap{make_matrix({{1, 1}})},
                          LinearMap{make_matrix({{1, -1}})}});
    const Polynomial p = Polynomial::monomial(2, {1, 1}, 1);
    const DegeneracyResult res = decide_degeneracy(p, diag);
    REQUIRE(res.degenerate);
    CHECK(reassemble(*res.decomposition, diag, 2) == p);
}

TEST_CASE("empty family and zero phase edge cases", "[degeneracy]") {
    const MapSystem none;
    CHECK_FALSE(decide_degeneracy(Polynomial::variable(2, 0), none).degenerate);
    CHECK(decide_degeneracy(Polynomial(2), none).degenerate);
    CHECK(decide_degeneracy(Polynomial(2), axes2()).degenerate);
}

TEST_CASE("a full-rank map makes everything degenerate", "[degeneracy]") {
    const MapSystem identity({LinearMap{make_matrix({{1, 0}, {0, 1}})}});
    const Polynomial p = Polynomial::monomial(2, {2, 1}, 1);
    const DegeneracyResult res = decide_degeneracy(p, identity);
    REQUIRE(res.degenerate);
    CHECK(reassemble(*res.decomposition, identity, 2) == p);
}

TEST_CASE("squared height is nondegenerate for cone directions", "[degeneracy]") {
    // Directions v with (v3)^2 = (v1)^2 + (v2)^2; the phase x3^2 stays
    // outside the span no matter how many such directions are used.
    const MapSystem cone({LinearMap{make_matrix({{1, 0, 1}})},
                          LinearMap{make_matrix({{0, 1, 1}})},
                          LinearMap{make_matrix({{-1, 0, 1}})},
                          LinearMap{make_matrix({{0, -1, 1}})},
                          LinearMap{make_matrix({{3, 4, 5}})}});
    const Polynomial p = Polynomial::monomial(3, {0, 0, 2}, 1);
    const DegeneracyResult res = decide_degeneracy(p, cone);
    CHECK_FALSE(res.degenerate);
    CHECK(res.span_codimension == 1);
    REQUIRE(res.unreachable_monomial.has_value());
    // Off the cone (directions with (v3)^2 != (v1)^2 + (v2)^2) two generic
    // directions already absorb a rank-2 quadratic, so the certificate is
    // really about the cone relation, not about counting maps.
    const MapSystem cone3({LinearMap{make_matrix({{1, 0, 1}})},
                           LinearMap{make_matrix({{0, 1, 1}})},
                           LinearMap{make_matrix({{-1, 0, 1}})}});
    CHECK_FALSE(decide_degeneracy(p, cone3).degenerate);
}

TEST_CASE("phase arity must match the family", "[degeneracy]") {
    CHECK_THROWS_AS(decide_degeneracy(Polynomial::variable(3, 0), axes2()),
                    std::invalid_argument);
}

TEST_CASE("annihilator probe certifies the bilinear phase", "[degeneracy]") {
    const Polynomial p = Polynomial::monomial(2, {1, 1}, 1);
    const AnnihilatorResult res = annihilator_test(p, axes2());
    REQUIRE(res.found());
    CHECK(res.op->order() == 2);
    CHECK(res.image == Polynomial::constant(2, 1));
    CHECK(res.combinations_tried >= 1);
}

TEST_CASE("annihilator probe rejects unusable families", "[degeneracy]") {
    CHECK_THROWS_AS(annihilator_test(Polynomial::variable(2, 0), MapSystem()),
                    std::invalid_argument);
    const MapSystem identity({LinearMap{make_matrix({{1, 0}, {0, 1}})}});
    CHECK_THROWS_AS(annihilator_test(Polynomial::variable(2, 0), identity),
                    std::invalid_argument);
}

TEST_CASE("annihilator probe is sound on degenerate phases", "[degeneracy][property]") {
    // Phases built as sums p_j o l_j are annihilated by every combination.
    std::mt19937_64 rng(73);
    std::uniform_int_distribution<int> c(-3, 3);
    std::uniform_int_distribution<unsigned> e(0, 3);
    const MapSystem s({LinearMap{make_matrix({{1, 0, 0}, {0, 1, 0}})},
                       LinearMap{make_matrix({{0, 0, 1}})}});
    for (int k = 0; k < 50; ++k) {
        Polynomial p1(2), p2(1);
        for (int t = 0; t < 3; ++t) {
            p1.add_term({e(rng), e(rng)}, c(rng));
            p2.add_term({e(rng)}, c(rng));
        }
        const Polynomial p =
            compose_linear(p1, s.map(0).matrix) + compose_linear(p2, s.map(1).matrix);
        const AnnihilatorResult res = annihilator_test(p, s);
        CHECK_FALSE(res.found());
        CHECK(decide_degeneracy(p, s).degenerate);
    }
}
