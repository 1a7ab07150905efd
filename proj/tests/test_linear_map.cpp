#include <msl/linear_map.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace msl;

TEST_CASE("linear map basics", "[linear_map]") {
    const LinearMap m{make_matrix({{1, 2, 0}, {0, 1, 1}})};
    CHECK(m.domain_dim() == 3);
    CHECK(m.codomain_dim() == 2);
    const auto img = m.apply({Rational(1), Rational(1), Rational(2)});
    REQUIRE(img.size() == 2);
    CHECK(img[0] == 3);
    CHECK(img[1] == 3);
    CHECK(check_surjective(m));
    CHECK_FALSE(check_surjective(LinearMap{make_matrix({{1, 0}, {2, 0}})}));
}

TEST_CASE("kernel basis is canonical and annihilated", "[linear_map]") {
    const LinearMap m{make_matrix({{1, 0, 1}})};
    const auto basis = kernel_basis(m);
    REQUIRE(basis.size() == 2);
    for (const auto& v : basis) {
        // A v = 0.
        Rational dot = 0;
        for (std::size_t i = 0; i < 3; ++i) dot += m.matrix.at(0, i) * Rational(v[i]);
        CHECK(dot == 0);
        // Content one, positive first nonzero entry.
        Int content = 0;
        for (const Int& x : v) content = int_gcd(content, x);
        CHECK(content == 1);
        for (const Int& x : v) {
            if (x != 0) {
                CHECK(x > 0);
                break;
            }
        }
    }
    // Rational entries still give an integer kernel basis.
    const LinearMap half{make_matrix({{Rational(1, 2), Rational(1, 3)}})};
    const auto kb = kernel_basis(half);
    REQUIRE(kb.size() == 1);
    CHECK(Rational(1, 2) * Rational(kb[0][0]) + Rational(1, 3) * Rational(kb[0][1]) == 0);
}

TEST_CASE("map system validation", "[linear_map]") {
    CHECK_THROWS_WITH(MapSystem({LinearMap{make_matrix({{1, 0}, {2, 0}})}}),
                      Catch::Matchers::ContainsSubstring("not surjective"));
    CHECK_THROWS_WITH(MapSystem({LinearMap{make_matrix({{1, 0}})},
                                 LinearMap{make_matrix({{1, 0, 0}})}}),
                      Catch::Matchers::ContainsSubstring("map 2"));
    CHECK_THROWS_WITH(MapSystem({LinearMap{make_matrix({{1}, {0}})}}),
                      Catch::Matchers::ContainsSubstring("codomain exceeds domain"));
    CHECK_NOTHROW(MapSystem({LinearMap{make_matrix({{1, 0}})},
                             LinearMap{make_matrix({{0, 1}})}}));
    CHECK(MapSystem().empty());
    CHECK(MapSystem().domain_dim() == 0);
}

TEST_CASE("integer normalization", "[linear_map]") {
    const MapSystem s({LinearMap{make_matrix({{Rational(1, 2), 0}})},
                       LinearMap{make_matrix({{0, Rational(2, 3)}})}});
    CHECK_FALSE(s.integer_normalized());
    const MapSystem n = normalize_integer(s);
    CHECK(n.integer_normalized());
    CHECK(n.map(0).matrix.at(0, 0) == 1);
    CHECK(n.map(1).matrix.at(0, 1) == 2);
    REQUIRE(n.scales().size() == 2);
    CHECK(n.scales()[0] == 2);
    CHECK(n.scales()[1] == 3);
    // Idempotent.
    const MapSystem nn = normalize_integer(n);
    CHECK(nn.map(0).matrix == n.map(0).matrix);
    CHECK(nn.scales()[0] == 2);

    // Scaling a map preserves its fibers: points with equal images keep
    // equal images.
    const std::vector<Rational> a{Rational(2), Rational(5)};
    const std::vector<Rational> b{Rational(2), Rational(-7)};
    CHECK(s.map(0).apply(a) == s.map(0).apply(b));
    CHECK(n.map(0).apply(a) == n.map(0).apply(b));
}

TEST_CASE("invertible map detection", "[linear_map]") {
    const MapSystem with({LinearMap{make_matrix({{1, 0}, {0, 1}})}});
    CHECK(with.has_invertible_map());
    const MapSystem without({LinearMap{make_matrix({{1, 0}})},
                             LinearMap{make_matrix({{1, 1}})}});
    CHECK_FALSE(without.has_invertible_map());
}
