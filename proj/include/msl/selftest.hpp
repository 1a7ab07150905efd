#pragma once

// Built-in smoke checks for the `selftest` subcommand: a handful of known
// answers and structural identities, each cheap enough to run on every
// invocation.  The full test suite lives outside the library; this is the
// "is the installation sane" tier.

#include <msl/degeneracy.hpp>
#include <msl/density.hpp>
#include <msl/difference_operator.hpp>
#include <msl/linear_map.hpp>
#include <msl/measure.hpp>
#include <msl/oscint.hpp>
#include <msl/polynomial.hpp>
#include <msl/report.hpp>
#include <msl/witness.hpp>

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace msl {

struct SelftestResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

namespace detail {

inline Polynomial random_polynomial(std::mt19937_64& rng, std::size_t dim, unsigned deg,
                                    unsigned terms) {
    std::uniform_int_distribution<int> coeff(-5, 5);
    std::uniform_int_distribution<unsigned> expo(0, deg);
    Polynomial p(dim);
    for (unsigned t = 0; t < terms; ++t) {
        Exponents e(dim);
        unsigned left = deg;
        for (std::size_t i = 0; i < dim; ++i) {
            e[i] = expo(rng) % (left + 1);
            left -= e[i];
        }
        p.add_term(std::move(e), Rational(coeff(rng)));
    }
    return p;
}

inline std::vector<Rational> random_point(std::mt19937_64& rng, std::size_t dim) {
    std::uniform_int_distribution<int> num(-6, 6);
    std::uniform_int_distribution<int> den(1, 4);
    std::vector<Rational> x(dim);
    for (auto& v : x) v = Rational(num(rng), den(rng));
    return x;
}

}  // namespace detail

inline std::vector<SelftestResult> run_selftest() {
    std::vector<SelftestResult> results;
    auto check = [&](const std::string& name, const std::function<bool()>& body) {
        SelftestResult r{name, false, ""};
        try {
            r.passed = body();
            if (!r.passed) r.detail = "check returned false";
        } catch (const std::exception& e) {
            r.detail = e.what();
        }
        results.push_back(std::move(r));
    };

    check("difference pushforward", [] {
        // D_y (p o L) = (D_{L y} p) o L on random draws.
        std::mt19937_64 rng(7);
        for (int it = 0; it < 25; ++it) {
            const RatMatrix l = make_matrix({{1, 2, 0}, {0, Rational(1, 2), 3}});
            const Polynomial p = detail::random_polynomial(rng, 2, 3, 4);
            const std::vector<Rational> y = detail::random_point(rng, 3);
            const Polynomial lhs = difference(compose_linear(p, l), y);
            const Polynomial rhs = compose_linear(difference(p, l.apply(y)), l);
            if (lhs != rhs) return false;
        }
        return true;
    });

    check("difference Leibniz", [] {
        // D_v(fg) = D_v(f) g + f(.+v) D_v(g).
        std::mt19937_64 rng(11);
        for (int it = 0; it < 25; ++it) {
            const Polynomial f = detail::random_polynomial(rng, 2, 3, 4);
            const Polynomial g = detail::random_polynomial(rng, 2, 2, 3);
            const std::vector<Rational> v = detail::random_point(rng, 2);
            const Polynomial lhs = difference(f * g, v);
            const Polynomial rhs = difference(f, v) * g + shift(f, v) * difference(g, v);
            if (lhs != rhs) return false;
        }
        return true;
    });

    check("bilinear rectangle witness", [] {
        const Polynomial p = Polynomial::monomial(2, {1, 1}, 1);
        const MapSystem s = normalize_integer(MapSystem({{make_matrix({{1, 0}})},
                                                         {make_matrix({{0, 1}})}}));
        const SearchReport rep = find_witness(p, s);
        if (!rep.found() || rep.witness->size() != 4) return false;
        const Polynomial h = pattern_polynomial(p, *rep.witness);
        return h == Polynomial::monomial(3, {0, 0, 2}, 1);  // h(y, r) = r^2
    });

    check("trilinear parity witness", [] {
        const Polynomial p = Polynomial::monomial(3, {1, 1, 1}, 1);
        const MapSystem s = normalize_integer(
            MapSystem({{make_matrix({{0, 1, 0}, {0, 0, 1}})},
                       {make_matrix({{1, 0, 0}, {0, 0, 1}})},
                       {make_matrix({{1, 0, 0}, {0, 1, 0}})}}));
        const SearchReport rep = find_witness(p, s);
        if (!rep.found() || rep.witness->size() != 8) return false;
        const Polynomial h = pattern_polynomial(p, *rep.witness);
        return h == Polynomial::monomial(4, {0, 0, 0, 3}, -1);  // h(y, r) = -r^3
    });

    check("degeneracy decisions", [] {
        const MapSystem s = normalize_integer(MapSystem({{make_matrix({{1, 0}})},
                                                         {make_matrix({{0, 1}})}}));
        const DegeneracyResult mixed =
            decide_degeneracy(Polynomial::monomial(2, {1, 1}, 1), s);
        Polynomial split = Polynomial::variable(2, 0);  // x1 + x2^2 splits
        split.add_term({0, 2}, 1);
        const DegeneracyResult additive = decide_degeneracy(split, s);
        return !mixed.degenerate && mixed.unreachable_monomial == Exponents{1, 1} &&
               additive.degenerate && additive.decomposition.has_value();
    });

    check("progression-free maximum", [] {
        PatternInstance inst;
        inst.dim = 1;
        inst.shape = {{0}, {1}, {2}};
        inst.grid = 9;
        return max_pattern_free(inst).max_size == 5;
    });

    check("degenerate adversary coverage", [] {
        Polynomial p = Polynomial::variable(2, 0);
        p.add_term({0, 2}, 1);  // x1 + x2^2
        const MapSystem s = normalize_integer(MapSystem({{make_matrix({{1, 0}})},
                                                         {make_matrix({{0, 1}})}}));
        const DegeneracyResult dec = decide_degeneracy(p, s);
        if (!dec.degenerate) return false;
        Box box{{{-1, 1}, {-1, 1}}};
        const Rational eps(1, 100);
        const Adversary adv = degenerate_adversary(p, s, *dec.decomposition, eps, box);
        const SublevelReport rep = measure_sublevel(p, s, adv.fns, eps, box, 8);
        return rep.hits == rep.samples;
    });

    check("circle window measure", [] {
        std::vector<double> phi(2001);
        for (std::size_t k = 0; k < phi.size(); ++k)
            phi[k] = 40.0 * static_cast<double>(k) / 2000.0;
        return std::abs(circle_sublevel_measure(phi, 0.1) - 0.0325) < 1e-12;
    });

    check("witness csv round trip", [] {
        Witness w;
        w.points = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
        w.coeffs = {1, -1, -1, 1};
        const Witness back = witness_from_csv(witness_csv(w));
        return back.points == w.points && back.coeffs == w.coeffs;
    });

    return results;
}

}  // namespace msl
