#pragma once

// Exact degeneracy decision for a phase polynomial against a map family.
//
// P is degenerate when it can be written as sum_j p_j(l_j(x)) with each p_j a
// polynomial.  If any such representation exists with measurable p_j, one
// exists with polynomial p_j of degree <= deg P, so the question reduces to
// membership of P in a finite-dimensional coefficient space spanned by
// composed monomials.  The decision is exact and two-sided: a degenerate
// verdict carries the decomposition, a nondegenerate verdict carries a dual
// certificate naming a monomial of P outside the span.
//
// A second, cheaper test composes finite-difference operators along kernel
// directions of the maps.  A product with one factor per map annihilates
// every sum_j p_j(l_j(x)), so a nonzero image certifies nondegeneracy; a zero
// image is inconclusive.

#include <msl/difference_operator.hpp>
#include <msl/linear_map.hpp>
#include <msl/matrix.hpp>
#include <msl/polynomial.hpp>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace msl {

/// Summands of a representation P = sum_j parts[j] o l_j; parts[j] has the
/// arity of map j's codomain.
struct Decomposition {
    std::vector<Polynomial> parts;
};

struct DegeneracyResult {
    bool degenerate = false;
    /// Present on a degenerate verdict.
    std::optional<Decomposition> decomposition;
    /// Present on a nondegenerate verdict: a monomial of P that no
    /// combination of composed p_j can reach.
    std::optional<Exponents> unreachable_monomial;
    /// Dimension of the monomial space of degree <= deg P not covered by the
    /// composed-monomial span (>= 1 exactly when nondegenerate).
    std::size_t span_codimension = 0;
};

inline void check_phase_against_system(const Polynomial& p, const MapSystem& s) {
    if (!s.empty() && p.dimension() != s.domain_dim())
        throw std::invalid_argument("phase arity " + std::to_string(p.dimension()) +
                                    " does not match map domain dimension " +
                                    std::to_string(s.domain_dim()));
}

inline DegeneracyResult decide_degeneracy(const Polynomial& p, const MapSystem& s) {
    check_phase_against_system(p, s);
    const std::size_t d = p.dimension();
    const unsigned cap = p.degree() < 0 ? 0u : static_cast<unsigned>(p.degree());
    const std::vector<Exponents> rows = monomials_up_to(d, cap);

    // Column group j holds the coefficient vectors of t^beta o l_j over all
    // monomials beta of degree <= deg P in the codomain variables.
    struct ColumnKey {
        std::size_t map;
        Exponents beta;
    };
    std::vector<ColumnKey> columns;
    for (std::size_t j = 0; j < s.size(); ++j)
        for (const Exponents& beta : monomials_up_to(s.map(j).codomain_dim(), cap))
            columns.push_back({j, beta});

    RatMatrix a(rows.size(), columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        const Polynomial composed = compose_linear(
            Polynomial::monomial(s.map(columns[c].map).codomain_dim(), columns[c].beta, 1),
            s.map(columns[c].map).matrix);
        for (std::size_t r = 0; r < rows.size(); ++r)
            a.at(r, c) = composed.coefficient(rows[r]);
    }
    std::vector<Rational> b(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) b[r] = p.coefficient(rows[r]);

    DegeneracyResult result;
    if (auto x = solve_canonical(a, b)) {
        result.degenerate = true;
        Decomposition dec;
        for (std::size_t j = 0; j < s.size(); ++j)
            dec.parts.emplace_back(s.map(j).codomain_dim());
        for (std::size_t c = 0; c < columns.size(); ++c)
            dec.parts[columns[c].map].add_term(columns[c].beta, (*x)[c]);
        // Exactness guard: reassemble and compare.
        Polynomial assembled(d);
        for (std::size_t j = 0; j < s.size(); ++j)
            assembled += compose_linear(dec.parts[j], s.map(j).matrix);
        if (assembled != p)
            throw std::logic_error("decide_degeneracy: decomposition failed to verify");
        result.decomposition = std::move(dec);
        return result;
    }

    // The certificate functional vanishes on the span but pairs to 1 with P,
    // so its first monomial shared with P witnesses unreachability.
    const auto cert = inconsistency_certificate(a, b);
    if (!cert) throw std::logic_error("decide_degeneracy: missing certificate");
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if ((*cert)[r] != 0 && b[r] != 0) {
            result.unreachable_monomial = rows[r];
            break;
        }
    }
    result.degenerate = false;
    result.span_codimension = rows.size() - a.rank();
    return result;
}

struct AnnihilatorResult {
    /// Operator with one kernel direction per map whose image of P is
    /// nonzero; absent if every tried combination annihilated P.
    std::optional<DifferenceOperator> op;
    Polynomial image;
    std::size_t combinations_tried = 0;

    bool found() const { return op.has_value(); }
};

/// Difference-product probe.  Requires every map to be a strict surjection
/// (d_j < d) so each kernel is nonzero.  Combinations are enumerated in
/// odometer order over the per-map kernel bases, capped to keep the probe
/// cheap; the exact decision procedure above stays authoritative.
inline AnnihilatorResult annihilator_test(const Polynomial& p, const MapSystem& s,
                                          std::size_t max_combinations = 512) {
    check_phase_against_system(p, s);
    if (s.empty()) throw std::invalid_argument("annihilator_test: empty map family");
    std::vector<std::vector<std::vector<Int>>> kernels;
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (s.map(j).codomain_dim() >= s.map(j).domain_dim())
            throw std::invalid_argument("annihilator_test: map " + std::to_string(j + 1) +
                                        " has full rank, kernel direction unavailable");
        kernels.push_back(kernel_basis(s.map(j)));
    }

    AnnihilatorResult result{std::nullopt, Polynomial(p.dimension()), 0};
    std::vector<std::size_t> pick(s.size(), 0);
    while (result.combinations_tried < max_combinations) {
        DifferenceOperator op(p.dimension());
        for (std::size_t j = 0; j < s.size(); ++j) op.multiply_by(kernels[j][pick[j]]);
        Polynomial image = apply_operator(op, p);
        ++result.combinations_tried;
        if (!image.is_zero()) {
            result.op = std::move(op);
            result.image = std::move(image);
            return result;
        }
        // Advance the odometer, last map fastest.
        std::size_t j = s.size();
        while (j > 0) {
            --j;
            if (++pick[j] < kernels[j].size()) break;
            pick[j] = 0;
            if (j == 0) return result;  // wrapped around: exhausted
        }
    }
    return result;
}

}  // namespace msl
