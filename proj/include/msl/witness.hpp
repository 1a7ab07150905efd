#pragma once

// Finite witness sets.
//
// A witness against (P, {l_j}) is a finite set S of lattice points with
// scalars c_s such that sum_s c_s P(s) != 0 while, for every map l_j and
// every function f, sum_s c_s f(l_j(s)) = 0.  The second condition holds for
// all f exactly when the coefficients sum to zero on every fiber of every
// map, so both verification and existence are finite exact computations:
// a witness supported on S exists iff the restriction P|_S lies outside the
// span of the fiber indicator vectors.
//
// The searcher scans scaled cubes S = M * {-N..N}^d in a fixed schedule.
// When the span test fails (a witness exists), extraction proceeds in two
// tiers: first a structured inclusion-exclusion functional built from one
// kernel direction per map (this yields the small signed supports such as
// rectangles and parity cubes), then, as a completeness fallback, a row
// functional from exact elimination.

#include <msl/degeneracy.hpp>
#include <msl/difference_operator.hpp>
#include <msl/linear_map.hpp>
#include <msl/matrix.hpp>
#include <msl/polynomial.hpp>

#include <algorithm>
#include <bit>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace msl {

struct Witness {
    std::vector<std::vector<Int>> points;  // distinct lattice points, lex sorted
    std::vector<Rational> coeffs;          // same length; may include zeros (origin)

    std::size_t size() const { return points.size(); }

    bool contains_origin() const {
        for (const auto& p : points) {
            bool all_zero = true;
            for (const Int& x : p)
                if (x != 0) all_zero = false;
            if (all_zero) return true;
        }
        return false;
    }
};

/// Grouping of point indices by image under one map, ordered by image value.
struct FiberPartition {
    std::vector<std::pair<std::vector<Rational>, std::vector<std::size_t>>> groups;
};

inline FiberPartition fiber_partition(const LinearMap& m,
                                      const std::vector<std::vector<Int>>& points) {
    std::map<std::vector<Rational>, std::vector<std::size_t>> buckets;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != m.domain_dim())
            throw std::invalid_argument("fiber_partition: point arity mismatch");
        buckets[m.apply(to_rational_vector(points[i]))].push_back(i);
    }
    FiberPartition part;
    part.groups.assign(buckets.begin(), buckets.end());
    return part;
}

namespace detail {

/// Constraint matrix whose rows are fiber indicators: one row per (map,
/// fiber), a 1 in each column whose point lies in the fiber.
inline RatMatrix fiber_constraint_matrix(const std::vector<std::vector<Int>>& points,
                                         const MapSystem& s) {
    std::size_t total_fibers = 0;
    std::vector<FiberPartition> parts;
    for (std::size_t j = 0; j < s.size(); ++j) {
        parts.push_back(fiber_partition(s.map(j), points));
        total_fibers += parts.back().groups.size();
    }
    RatMatrix m(total_fibers, points.size());
    std::size_t row = 0;
    for (const FiberPartition& part : parts)
        for (const auto& [image, members] : part.groups) {
            for (std::size_t i : members) m.at(row, i) = 1;
            ++row;
        }
    return m;
}

}  // namespace detail

/// Basis of the coefficient vectors on `points` that sum to zero on every
/// fiber of every map.  A witness supported on `points` is exactly an element
/// of this space pairing nontrivially with P|_points.
inline std::vector<std::vector<Rational>> witness_space(
    const std::vector<std::vector<Int>>& points, const MapSystem& s) {
    if (!s.integer_normalized())
        throw std::invalid_argument("witness_space: map system must be integer-normalized");
    return nullspace_basis(detail::fiber_constraint_matrix(points, s));
}

struct WitnessCheck {
    bool valid = false;
    Rational phase_pairing;  // sum_s c_s P(s)
    std::string diagnostic;
};

inline WitnessCheck verify_witness(const Witness& w, const Polynomial& p,
                                   const MapSystem& s) {
    WitnessCheck out;
    if (w.points.size() != w.coeffs.size()) {
        out.diagnostic = "point/coefficient count mismatch";
        return out;
    }
    for (std::size_t i = 0; i < w.points.size(); ++i) {
        if (w.points[i].size() != p.dimension()) {
            out.diagnostic = "point arity mismatch";
            return out;
        }
        for (std::size_t k = i + 1; k < w.points.size(); ++k)
            if (w.points[i] == w.points[k]) {
                out.diagnostic = "duplicate point";
                return out;
            }
    }
    check_phase_against_system(p, s);
    for (std::size_t i = 0; i < w.points.size(); ++i)
        out.phase_pairing += w.coeffs[i] * p.eval(to_rational_vector(w.points[i]));
    if (out.phase_pairing == 0) {
        out.diagnostic = "phase pairing vanishes";
        return out;
    }
    for (std::size_t j = 0; j < s.size(); ++j) {
        const FiberPartition part = fiber_partition(s.map(j), w.points);
        for (const auto& [image, members] : part.groups) {
            Rational sum = 0;
            for (std::size_t i : members) sum += w.coeffs[i];
            if (sum != 0) {
                out.diagnostic = "map " + std::to_string(j + 1) +
                                 ": coefficients do not cancel on a fiber";
                return out;
            }
        }
    }
    out.valid = true;
    return out;
}

/// Rescales coefficients to integers with content 1.  Signs are preserved;
/// already-integral witnesses with coprime coefficients come back unchanged.
inline Witness integerize(const Witness& w) {
    Witness out = w;
    Int den_lcm = 1;
    for (const Rational& c : w.coeffs) den_lcm = int_lcm(den_lcm, rat_den(c));
    Int content = 0;
    std::vector<Int> scaled(w.coeffs.size());
    for (std::size_t i = 0; i < w.coeffs.size(); ++i) {
        scaled[i] = rat_num(w.coeffs[i]) * (den_lcm / rat_den(w.coeffs[i]));
        content = int_gcd(content, scaled[i]);
    }
    if (content == 0) throw std::invalid_argument("integerize: zero witness");
    for (std::size_t i = 0; i < w.coeffs.size(); ++i)
        out.coeffs[i] = Rational(scaled[i] / content);
    return out;
}

/// h(y, r) = sum_s c_s P(y + r s), a polynomial in (y_1..y_d, r).  The origin
/// carries coefficient 0 when adjoined, so it never changes h.  When a point
/// configuration x + rS sits inside a sublevel set at height epsilon, the
/// triangle inequality forces |h(x, r)| <= (sum_s |c_s|) * epsilon; that is
/// the exclusion inequality the scanners check.
inline Polynomial pattern_polynomial(const Polynomial& p, const Witness& w) {
    const std::size_t d = p.dimension();
    Polynomial h(d + 1);
    for (std::size_t i = 0; i < w.points.size(); ++i) {
        if (w.points[i].size() != d)
            throw std::invalid_argument("pattern_polynomial: point arity mismatch");
        if (w.coeffs[i] == 0) continue;
        RatMatrix l(d, d + 1);
        for (std::size_t k = 0; k < d; ++k) {
            l.at(k, k) = 1;
            l.at(k, d) = Rational(w.points[i][k]);
        }
        h += w.coeffs[i] * compose_linear(p, l);
    }
    return h;
}

struct SearchSchedule {
    unsigned radius_max = 6;           // cubes {-N..N}^d for N = 1..radius_max
    std::vector<Int> moduli = {1, 2};  // lattice scales tried in order
};

struct SearchReport {
    std::optional<Witness> witness;
    Int modulus = 0;      // scale at which the witness was found
    unsigned radius = 0;  // cube radius at which the witness was found
    unsigned max_radius_tried = 0;
    std::size_t span_tests = 0;
    std::size_t largest_cube = 0;
    std::string note;

    bool found() const { return witness.has_value(); }
};

namespace detail {

inline std::vector<std::vector<Int>> scaled_cube(std::size_t d, unsigned n, const Int& m) {
    std::vector<std::vector<Int>> pts;
    std::vector<long> v(d, -static_cast<long>(n));
    const long lo = -static_cast<long>(n), hi = static_cast<long>(n);
    while (true) {
        std::vector<Int> p(d);
        for (std::size_t i = 0; i < d; ++i) p[i] = Int(v[i]) * m;
        pts.push_back(std::move(p));
        std::size_t i = d;
        bool done = false;
        while (i > 0) {
            --i;
            if (++v[i] <= hi) break;
            v[i] = lo;
            if (i == 0) done = true;
        }
        if (done) return pts;
    }
}

/// Span test over the integers: is P restricted to `points` a combination of
/// fiber indicators?  Uses fraction-free elimination; values of P are cleared
/// to integers first (scaling the right-hand side cannot change consistency).
inline bool phase_in_fiber_span(const Polynomial& p, const MapSystem& s,
                                const std::vector<std::vector<Int>>& points) {
    std::vector<Rational> values(points.size());
    Int den_lcm = 1;
    for (std::size_t i = 0; i < points.size(); ++i) {
        values[i] = p.eval(to_rational_vector(points[i]));
        den_lcm = int_lcm(den_lcm, rat_den(values[i]));
    }
    std::size_t total_fibers = 0;
    std::vector<FiberPartition> parts;
    for (std::size_t j = 0; j < s.size(); ++j) {
        parts.push_back(fiber_partition(s.map(j), points));
        total_fibers += parts.back().groups.size();
    }
    IntMatrix m(points.size(), total_fibers + 1);
    std::size_t col = 0;
    for (const FiberPartition& part : parts) {
        for (const auto& [image, members] : part.groups) {
            for (std::size_t i : members) m.at(i, col) = 1;
            ++col;
        }
    }
    for (std::size_t i = 0; i < points.size(); ++i)
        m.at(i, total_fibers) = rat_num(values[i]) * (den_lcm / rat_den(values[i]));
    return m.augmented_consistent();
}

/// Drops zero coefficients, flips sign so the lex-first support point is
/// positive, re-adjoins the origin with coefficient 0, integerizes.
inline Witness canonicalize_witness(std::map<std::vector<Int>, Rational> support,
                                    std::size_t d) {
    for (auto it = support.begin(); it != support.end();)
        it = (it->second == 0) ? support.erase(it) : std::next(it);
    if (support.empty()) throw std::logic_error("canonicalize_witness: empty support");
    const bool flip = support.begin()->second < 0;
    support.emplace(std::vector<Int>(d, Int(0)), Rational(0));  // no-op if present
    Witness w;
    for (auto& [pt, c] : support) {
        w.points.push_back(pt);
        w.coeffs.push_back(flip ? Rational(-c) : c);
    }
    return integerize(w);
}

/// Tier A: inclusion-exclusion functional of the operator prod_j D_{M u_j}
/// with u_j in ker(l_j), anchored where its image polynomial is nonzero.
/// Each factor collapses the corresponding map's fibers, so cancellation
/// holds by construction; the anchor guarantees a nonzero phase pairing.
inline std::optional<Witness> structured_witness(const Polynomial& p, const MapSystem& s,
                                                 const Int& modulus, unsigned radius,
                                                 std::size_t max_combinations = 512) {
    const std::size_t d = p.dimension();
    if (s.empty()) return std::nullopt;
    std::vector<std::vector<std::vector<Int>>> kernels;
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (s.map(j).codomain_dim() >= s.map(j).domain_dim()) return std::nullopt;
        kernels.push_back(kernel_basis(s.map(j)));
        if (kernels.back().empty()) return std::nullopt;
    }
    const long n = static_cast<long>(radius);
    std::vector<std::size_t> pick(s.size(), 0);
    std::size_t tried = 0;
    while (tried < max_combinations) {
        ++tried;
        std::vector<std::vector<Int>> dirs;
        DifferenceOperator op(d);
        for (std::size_t j = 0; j < s.size(); ++j) {
            std::vector<Int> u = kernels[j][pick[j]];
            for (Int& x : u) x *= modulus;
            op.multiply_by(u);
            dirs.push_back(std::move(u));
        }
        const Polynomial g = apply_operator(op, p);
        if (!g.is_zero()) {
            // Subset sums of the directions fix how far the support spreads;
            // the anchor must keep every corner inside the cube.
            const std::size_t nsub = std::size_t(1) << s.size();
            std::vector<std::vector<Int>> offsets(nsub, std::vector<Int>(d, Int(0)));
            for (std::size_t t = 0; t < nsub; ++t)
                for (std::size_t j = 0; j < s.size(); ++j)
                    if (t & (std::size_t(1) << j))
                        for (std::size_t i = 0; i < d; ++i) offsets[t][i] += dirs[j][i];
            std::vector<Int> off_min(d), off_max(d);
            for (std::size_t i = 0; i < d; ++i) {
                off_min[i] = off_max[i] = offsets[0][i];
                for (std::size_t t = 1; t < nsub; ++t) {
                    if (offsets[t][i] < off_min[i]) off_min[i] = offsets[t][i];
                    if (offsets[t][i] > off_max[i]) off_max[i] = offsets[t][i];
                }
            }
            // Anchor range in cube units: -N*M - off_min <= x0 <= N*M - off_max.
            std::vector<Int> lo(d), hi(d);
            bool fits = true;
            for (std::size_t i = 0; i < d; ++i) {
                lo[i] = -Int(n) * modulus - off_min[i];
                hi[i] = Int(n) * modulus - off_max[i];
                // Anchors live on the scaled lattice.
                lo[i] = rat_ceil(Rational(lo[i], modulus)) * modulus;
                hi[i] = rat_floor(Rational(hi[i], modulus)) * modulus;
                if (lo[i] > hi[i]) fits = false;
            }
            if (fits) {
                std::vector<Int> x0 = lo;
                while (true) {
                    if (g.eval(to_rational_vector(x0)) != 0) {
                        std::map<std::vector<Int>, Rational> support;
                        for (std::size_t t = 0; t < nsub; ++t) {
                            std::vector<Int> pt(d);
                            for (std::size_t i = 0; i < d; ++i) pt[i] = x0[i] + offsets[t][i];
                            const int parity =
                                (s.size() - std::popcount(t)) % 2 == 0 ? 1 : -1;
                            support[std::move(pt)] += parity;
                        }
                        return canonicalize_witness(std::move(support), d);
                    }
                    std::size_t i = d;
                    bool done = false;
                    while (i > 0) {
                        --i;
                        x0[i] += modulus;
                        if (x0[i] <= hi[i]) break;
                        x0[i] = lo[i];
                        if (i == 0) done = true;
                    }
                    if (done) break;
                }
            }
        }
        std::size_t j = s.size();
        bool wrapped = false;
        while (j > 0) {
            --j;
            if (++pick[j] < kernels[j].size()) break;
            pick[j] = 0;
            if (j == 0) wrapped = true;
        }
        if (wrapped) break;
    }
    return std::nullopt;
}

/// Tier B: exact elimination.  The certificate c satisfies c^T A = 0 over the
/// fiber indicator columns and c^T (P|_S) = 1, which is verbatim the witness
/// condition.  Always succeeds when the span test failed.
inline Witness elimination_witness(const Polynomial& p, const MapSystem& s,
                                   const std::vector<std::vector<Int>>& points) {
    const RatMatrix constraints = fiber_constraint_matrix(points, s);
    // Rows of `constraints` are fibers; the span-test matrix is its transpose.
    const RatMatrix a = constraints.transposed();
    std::vector<Rational> b(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        b[i] = p.eval(to_rational_vector(points[i]));
    const auto cert = inconsistency_certificate(a, b);
    if (!cert) throw std::logic_error("elimination_witness: span test disagreed");
    std::map<std::vector<Int>, Rational> support;
    for (std::size_t i = 0; i < points.size(); ++i)
        if ((*cert)[i] != 0) support[points[i]] = (*cert)[i];
    return canonicalize_witness(std::move(support), p.dimension());
}

}  // namespace detail

/// Scans scaled cubes for a witness.  Returns the first one found (verified
/// and canonicalized) or an exhaustion report.  For families containing a
/// full-rank map no witness can exist (all coefficient masses cancel
/// pointwise), so the search reports exhaustion immediately.
inline SearchReport find_witness(const Polynomial& p, const MapSystem& s,
                                 const SearchSchedule& schedule = {}) {
    check_phase_against_system(p, s);
    if (!s.integer_normalized())
        throw std::invalid_argument("find_witness: map system must be integer-normalized");
    if (schedule.radius_max == 0 || schedule.moduli.empty())
        throw std::invalid_argument("find_witness: empty schedule");
    for (const Int& m : schedule.moduli)
        if (m <= 0) throw std::invalid_argument("find_witness: modulus must be positive");

    SearchReport report;
    if (s.has_invertible_map()) {
        report.note = "a full-rank map separates all points; no witness exists";
        return report;
    }
    const std::size_t d = p.dimension();
    for (const Int& m : schedule.moduli) {
        for (unsigned n = 1; n <= schedule.radius_max; ++n) {
            const auto points = detail::scaled_cube(d, n, m);
            report.span_tests += 1;
            report.largest_cube = std::max(report.largest_cube, points.size());
            report.max_radius_tried = std::max(report.max_radius_tried, n);
            if (detail::phase_in_fiber_span(p, s, points)) continue;
            std::optional<Witness> w = detail::structured_witness(p, s, m, n);
            if (!w) w = detail::elimination_witness(p, s, points);
            const WitnessCheck check = verify_witness(*w, p, s);
            if (!check.valid)
                throw std::logic_error("find_witness: extracted witness failed verification: " +
                                       check.diagnostic);
            report.witness = std::move(w);
            report.modulus = m;
            report.radius = n;
            return report;
        }
    }
    report.note = "span test consistent on every scheduled cube";
    return report;
}

}  // namespace msl
