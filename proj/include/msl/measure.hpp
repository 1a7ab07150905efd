#pragma once

// Sublevel-set measurement.
//
// E_eps = { y in B : |P(y) - sum_j f_j(l_j(y))| < eps } is sampled on a
// regular grid of cell centers (or by seeded Monte Carlo).  The membership
// predicate is evaluated in exact rational arithmetic -- doubles enter only
// as tabulated GridFunction values, which convert to rationals exactly -- so
// a sample is never misclassified by rounding.
//
// The same layer hosts the adversarial construction for degenerate phases
// (piecewise-constant f_j that make E_eps swallow the whole box at a small
// enough tile size), the periodic variant where closeness is measured to
// 2*pi*Z, a one-dimensional exact window measure for monotone circle phases,
// and the pattern-exclusion scan that checks witness inequalities against
// sampled sublevel sets.

#include <msl/grid_function.hpp>
#include <msl/linear_map.hpp>
#include <msl/polynomial.hpp>
#include <msl/witness.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace msl {

struct Box {
    std::vector<std::pair<Rational, Rational>> sides;  // [lo, hi) per axis

    std::size_t dim() const { return sides.size(); }

    Rational volume() const {
        Rational v = 1;
        for (const auto& [lo, hi] : sides) v *= hi - lo;
        return v;
    }
};

inline void validate_box(const Box& box) {
    if (box.sides.empty()) throw std::invalid_argument("box: no sides");
    for (const auto& [lo, hi] : box.sides)
        if (lo >= hi) throw std::invalid_argument("box: side with nonpositive length");
}

enum class SampleMode { grid, monte_carlo };

namespace detail {

/// Visits resolution^d cell centers in row-major order (exact coordinates).
template <class Fn>
void for_each_grid_center(const Box& box, unsigned resolution, Fn&& fn) {
    const std::size_t d = box.dim();
    std::vector<unsigned> idx(d, 0);
    std::vector<Rational> y(d);
    while (true) {
        for (std::size_t i = 0; i < d; ++i) {
            const auto& [lo, hi] = box.sides[i];
            y[i] = lo + Rational(2 * idx[i] + 1) * (hi - lo) / Rational(2 * resolution);
        }
        fn(y);
        std::size_t i = d;
        bool done = false;
        while (i > 0) {
            --i;
            if (++idx[i] < resolution) break;
            idx[i] = 0;
            if (i == 0) done = true;
        }
        if (done) return;
    }
}

/// Same sample count as the grid, drawn uniformly with a seeded generator.
/// Doubles convert to rationals exactly, so the predicate stays exact.
template <class Fn>
void for_each_mc_point(const Box& box, unsigned resolution, std::uint64_t seed, Fn&& fn) {
    const std::size_t d = box.dim();
    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i) total *= resolution;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Rational> y(d);
    for (std::size_t k = 0; k < total; ++k) {
        for (std::size_t i = 0; i < d; ++i) {
            const auto& [lo, hi] = box.sides[i];
            y[i] = lo + Rational(unit(rng)) * (hi - lo);
        }
        fn(y);
    }
}

inline Rational sublevel_residual(const Polynomial& p, const MapSystem& s,
                                  const std::vector<GridFunction>& fns,
                                  const std::vector<Rational>& y) {
    Rational v = p.eval(y);
    for (std::size_t j = 0; j < s.size(); ++j)
        v -= Rational(fns[j].value(s.map(j).apply(y)));
    return v;
}

inline void check_measure_args(const Polynomial& p, const MapSystem& s,
                               const std::vector<GridFunction>& fns, const Box& box,
                               unsigned resolution) {
    check_phase_against_system(p, s);
    validate_box(box);
    if (box.dim() != p.dimension())
        throw std::invalid_argument("box dimension does not match phase arity");
    if (fns.size() != s.size())
        throw std::invalid_argument("expected one grid function per map");
    if (resolution == 0) throw std::invalid_argument("resolution must be positive");
}

}  // namespace detail

struct SublevelReport {
    Rational epsilon;
    std::size_t hits = 0;
    std::size_t samples = 0;
    Rational measure;  // volume * hits / samples, exact given the samples

    double measure_d() const { return to_double(measure); }
};

inline SublevelReport measure_sublevel(const Polynomial& p, const MapSystem& s,
                                       const std::vector<GridFunction>& fns,
                                       const Rational& epsilon, const Box& box,
                                       unsigned resolution = 64,
                                       SampleMode mode = SampleMode::grid,
                                       std::uint64_t seed = 1) {
    detail::check_measure_args(p, s, fns, box, resolution);
    if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
    SublevelReport report;
    report.epsilon = epsilon;
    auto visit = [&](const std::vector<Rational>& y) {
        ++report.samples;
        if (rat_abs(detail::sublevel_residual(p, s, fns, y)) < epsilon) ++report.hits;
    };
    if (mode == SampleMode::grid)
        detail::for_each_grid_center(box, resolution, visit);
    else
        detail::for_each_mc_point(box, resolution, seed, visit);
    report.measure = box.volume() * Rational(report.hits) / Rational(report.samples);
    return report;
}

struct Adversary {
    std::vector<GridFunction> fns;  // one per map
    Rational tile;                  // common pitch of the tabulated functions
};

/// Builds piecewise-constant f_j realizing a degenerate phase on the whole
/// box: f_j tabulates p_j at cell anchors, so the residual at any y in B is a
/// sum of oscillations of the p_j over single cells.  The tile size is chosen
/// from exact gradient bounds to push that total below epsilon, hence
/// E_eps = B for the returned functions.
inline Adversary degenerate_adversary(const Polynomial& p, const MapSystem& s,
                                      const Decomposition& dec, const Rational& epsilon,
                                      const Box& box) {
    check_phase_against_system(p, s);
    validate_box(box);
    if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
    if (box.dim() != p.dimension())
        throw std::invalid_argument("box dimension does not match phase arity");
    if (dec.parts.size() != s.size())
        throw std::invalid_argument("decomposition arity does not match map count");
    Polynomial assembled(p.dimension());
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (dec.parts[j].dimension() != s.map(j).codomain_dim())
            throw std::invalid_argument("decomposition part " + std::to_string(j + 1) +
                                        " has wrong arity");
        assembled += compose_linear(dec.parts[j], s.map(j).matrix);
    }
    if (assembled != p)
        throw std::invalid_argument("decomposition does not reassemble the phase");

    // Interval hull of l_j(B), padded by one unit so anchors of boundary
    // cells stay covered by the tabulation and the gradient bounds.
    std::vector<std::vector<std::pair<Rational, Rational>>> hulls(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) {
        const RatMatrix& m = s.map(j).matrix;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            Rational lo = 0, hi = 0;
            for (std::size_t c = 0; c < m.cols(); ++c) {
                const Rational a = m.at(r, c) * box.sides[c].first;
                const Rational b = m.at(r, c) * box.sides[c].second;
                lo += std::min(a, b);
                hi += std::max(a, b);
            }
            hulls[j].push_back({lo - 1, hi + 1});
        }
    }
    // total residual <= tile * sum_j sum_i sup |d p_j / d t_i|.
    Rational steepness = 0;
    for (std::size_t j = 0; j < s.size(); ++j)
        for (std::size_t i = 0; i < s.map(j).codomain_dim(); ++i)
            steepness += interval_bound(partial_derivative(dec.parts[j], i), hulls[j]);
    Rational tile(1, 4);
    while (tile * steepness >= epsilon) tile /= 2;

    Adversary adv;
    adv.tile = tile;
    for (std::size_t j = 0; j < s.size(); ++j) {
        GridFunction g;
        g.pitch = tile;
        const std::size_t dj = s.map(j).codomain_dim();
        std::vector<Int> lo(dj), hi(dj);
        std::size_t cells = 1;
        for (std::size_t i = 0; i < dj; ++i) {
            lo[i] = rat_floor(hulls[j][i].first / tile);
            hi[i] = rat_floor(hulls[j][i].second / tile);
            cells *= static_cast<std::size_t>(Int(hi[i] - lo[i] + 1).convert_to<long long>());
            if (cells > 8u << 20)
                throw std::invalid_argument(
                    "adversary tabulation too large; shrink the box or epsilon");
        }
        std::vector<Int> cell = lo;
        while (true) {
            std::vector<Rational> anchor(dj);
            for (std::size_t i = 0; i < dj; ++i) anchor[i] = Rational(cell[i]) * tile;
            g.table[cell] = to_double(dec.parts[j].eval(anchor));
            std::size_t i = dj;
            bool done = false;
            while (i > 0) {
                --i;
                if (++cell[i] <= hi[i]) break;
                cell[i] = lo[i];
                if (i == 0) done = true;
            }
            if (done) break;
        }
        adv.fns.push_back(std::move(g));
    }
    return adv;
}

struct PeriodicReport {
    double epsilon = 0;
    double lambda = 0;
    std::size_t hits = 0;
    std::size_t samples = 0;
    double measure = 0;
};

/// Periodic sublevel set: distance of lambda * residual to 2*pi*Z below
/// epsilon.  Floating point throughout (pi makes exactness moot).
inline PeriodicReport measure_periodic_sublevel(const Polynomial& p, const MapSystem& s,
                                                const std::vector<GridFunction>& fns,
                                                double epsilon, double lambda, const Box& box,
                                                unsigned resolution = 64) {
    detail::check_measure_args(p, s, fns, box, resolution);
    if (!(std::abs(lambda) >= 1)) throw std::invalid_argument("|lambda| must be at least 1");
    const double pi = 3.14159265358979323846;
    if (!(epsilon > 0 && epsilon < pi))
        throw std::invalid_argument("epsilon must lie in (0, pi)");
    PeriodicReport report;
    report.epsilon = epsilon;
    report.lambda = lambda;
    detail::for_each_grid_center(box, resolution, [&](const std::vector<Rational>& y) {
        ++report.samples;
        const double v = lambda * to_double(detail::sublevel_residual(p, s, fns, y));
        if (std::abs(std::remainder(v, 2 * pi)) < epsilon) ++report.hits;
    });
    report.measure = to_double(box.volume()) * static_cast<double>(report.hits) /
                     static_cast<double>(report.samples);
    return report;
}

/// Exact window measure of { t in [0,1] : dist(phi(t), 2*pi*Z) < delta } for
/// a strictly increasing piecewise-linear phi given by uniform samples
/// phi(k/K), k = 0..K.  Each residue window is inverted segment by segment;
/// the answer is the sum of the preimage lengths.
inline double circle_sublevel_measure(const std::vector<double>& phi_samples, double delta) {
    if (phi_samples.size() < 2)
        throw std::invalid_argument("circle_sublevel_measure: need at least two samples");
    for (std::size_t k = 1; k < phi_samples.size(); ++k)
        if (!(phi_samples[k] > phi_samples[k - 1]))
            throw std::invalid_argument("circle_sublevel_measure: samples must increase strictly");
    if (!(delta > 0 && delta <= 0.5))
        throw std::invalid_argument("circle_sublevel_measure: delta must lie in (0, 1/2]");
    const double pi = 3.14159265358979323846;
    const std::size_t segments = phi_samples.size() - 1;
    const double lo = phi_samples.front(), hi = phi_samples.back();
    // Piecewise-linear inverse of phi at value v (v within [lo, hi]).
    auto invert = [&](double v) {
        std::size_t a = 0, b = segments;
        while (b - a > 1) {
            const std::size_t mid = (a + b) / 2;
            if (phi_samples[mid] <= v)
                a = mid;
            else
                b = mid;
        }
        const double seg = (v - phi_samples[a]) / (phi_samples[a + 1] - phi_samples[a]);
        return (static_cast<double>(a) + seg) / static_cast<double>(segments);
    };
    double total = 0;
    const long m_lo = static_cast<long>(std::ceil((lo - delta) / (2 * pi)));
    const long m_hi = static_cast<long>(std::floor((hi + delta) / (2 * pi)));
    for (long m = m_lo; m <= m_hi; ++m) {
        const double a = std::max(lo, 2 * pi * static_cast<double>(m) - delta);
        const double b = std::min(hi, 2 * pi * static_cast<double>(m) + delta);
        if (b > a) total += invert(b) - invert(a);
    }
    return total;
}

struct ScanRecord {
    std::vector<Rational> base;  // x
    Rational ratio;              // r
    Rational h_value;            // h(x, r)
    Rational bound;              // (sum_s |c_s|) * epsilon
};

struct ScanReport {
    std::size_t configurations = 0;  // (x, r) pairs examined
    std::size_t contained = 0;       // configurations with x + rS inside E_eps
    std::vector<ScanRecord> violations;
};

/// Scans configurations x + rS against a sampled sublevel set and checks the
/// exclusion inequality |h(x, r)| <= (sum_s |c_s|) * epsilon on every
/// configuration whose points all lie in E_eps (and in the box).  All
/// predicates are exact, so a nonempty violation list would disprove the
/// witness -- verified impossible, which is precisely the point of the scan.
inline ScanReport pattern_exclusion_scan(const Polynomial& p, const MapSystem& s,
                                         const Witness& w,
                                         const std::vector<GridFunction>& fns,
                                         const Rational& epsilon, const Box& box,
                                         unsigned resolution,
                                         const std::vector<Rational>& ratios) {
    detail::check_measure_args(p, s, fns, box, resolution);
    if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
    if (ratios.empty()) throw std::invalid_argument("need at least one ratio");
    const WitnessCheck check = verify_witness(w, p, s);
    if (!check.valid)
        throw std::invalid_argument("pattern_exclusion_scan: invalid witness: " +
                                    check.diagnostic);
    Rational coeff_mass = 0;
    for (const Rational& c : w.coeffs) coeff_mass += rat_abs(c);
    const Polynomial h = pattern_polynomial(p, w);
    const Rational bound = coeff_mass * epsilon;
    const std::size_t d = p.dimension();

    ScanReport report;
    detail::for_each_grid_center(box, resolution, [&](const std::vector<Rational>& x) {
        std::vector<Rational> point(d), hx(d + 1);
        for (const Rational& r : ratios) {
            ++report.configurations;
            bool inside = true;
            Rational pairing = 0;
            for (std::size_t k = 0; k < w.points.size() && inside; ++k) {
                for (std::size_t i = 0; i < d; ++i) {
                    point[i] = x[i] + r * Rational(w.points[k][i]);
                    if (point[i] < box.sides[i].first || point[i] >= box.sides[i].second)
                        inside = false;
                }
                if (!inside) break;
                const Rational v = detail::sublevel_residual(p, s, fns, point);
                if (rat_abs(v) >= epsilon) inside = false;
                pairing += w.coeffs[k] * v;
            }
            if (!inside) continue;
            ++report.contained;
            for (std::size_t i = 0; i < d; ++i) hx[i] = x[i];
            hx[d] = r;
            const Rational hv = h.eval(hx);
            // Fiber cancellation makes the pairing of residuals equal h(x, r);
            // this ties the scan back to the witness algebra.
            if (hv != pairing)
                throw std::logic_error("pattern_exclusion_scan: pairing identity failed");
            if (rat_abs(hv) > bound)
                report.violations.push_back({x, r, hv, bound});
        }
    });
    return report;
}

}  // namespace msl
