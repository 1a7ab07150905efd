#pragma once

// Oscillatory integral quadrature and decay curves.
//
// I(lambda) = integral of e^{i lambda P(y)} prod_j f_j(l_j(y)) eta(y) dy over
// a box, with eta a fixed tensor bump (1-u^2)^2 per axis.  Midpoint sampling
// on a tensor grid keeps the estimate deterministic; a resolution guard
// derived from the phase gradient insists on at least eight samples per
// oscillation so the reported decay exponents are quadrature artifacts of
// bounded size, not aliasing.
//
// Two integrand flavors share the sampler: plain amplitude factors f_j, and
// phase modulation where tabulated phi_j enter as e^{-i lambda phi_j(l_j y)}
// (the adversarial regime for degenerate phases).

#include <msl/grid_function.hpp>
#include <msl/linear_map.hpp>
#include <msl/measure.hpp>
#include <msl/polynomial.hpp>

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace msl {

/// Tensor bump on a box: eta(y) = prod_i (1 - u_i^2)^2 with u_i the affine
/// image of y_i in [-1, 1].  Vanishes to second order on the boundary.
struct Cutoff {
    Box box;

    double operator()(const std::vector<double>& y) const {
        double v = 1.0;
        for (std::size_t i = 0; i < box.dim(); ++i) {
            const double lo = to_double(box.sides[i].first);
            const double hi = to_double(box.sides[i].second);
            const double u = (2.0 * y[i] - lo - hi) / (hi - lo);
            const double w = 1.0 - u * u;
            if (w <= 0.0) return 0.0;
            v *= w * w;
        }
        return v;
    }

    /// Exact integral of eta: each axis contributes (hi - lo) * 8/15.
    Rational integral() const {
        Rational v = 1;
        for (const auto& [lo, hi] : box.sides) v *= (hi - lo) * Rational(8, 15);
        return v;
    }
};

/// Smallest admissible per-axis resolution for phase lambda * P on the box:
/// at least eight samples per period of the fastest oscillation, never less
/// than 64.  The oscillation rate is bounded by |lambda| * sup |grad P| times
/// the box diameter.
inline unsigned resolution_guard(const Polynomial& p, const Box& box, double lambda) {
    validate_box(box);
    if (box.dim() != p.dimension())
        throw std::invalid_argument("resolution_guard: box/phase arity mismatch");
    Rational grad = 0;
    for (std::size_t i = 0; i < p.dimension(); ++i)
        grad += interval_bound(partial_derivative(p, i), box.sides);
    double diam_sq = 0;
    for (const auto& [lo, hi] : box.sides) {
        const double side = to_double(hi - lo);
        diam_sq += side * side;
    }
    const double pi = 3.14159265358979323846;
    const double cycles = std::abs(lambda) * to_double(grad) * std::sqrt(diam_sq) / (2 * pi);
    const double needed = 8.0 * cycles;
    unsigned res = 64;
    if (needed > static_cast<double>(res)) res = static_cast<unsigned>(std::ceil(needed));
    return res;
}

namespace detail {

struct KahanSum {
    double sum = 0, carry = 0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

/// Double-precision polynomial evaluator; coefficients are frozen once so the
/// hot loop does no rational work.
struct CompiledPoly {
    struct Term {
        double coeff;
        std::vector<unsigned> exps;
    };
    std::size_t dim;
    std::vector<Term> terms;

    explicit CompiledPoly(const Polynomial& p) : dim(p.dimension()) {
        for (const auto& [e, c] : p.terms()) terms.push_back({to_double(c), e});
    }

    double eval(const std::vector<double>& y) const {
        double acc = 0;
        for (const Term& t : terms) {
            double v = t.coeff;
            for (std::size_t i = 0; i < dim; ++i)
                for (unsigned k = 0; k < t.exps[i]; ++k) v *= y[i];
            acc += v;
        }
        return acc;
    }
};

template <class Integrand>
std::complex<double> midpoint_integrate(const Box& box, unsigned resolution,
                                        Integrand&& integrand) {
    const std::size_t d = box.dim();
    std::vector<double> lo(d), step(d), y(d);
    for (std::size_t i = 0; i < d; ++i) {
        lo[i] = to_double(box.sides[i].first);
        step[i] = (to_double(box.sides[i].second) - lo[i]) / resolution;
    }
    double cell = 1;
    for (std::size_t i = 0; i < d; ++i) cell *= step[i];
    KahanSum re, im;
    std::vector<unsigned> idx(d, 0);
    while (true) {
        for (std::size_t i = 0; i < d; ++i) y[i] = lo[i] + (idx[i] + 0.5) * step[i];
        const std::complex<double> v = integrand(y);
        re.add(v.real());
        im.add(v.imag());
        std::size_t i = d;
        bool done = false;
        while (i > 0) {
            --i;
            if (++idx[i] < resolution) break;
            idx[i] = 0;
            if (i == 0) done = true;
        }
        if (done) break;
    }
    return {re.sum * cell, im.sum * cell};
}

inline void check_oscint_args(const Polynomial& p, const MapSystem& s, std::size_t fn_count,
                              const Box& box, unsigned resolution, double lambda) {
    check_phase_against_system(p, s);
    validate_box(box);
    if (box.dim() != p.dimension())
        throw std::invalid_argument("box dimension does not match phase arity");
    if (fn_count != s.size())
        throw std::invalid_argument("expected one grid function per map");
    const unsigned guard = resolution_guard(p, box, lambda);
    if (resolution < guard)
        throw std::invalid_argument("resolution " + std::to_string(resolution) +
                                    " below anti-aliasing guard " + std::to_string(guard) +
                                    " for lambda " + std::to_string(lambda));
}

}  // namespace detail

/// Midpoint estimate of the modulated integral with amplitude factors f_j.
inline std::complex<double> oscillatory_integral(const Polynomial& p, const MapSystem& s,
                                                 const std::vector<GridFunction>& fns,
                                                 const Box& box, double lambda,
                                                 unsigned resolution) {
    detail::check_oscint_args(p, s, fns.size(), box, resolution, lambda);
    const detail::CompiledPoly phase(p);
    const Cutoff eta{box};
    std::vector<std::vector<double>> rows;  // map matrices flattened to doubles
    for (std::size_t j = 0; j < s.size(); ++j) {
        const RatMatrix& m = s.map(j).matrix;
        std::vector<double> flat(m.rows() * m.cols());
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c) flat[r * m.cols() + c] = to_double(m.at(r, c));
        rows.push_back(std::move(flat));
    }
    return detail::midpoint_integrate(box, resolution, [&](const std::vector<double>& y) {
        double amp = eta(y);
        if (amp != 0.0) {
            for (std::size_t j = 0; j < s.size(); ++j) {
                const std::size_t dj = s.map(j).codomain_dim();
                std::vector<double> t(dj, 0.0);
                for (std::size_t r = 0; r < dj; ++r)
                    for (std::size_t c = 0; c < y.size(); ++c)
                        t[r] += rows[j][r * y.size() + c] * y[c];
                amp *= fns[j].value(t);
                if (amp == 0.0) break;
            }
        }
        const double theta = lambda * phase.eval(y);
        return std::complex<double>(amp * std::cos(theta), amp * std::sin(theta));
    });
}

/// Midpoint estimate with phase modulation: tabulated phi_j act as
/// e^{-i lambda phi_j(l_j y)}, so the effective phase is the residual
/// lambda * (P - sum_j phi_j o l_j).  With adversarial phi_j the residual is
/// uniformly tiny and the integral refuses to decay.
inline std::complex<double> oscillatory_integral_modulated(const Polynomial& p,
                                                           const MapSystem& s,
                                                           const std::vector<GridFunction>& phases,
                                                           const Box& box, double lambda,
                                                           unsigned resolution) {
    detail::check_oscint_args(p, s, phases.size(), box, resolution, lambda);
    const detail::CompiledPoly phase(p);
    const Cutoff eta{box};
    return detail::midpoint_integrate(box, resolution, [&](const std::vector<double>& y) {
        const double amp = eta(y);
        if (amp == 0.0) return std::complex<double>(0.0, 0.0);
        double theta = phase.eval(y);
        for (std::size_t j = 0; j < s.size(); ++j) {
            const RatMatrix& m = s.map(j).matrix;
            std::vector<double> t(m.rows(), 0.0);
            for (std::size_t r = 0; r < m.rows(); ++r)
                for (std::size_t c = 0; c < y.size(); ++c)
                    t[r] += to_double(m.at(r, c)) * y[c];
            theta -= phases[j].value(t);
        }
        theta *= lambda;
        return std::complex<double>(amp * std::cos(theta), amp * std::sin(theta));
    });
}

struct DecayRow {
    double lambda = 0;
    unsigned resolution = 0;
    std::complex<double> value;
};

struct DecayCurve {
    std::vector<DecayRow> rows;
    double slope = 0;  // log-log fit over the top decade of lambda
};

/// Least-squares slope of log |I| against log lambda, restricted to the top
/// decade (lambda >= max/10).  Rows with lambda <= 0 or |I| = 0 are skipped.
inline double top_decade_slope(const std::vector<DecayRow>& rows) {
    double lambda_max = 0;
    for (const DecayRow& r : rows) lambda_max = std::max(lambda_max, r.lambda);
    std::vector<std::pair<double, double>> pts;
    for (const DecayRow& r : rows) {
        if (r.lambda <= 0 || r.lambda < lambda_max / 10.0) continue;
        const double mag = std::abs(r.value);
        if (mag <= 0) continue;
        pts.push_back({std::log(r.lambda), std::log(mag)});
    }
    if (pts.size() < 2)
        throw std::invalid_argument("top_decade_slope: need two usable rows in the top decade");
    double mx = 0, my = 0;
    for (const auto& [x, yv] : pts) {
        mx += x;
        my += yv;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxx = 0, sxy = 0;
    for (const auto& [x, yv] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (yv - my);
    }
    return sxy / sxx;
}

/// Evaluates I(lambda) over a list, choosing per-lambda resolutions from the
/// guard when `resolution` is zero ("auto").  `modulated` selects the
/// phase-table integrand.
inline DecayCurve decay_curve(const Polynomial& p, const MapSystem& s,
                              const std::vector<GridFunction>& fns, const Box& box,
                              const std::vector<double>& lambdas, unsigned resolution = 0,
                              bool modulated = false) {
    if (lambdas.empty()) throw std::invalid_argument("decay_curve: empty lambda list");
    DecayCurve curve;
    for (const double lambda : lambdas) {
        DecayRow row;
        row.lambda = lambda;
        row.resolution = resolution == 0 ? resolution_guard(p, box, lambda) : resolution;
        row.value = modulated
                        ? oscillatory_integral_modulated(p, s, fns, box, lambda, row.resolution)
                        : oscillatory_integral(p, s, fns, box, lambda, row.resolution);
        curve.rows.push_back(row);
    }
    curve.slope = top_decade_slope(curve.rows);
    return curve;
}

}  // namespace msl
