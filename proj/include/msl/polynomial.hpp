#pragma once

// Sparse multivariate polynomials with exact rational coefficients.
//
// Terms are kept in a map ordered by graded lexicographic order on exponent
// vectors, so iteration order, degree queries (last term), and printed form
// are all canonical.  The operations that matter downstream are evaluation,
// translation p(x+y), finite differences, and composition with a linear map;
// each is exact.

#include <msl/matrix.hpp>
#include <msl/rational.hpp>

#include <cstddef>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace msl {

using Exponents = std::vector<unsigned>;

inline unsigned exponent_degree(const Exponents& e) {
    unsigned d = 0;
    for (unsigned k : e) d += k;
    return d;
}

/// Graded lexicographic order: lower total degree first, lexicographic
/// comparison of exponent vectors to break ties.
struct GradedLex {
    bool operator()(const Exponents& a, const Exponents& b) const {
        const unsigned da = exponent_degree(a), db = exponent_degree(b);
        if (da != db) return da < db;
        return a < b;
    }
};

inline Int binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    Int r = 1;
    for (unsigned i = 0; i < k; ++i) {
        r *= n - i;
        r /= i + 1;
    }
    return r;
}

class Polynomial {
public:
    using TermMap = std::map<Exponents, Rational, GradedLex>;

    explicit Polynomial(std::size_t dimension = 0) : dim_(dimension) {}

    static Polynomial constant(std::size_t dimension, const Rational& c) {
        Polynomial p(dimension);
        p.add_term(Exponents(dimension, 0), c);
        return p;
    }

    /// Single variable x_{index+1} (zero-based index).
    static Polynomial variable(std::size_t dimension, std::size_t index) {
        if (index >= dimension) throw std::invalid_argument("variable index out of range");
        Polynomial p(dimension);
        Exponents e(dimension, 0);
        e[index] = 1;
        p.add_term(e, 1);
        return p;
    }

    static Polynomial monomial(std::size_t dimension, Exponents e, const Rational& c) {
        Polynomial p(dimension);
        p.add_term(std::move(e), c);
        return p;
    }

    std::size_t dimension() const { return dim_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Total degree; -1 for the zero polynomial.
    int degree() const {
        if (terms_.empty()) return -1;
        return static_cast<int>(exponent_degree(terms_.rbegin()->first));
    }

    Rational coefficient(const Exponents& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    /// Adds c * x^e, erasing the term if the sum cancels.
    void add_term(Exponents e, const Rational& c) {
        if (e.size() != dim_) throw std::invalid_argument("exponent arity mismatch");
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(std::move(e), c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    bool operator==(const Polynomial& o) const { return dim_ == o.dim_ && terms_ == o.terms_; }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    Polynomial& operator+=(const Polynomial& o) {
        check_same_dimension(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }

    Polynomial& operator-=(const Polynomial& o) {
        check_same_dimension(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }

    Polynomial& operator*=(const Rational& c) {
        if (c == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, coeff] : terms_) coeff *= c;
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
    friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
    friend Polynomial operator-(Polynomial a) { return a *= Rational(-1); }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.check_same_dimension(b);
        Polynomial prod(a.dim_);
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                Exponents e(a.dim_);
                for (std::size_t i = 0; i < a.dim_; ++i) e[i] = ea[i] + eb[i];
                prod.add_term(std::move(e), ca * cb);
            }
        }
        return prod;
    }

    Rational eval(const std::vector<Rational>& x) const {
        if (x.size() != dim_) throw std::invalid_argument("eval: point arity mismatch");
        // Powers are shared across terms: pows[i][k] = x_i^k.
        std::vector<std::vector<Rational>> pows(dim_);
        for (std::size_t i = 0; i < dim_; ++i) pows[i].push_back(1);
        Rational acc = 0;
        for (const auto& [e, c] : terms_) {
            Rational t = c;
            for (std::size_t i = 0; i < dim_; ++i) {
                while (pows[i].size() <= e[i]) pows[i].push_back(pows[i].back() * x[i]);
                if (e[i] != 0) t *= pows[i][e[i]];
            }
            acc += t;
        }
        return acc;
    }

    std::string to_string(const std::vector<std::string>& names = {}) const;

private:
    void check_same_dimension(const Polynomial& o) const {
        if (dim_ != o.dim_) throw std::invalid_argument("polynomial dimension mismatch");
    }

    std::size_t dim_;
    TermMap terms_;
};

/// p(x_1, ..., x_i + y, ..., x_n): binomial expansion in variable i.
inline Polynomial shift_variable(const Polynomial& p, std::size_t i, const Rational& y) {
    if (y == 0) return p;
    Polynomial out(p.dimension());
    std::vector<Rational> ypow{Rational(1)};
    for (const auto& [e, c] : p.terms()) {
        const unsigned a = e[i];
        while (ypow.size() <= a) ypow.push_back(ypow.back() * y);
        for (unsigned k = 0; k <= a; ++k) {
            Exponents f = e;
            f[i] = k;
            out.add_term(std::move(f), c * Rational(binomial(a, k)) * ypow[a - k]);
        }
    }
    return out;
}

/// Translate: returns p(x + y).
inline Polynomial shift(const Polynomial& p, const std::vector<Rational>& y) {
    if (y.size() != p.dimension()) throw std::invalid_argument("shift: vector arity mismatch");
    Polynomial out = p;
    for (std::size_t i = 0; i < y.size(); ++i) out = shift_variable(out, i, y[i]);
    return out;
}

/// Forward difference D_y p = p(x + y) - p(x).  Strictly drops total degree
/// for nonconstant p.
inline Polynomial difference(const Polynomial& p, const std::vector<Rational>& y) {
    return shift(p, y) - p;
}

inline Polynomial partial_derivative(const Polynomial& p, std::size_t i) {
    if (i >= p.dimension()) throw std::invalid_argument("partial_derivative: bad index");
    Polynomial out(p.dimension());
    for (const auto& [e, c] : p.terms()) {
        if (e[i] == 0) continue;
        Exponents f = e;
        f[i] -= 1;
        out.add_term(std::move(f), c * Rational(e[i]));
    }
    return out;
}

/// Composition with a linear map: q(x) = p(L x), where L has p.dimension()
/// rows.  The result lives on the column space, i.e. q.dimension() = cols(L).
inline Polynomial compose_linear(const Polynomial& p, const RatMatrix& l) {
    if (l.rows() != p.dimension())
        throw std::invalid_argument("compose_linear: matrix rows must match polynomial arity");
    const std::size_t d = l.cols();
    // Image of each source variable as a degree-1 polynomial in the target.
    std::vector<Polynomial> image;
    image.reserve(p.dimension());
    for (std::size_t i = 0; i < p.dimension(); ++i) {
        Polynomial g(d);
        for (std::size_t j = 0; j < d; ++j) {
            if (l.at(i, j) == 0) continue;
            Exponents e(d, 0);
            e[j] = 1;
            g.add_term(std::move(e), l.at(i, j));
        }
        image.push_back(std::move(g));
    }
    // Cache image powers; exponents repeat heavily across terms.
    std::vector<std::vector<Polynomial>> pows(p.dimension());
    for (std::size_t i = 0; i < p.dimension(); ++i)
        pows[i].push_back(Polynomial::constant(d, 1));
    Polynomial out(d);
    for (const auto& [e, c] : p.terms()) {
        Polynomial t = Polynomial::constant(d, c);
        for (std::size_t i = 0; i < p.dimension(); ++i) {
            while (pows[i].size() <= e[i]) pows[i].push_back(pows[i].back() * image[i]);
            if (e[i] != 0) t = t * pows[i][e[i]];
        }
        out += t;
    }
    return out;
}

inline std::string Polynomial::to_string(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    auto var_name = [&](std::size_t i) {
        if (i < names.size()) return names[i];
        return "x" + std::to_string(i + 1);
    };
    std::ostringstream os;
    bool first = true;
    // Highest-degree terms first reads naturally.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        const bool negative = c < 0;
        Rational mag = negative ? Rational(-c) : c;
        if (first) {
            if (negative) os << '-';
            first = false;
        } else {
            os << (negative ? " - " : " + ");
        }
        std::string vars;
        for (std::size_t i = 0; i < dim_; ++i) {
            if (e[i] == 0) continue;
            if (!vars.empty()) vars += '*';
            vars += var_name(i);
            if (e[i] > 1) vars += '^' + std::to_string(e[i]);
        }
        if (vars.empty()) {
            os << format_rational(mag);
        } else {
            if (mag != 1) os << format_rational(mag) << '*';
            os << vars;
        }
    }
    return os.str();
}

/// Safe overestimate of sup |p| over a product of intervals: each term
/// contributes |coefficient| * max(|lo_i|, |hi_i|)^{e_i}.  Crude but exact,
/// which is what the tile-size and resolution heuristics need.
inline Rational interval_bound(const Polynomial& p,
                               const std::vector<std::pair<Rational, Rational>>& range) {
    if (range.size() != p.dimension())
        throw std::invalid_argument("interval_bound: range arity mismatch");
    Rational bound = 0;
    for (const auto& [e, c] : p.terms()) {
        Rational t = c < 0 ? Rational(-c) : c;
        for (std::size_t i = 0; i < p.dimension(); ++i) {
            const Rational alo = range[i].first < 0 ? Rational(-range[i].first) : range[i].first;
            const Rational ahi = range[i].second < 0 ? Rational(-range[i].second) : range[i].second;
            const Rational& m = alo < ahi ? ahi : alo;
            for (unsigned k = 0; k < e[i]; ++k) t *= m;
        }
        bound += t;
    }
    return bound;
}

/// All exponent vectors in `dimension` variables of total degree <= degree,
/// listed in graded lexicographic order.
inline std::vector<Exponents> monomials_up_to(std::size_t dimension, unsigned degree) {
    std::vector<Exponents> out;
    Exponents current(dimension, 0);
    // Enumerate compositions of each total degree in lexicographic order.
    auto rec = [&](auto&& self, std::size_t pos, unsigned remaining, unsigned total) -> void {
        if (pos + 1 == dimension || dimension == 0) {
            if (dimension > 0) current[pos] = remaining;
            if (dimension > 0 || remaining == 0) out.push_back(current);
            return;
        }
        for (unsigned k = 0; k <= remaining; ++k) {
            current[pos] = k;
            self(self, pos + 1, remaining - k, total);
        }
        current[pos] = 0;
    };
    for (unsigned deg = 0; deg <= degree; ++deg) {
        if (dimension == 0) {
            if (deg == 0) out.push_back(current);
            continue;
        }
        rec(rec, 0, deg, deg);
    }
    return out;
}

}  // namespace msl
