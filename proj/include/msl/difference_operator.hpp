#pragma once

// Formal products of finite-difference operators D_y : p -> p(.+y) - p.
//
// The factors commute, so an operator is stored as a multiset of direction
// vectors (sorted, with multiplicities).  Directions are integer vectors;
// applying a factor never needs rational directions in this library because
// witness supports live on scaled integer lattices.

#include <msl/polynomial.hpp>
#include <msl/rational.hpp>

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace msl {

class DifferenceOperator {
public:
    DifferenceOperator() = default;

    explicit DifferenceOperator(std::size_t dimension) : dim_(dimension) {}

    std::size_t dimension() const { return dim_; }

    /// factor list as (direction, multiplicity), sorted by direction.
    const std::vector<std::pair<std::vector<Int>, unsigned>>& factors() const {
        return factors_;
    }

    std::size_t order() const {
        std::size_t n = 0;
        for (const auto& [dir, mult] : factors_) n += mult;
        return n;
    }

    DifferenceOperator& multiply_by(std::vector<Int> direction, unsigned multiplicity = 1) {
        if (direction.size() != dim_)
            throw std::invalid_argument("difference operator: direction arity mismatch");
        bool zero = true;
        for (const Int& x : direction)
            if (x != 0) zero = false;
        if (zero) throw std::invalid_argument("difference operator: zero direction");
        if (multiplicity == 0) return *this;
        auto it = std::lower_bound(
            factors_.begin(), factors_.end(), direction,
            [](const auto& f, const std::vector<Int>& d) { return f.first < d; });
        if (it != factors_.end() && it->first == direction)
            it->second += multiplicity;
        else
            factors_.insert(it, {std::move(direction), multiplicity});
        return *this;
    }

    bool operator==(const DifferenceOperator& o) const {
        return dim_ == o.dim_ && factors_ == o.factors_;
    }

    std::string to_string() const {
        if (factors_.empty()) return "id";
        std::ostringstream os;
        bool first = true;
        for (const auto& [dir, mult] : factors_) {
            for (unsigned k = 0; k < mult; ++k) {
                if (!first) os << ' ';
                first = false;
                os << "D(";
                for (std::size_t i = 0; i < dir.size(); ++i) {
                    if (i) os << ',';
                    os << dir[i].str();
                }
                os << ')';
            }
        }
        return os.str();
    }

private:
    std::size_t dim_ = 0;
    std::vector<std::pair<std::vector<Int>, unsigned>> factors_;
};

/// Applies every factor in turn.  Each application strictly lowers total
/// degree, so the result of an order-k operator on a degree-m polynomial has
/// degree <= m - k (and is zero once k exceeds m).
inline Polynomial apply_operator(const DifferenceOperator& op, const Polynomial& p) {
    if (op.dimension() != p.dimension())
        throw std::invalid_argument("apply_operator: dimension mismatch");
    Polynomial out = p;
    for (const auto& [dir, mult] : op.factors()) {
        const std::vector<Rational> y = to_rational_vector(dir);
        for (unsigned k = 0; k < mult; ++k) {
            if (out.is_zero()) return out;
            out = difference(out, y);
        }
    }
    return out;
}

}  // namespace msl
