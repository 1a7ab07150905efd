#pragma once

// Surjective linear maps R^d -> R^{d_j} and finite families of them.
//
// A family ("map system") is the fixed data a phase polynomial is measured
// against.  Witness search requires the family in integer-normalized form:
// every matrix entry an integer, obtained by scaling each map by the least
// common multiple of its entry denominators.  Scaling a surjection by a
// nonzero constant changes neither kernels nor fibers-as-partitions, so all
// downstream structure is preserved; the scale factors are recorded.

#include <msl/matrix.hpp>
#include <msl/rational.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace msl {

struct LinearMap {
    RatMatrix matrix;  // codomain_dim x domain_dim

    std::size_t domain_dim() const { return matrix.cols(); }
    std::size_t codomain_dim() const { return matrix.rows(); }

    std::vector<Rational> apply(const std::vector<Rational>& x) const {
        return matrix.apply(x);
    }

    bool operator==(const LinearMap& o) const { return matrix == o.matrix; }
};

inline bool check_surjective(const LinearMap& m) {
    return m.matrix.rank() == m.codomain_dim();
}

/// Integer basis of ker(m), one vector per dimension of the kernel
/// (domain_dim - codomain_dim for surjective m).  Each basis vector has
/// content 1 and positive leading entry; the list order follows the free
/// columns of the reduced matrix, so it is deterministic.
inline std::vector<std::vector<Int>> kernel_basis(const LinearMap& m) {
    std::vector<std::vector<Int>> basis;
    for (const auto& v : nullspace_basis(m.matrix)) basis.push_back(integerize_vector(v));
    return basis;
}

class MapSystem {
public:
    MapSystem() = default;

    /// Validates arity agreement and surjectivity of every map.
    explicit MapSystem(std::vector<LinearMap> maps) : maps_(std::move(maps)) {
        for (std::size_t j = 0; j < maps_.size(); ++j) {
            const LinearMap& m = maps_[j];
            if (m.codomain_dim() == 0 || m.domain_dim() == 0)
                throw std::invalid_argument("map " + std::to_string(j + 1) +
                                            ": empty matrix");
            if (m.domain_dim() != maps_[0].domain_dim())
                throw std::invalid_argument("map " + std::to_string(j + 1) +
                                            ": domain dimension differs from map 1");
            if (m.codomain_dim() > m.domain_dim())
                throw std::invalid_argument("map " + std::to_string(j + 1) +
                                            ": codomain exceeds domain");
            if (!check_surjective(m))
                throw std::invalid_argument("map " + std::to_string(j + 1) +
                                            ": not surjective");
        }
        scales_.assign(maps_.size(), Int(1));
    }

    std::size_t size() const { return maps_.size(); }
    bool empty() const { return maps_.empty(); }
    const LinearMap& map(std::size_t j) const { return maps_.at(j); }
    const std::vector<LinearMap>& maps() const { return maps_; }

    /// Domain dimension d shared by all maps; 0 for an empty family.
    std::size_t domain_dim() const { return maps_.empty() ? 0 : maps_[0].domain_dim(); }

    /// Semantic check: every matrix entry is an integer.
    bool integer_normalized() const {
        for (const LinearMap& m : maps_)
            for (std::size_t i = 0; i < m.matrix.rows(); ++i)
                for (std::size_t k = 0; k < m.matrix.cols(); ++k)
                    if (!is_integer(m.matrix.at(i, k))) return false;
        return true;
    }

    /// Scale factor applied to map j by normalize_integer (1 before).
    const std::vector<Int>& scales() const { return scales_; }

    /// True if some map has full rank d (its fibers are points, which makes
    /// every phase degenerate and witness search hopeless).
    bool has_invertible_map() const {
        for (const LinearMap& m : maps_)
            if (m.codomain_dim() == m.domain_dim()) return true;
        return false;
    }

    friend MapSystem normalize_integer(const MapSystem& s);

private:
    std::vector<LinearMap> maps_;
    std::vector<Int> scales_;
};

/// Clears denominators map by map.  Idempotent: integer matrices get scale 1.
inline MapSystem normalize_integer(const MapSystem& s) {
    MapSystem out = s;
    for (std::size_t j = 0; j < out.maps_.size(); ++j) {
        RatMatrix& m = out.maps_[j].matrix;
        Int den_lcm = 1;
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t k = 0; k < m.cols(); ++k)
                den_lcm = int_lcm(den_lcm, rat_den(m.at(i, k)));
        if (den_lcm != 1)
            for (std::size_t i = 0; i < m.rows(); ++i)
                for (std::size_t k = 0; k < m.cols(); ++k) m.at(i, k) *= Rational(den_lcm);
        out.scales_[j] *= den_lcm;
    }
    return out;
}

}  // namespace msl
