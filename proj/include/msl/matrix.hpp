#pragma once

// Dense exact linear algebra.
//
// Two engines live here:
//   * RatMatrix -- rational Gauss-Jordan elimination producing reduced row
//     echelon form.  Used wherever explicit solutions, certificates, or
//     nullspace bases are needed.  Pivoting is deterministic (first nonzero
//     entry in column order), so all downstream artifacts are reproducible.
//   * IntMatrix -- fraction-free (Bareiss) forward elimination over the
//     integers.  Used as the fast path for yes/no consistency questions on
//     larger systems, where rational bookkeeping would be wasted work.

#include <msl/rational.hpp>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace msl {

class RatMatrix {
public:
    RatMatrix() = default;

    RatMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static RatMatrix identity(std::size_t n) {
        RatMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const RatMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    std::vector<Rational> apply(const std::vector<Rational>& x) const {
        if (x.size() != cols_)
            throw std::invalid_argument("matrix apply: vector length mismatch");
        std::vector<Rational> y(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            Rational acc = 0;
            for (std::size_t j = 0; j < cols_; ++j) acc += at(i, j) * x[j];
            y[i] = std::move(acc);
        }
        return y;
    }

    RatMatrix transposed() const {
        RatMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    /// In-place reduction to reduced row echelon form.  Returns the pivot
    /// columns in increasing order; their count is the rank.  Pivot choice is
    /// the first row (top to bottom) with a nonzero entry in the leftmost
    /// unresolved column, which makes the result independent of runtime state.
    std::vector<std::size_t> reduce() {
        std::vector<std::size_t> pivot_cols;
        std::size_t r = 0;
        for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
            std::size_t p = r;
            while (p < rows_ && at(p, c) == 0) ++p;
            if (p == rows_) continue;
            if (p != r)
                for (std::size_t j = 0; j < cols_; ++j) std::swap(at(p, j), at(r, j));
            const Rational inv_pivot = Rational(1) / at(r, c);
            for (std::size_t j = c; j < cols_; ++j) at(r, j) *= inv_pivot;
            for (std::size_t i = 0; i < rows_; ++i) {
                if (i == r || at(i, c) == 0) continue;
                const Rational f = at(i, c);
                for (std::size_t j = c; j < cols_; ++j) at(i, j) -= f * at(r, j);
            }
            pivot_cols.push_back(c);
            ++r;
        }
        return pivot_cols;
    }

    std::size_t rank() const {
        RatMatrix copy(*this);
        return copy.reduce().size();
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

inline RatMatrix make_matrix(std::initializer_list<std::initializer_list<Rational>> rows) {
    const std::size_t nr = rows.size();
    const std::size_t nc = nr == 0 ? 0 : rows.begin()->size();
    RatMatrix m(nr, nc);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != nc) throw std::invalid_argument("make_matrix: ragged rows");
        std::size_t j = 0;
        for (const Rational& x : row) m.at(i, j++) = x;
        ++i;
    }
    return m;
}

/// Solves A x = b if consistent.  The returned solution is canonical: free
/// variables (non-pivot columns of the reduced system) are set to zero.
inline std::optional<std::vector<Rational>> solve_canonical(const RatMatrix& a,
                                                            const std::vector<Rational>& b) {
    if (b.size() != a.rows())
        throw std::invalid_argument("solve_canonical: rhs length mismatch");
    RatMatrix aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, a.cols()) = b[i];
    }
    const auto pivots = aug.reduce();
    if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
    std::vector<Rational> x(a.cols(), Rational(0));
    for (std::size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = aug.at(k, a.cols());
    return x;
}

/// When A x = b has no solution there is a row functional c with c^T A = 0 and
/// c^T b = 1 (Fredholm alternative); this computes the canonical such c, or
/// nullopt when the system is consistent.
inline std::optional<std::vector<Rational>> inconsistency_certificate(
    const RatMatrix& a, const std::vector<Rational>& b) {
    if (b.size() != a.rows())
        throw std::invalid_argument("inconsistency_certificate: rhs length mismatch");
    RatMatrix m(a.cols() + 1, a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) m.at(j, i) = a.at(i, j);
        m.at(a.cols(), i) = b[i];
    }
    std::vector<Rational> rhs(a.cols() + 1, Rational(0));
    rhs[a.cols()] = 1;
    return solve_canonical(m, rhs);
}

/// Basis of { x : A x = 0 }.  One vector per free column, in column order;
/// the free coordinate of each vector is 1.
inline std::vector<std::vector<Rational>> nullspace_basis(const RatMatrix& a) {
    RatMatrix red(a);
    const auto pivots = red.reduce();
    std::vector<bool> is_pivot(a.cols(), false);
    for (std::size_t c : pivots) is_pivot[c] = true;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t f = 0; f < a.cols(); ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rational> v(a.cols(), Rational(0));
        v[f] = 1;
        for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -red.at(k, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Scales a rational vector to the unique integer vector with the same span
/// direction, content 1, and positive first nonzero entry.  Zero vectors are
/// rejected.
inline std::vector<Int> integerize_vector(const std::vector<Rational>& v) {
    Int den_lcm = 1;
    for (const Rational& x : v) den_lcm = int_lcm(den_lcm, rat_den(x));
    std::vector<Int> w(v.size());
    Int content = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        w[i] = rat_num(v[i]) * (den_lcm / rat_den(v[i]));
        content = int_gcd(content, w[i]);
    }
    if (content == 0) throw std::invalid_argument("integerize_vector: zero vector");
    Int sign = 0;
    for (const Int& x : w) {
        if (x != 0) {
            sign = x < 0 ? -1 : 1;
            break;
        }
    }
    for (Int& x : w) x /= content * sign;
    return w;
}

class IntMatrix {
public:
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Int& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    /// Fraction-free forward elimination (Bareiss).  Restricted to the first
    /// `limit` columns; reports the pivot count.  Exact divisions by the
    /// previous pivot follow from Sylvester's determinant identity, so
    /// entries stay minors of the input rather than growing exponentially.
    std::size_t forward_eliminate(std::size_t limit) {
        Int prev = 1;
        std::size_t r = 0;
        for (std::size_t c = 0; c < limit && r < rows_; ++c) {
            std::size_t p = r;
            while (p < rows_ && at(p, c) == 0) ++p;
            if (p == rows_) continue;
            if (p != r)
                for (std::size_t j = 0; j < cols_; ++j) std::swap(at(p, j), at(r, j));
            for (std::size_t i = r + 1; i < rows_; ++i) {
                for (std::size_t j = c + 1; j < cols_; ++j)
                    at(i, j) = (at(r, c) * at(i, j) - at(i, c) * at(r, j)) / prev;
                at(i, c) = 0;
            }
            prev = at(r, c);
            ++r;
        }
        return r;
    }

    /// Treats the last column as a right-hand side and decides whether the
    /// system has a solution.
    bool augmented_consistent() {
        if (cols_ == 0) throw std::invalid_argument("augmented_consistent: no rhs column");
        const std::size_t r = forward_eliminate(cols_ - 1);
        for (std::size_t i = r; i < rows_; ++i)
            if (at(i, cols_ - 1) != 0) return false;
        return true;
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Int> data_;
};

}  // namespace msl
