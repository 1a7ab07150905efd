#pragma once

// Piecewise-constant functions on a scaled lattice.
//
// A GridFunction is constant on half-open cells [k*pitch, (k+1)*pitch)^m and
// is the only function representation the measurement layer accepts: it can
// be tabulated adversarially (to realize degenerate phases) while lookups at
// rational points remain exact, since locating a cell is integer arithmetic.

#include <msl/rational.hpp>

#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

namespace msl {

struct GridFunction {
    Rational pitch = 1;                        // cell edge length, > 0
    std::map<std::vector<Int>, double> table;  // cell index -> value
    double fallback = 0.0;                     // value on untabulated cells

    static GridFunction constant(double v) {
        GridFunction g;
        g.fallback = v;
        return g;
    }

    /// Index of the cell containing t: componentwise floor(t_i / pitch).
    std::vector<Int> cell_of(const std::vector<Rational>& t) const {
        if (pitch <= 0) throw std::invalid_argument("grid function: nonpositive pitch");
        std::vector<Int> cell(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) cell[i] = rat_floor(t[i] / pitch);
        return cell;
    }

    double value(const std::vector<Rational>& t) const {
        const auto it = table.find(cell_of(t));
        return it == table.end() ? fallback : it->second;
    }

    /// Floating-point lookup for the quadrature layer.  Cell location rounds
    /// like the sample coordinates themselves, which is the right convention
    /// when both come from the same double-precision grid.
    double value(const std::vector<double>& t) const {
        if (pitch <= 0) throw std::invalid_argument("grid function: nonpositive pitch");
        const double w = to_double(pitch);
        std::vector<Int> cell(t.size());
        for (std::size_t i = 0; i < t.size(); ++i)
            cell[i] = Int(static_cast<long long>(std::floor(t[i] / w)));
        const auto it = table.find(cell);
        return it == table.end() ? fallback : it->second;
    }
};

}  // namespace msl
