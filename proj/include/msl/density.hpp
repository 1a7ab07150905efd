#pragma once

// Pattern-free subsets of finite grids.
//
// Given a finite shape S of lattice points, a subset A of {1..N}^d is
// S-free when it contains no homothetic copy x + n*S with integer n != 0
// (both signs, any integer translation x).  This is the combinatorial model
// behind witness-driven sublevel bounds: the witness support plays the role
// of S, and the maximal S-free density controls how much of a grid a
// sublevel set can fill.
//
// The exact solver is a branch-and-bound over the equivalent minimum hitting
// set problem (delete the fewest cells so every copy loses a member).  It is
// meant for desk-scale grids; a size cap guards against accidental blowups,
// and a seeded greedy gives lower bounds beyond the cap.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace msl {

struct PatternInstance {
    std::size_t dim = 1;                    // d
    std::vector<std::vector<long>> shape;   // S: distinct integer points
    unsigned grid = 1;                      // N: cells {1..N}^d

    std::size_t cell_count() const {
        std::size_t t = 1;
        for (std::size_t i = 0; i < dim; ++i) t *= grid;
        return t;
    }
};

inline void validate_pattern(const PatternInstance& inst) {
    if (inst.dim == 0) throw std::invalid_argument("pattern: dimension must be positive");
    if (inst.grid == 0) throw std::invalid_argument("pattern: grid must be positive");
    if (inst.shape.empty()) throw std::invalid_argument("pattern: empty shape");
    for (const auto& p : inst.shape) {
        if (p.size() != inst.dim)
            throw std::invalid_argument("pattern: shape point arity mismatch");
        for (const auto& q : inst.shape)
            if (&p != &q && p == q) throw std::invalid_argument("pattern: duplicate shape point");
    }
}

using Copy = std::vector<std::uint32_t>;  // sorted cell indices of one placed copy

namespace detail {

inline std::uint32_t cell_index(const std::vector<long>& x, unsigned n, std::size_t d) {
    std::uint32_t idx = 0;
    for (std::size_t i = 0; i < d; ++i)
        idx = idx * n + static_cast<std::uint32_t>(x[i] - 1);
    return idx;
}

}  // namespace detail

/// Every distinct placed copy x + n*S inside the grid, as sorted cell-index
/// sets (duplicates from symmetric shapes collapse).  Single-point shapes are
/// special: every cell hosts a copy, so the list is all singletons.
inline std::vector<Copy> enumerate_copies(const PatternInstance& inst) {
    validate_pattern(inst);
    const std::size_t d = inst.dim;
    const long n_grid = static_cast<long>(inst.grid);
    std::set<Copy> dedup;
    if (inst.shape.size() == 1) {
        std::vector<Copy> all;
        for (std::uint32_t c = 0; c < inst.cell_count(); ++c) all.push_back({c});
        return all;
    }
    long max_ratio = 0;  // largest |n| for which a copy can fit
    {
        long bound = -1;
        for (std::size_t i = 0; i < d; ++i) {
            long lo = inst.shape[0][i], hi = lo;
            for (const auto& p : inst.shape) {
                lo = std::min(lo, p[i]);
                hi = std::max(hi, p[i]);
            }
            if (hi > lo) {
                const long axis_bound = (n_grid - 1) / (hi - lo);
                bound = bound < 0 ? axis_bound : std::min(bound, axis_bound);
            }
        }
        max_ratio = bound;  // >= 0; distinct points guarantee some axis spreads
    }
    for (long mag = 1; mag <= max_ratio; ++mag) {
        for (const long n : {mag, -mag}) {
            std::vector<long> lo(d), hi(d);
            bool feasible = true;
            for (std::size_t i = 0; i < d; ++i) {
                long mn = n * inst.shape[0][i], mx = mn;
                for (const auto& p : inst.shape) {
                    mn = std::min(mn, n * p[i]);
                    mx = std::max(mx, n * p[i]);
                }
                lo[i] = 1 - mn;
                hi[i] = n_grid - mx;
                if (lo[i] > hi[i]) feasible = false;
            }
            if (!feasible) continue;
            std::vector<long> x = lo;
            while (true) {
                Copy copy;
                copy.reserve(inst.shape.size());
                std::vector<long> cell(d);
                for (const auto& p : inst.shape) {
                    for (std::size_t i = 0; i < d; ++i) cell[i] = x[i] + n * p[i];
                    copy.push_back(detail::cell_index(cell, inst.grid, d));
                }
                std::sort(copy.begin(), copy.end());
                dedup.insert(std::move(copy));
                std::size_t i = d;
                bool done = false;
                while (i > 0) {
                    --i;
                    if (++x[i] <= hi[i]) break;
                    x[i] = lo[i];
                    if (i == 0) done = true;
                }
                if (done) break;
            }
        }
    }
    return {dedup.begin(), dedup.end()};
}

/// Checks that `kept` (0/1 per cell) contains no copy entirely.
inline bool is_pattern_free(const std::vector<char>& kept, const std::vector<Copy>& copies) {
    for (const Copy& c : copies) {
        bool whole = true;
        for (std::uint32_t cell : c)
            if (!kept[cell]) {
                whole = false;
                break;
            }
        if (whole) return false;
    }
    return true;
}

struct DensityResult {
    std::size_t max_size = 0;
    std::vector<std::uint32_t> example;  // one pattern-free set of that size
    bool exact = false;
};

namespace detail {

struct HittingSearch {
    std::size_t total_cells;
    const std::vector<Copy>* copies;
    std::vector<char> removed;
    std::size_t removed_count = 0;
    std::size_t best;
    std::vector<char> best_removed;

    /// Copies with no removed cell yet, each of which still needs a deletion.
    /// A greedy packing of pairwise-disjoint such copies is an additive lower
    /// bound on the deletions still required.
    std::size_t uncovered_disjoint_bound(std::uint32_t* first_uncovered) const {
        std::vector<char> used(total_cells, 0);
        std::size_t bound = 0;
        *first_uncovered = UINT32_MAX;
        for (std::uint32_t ci = 0; ci < copies->size(); ++ci) {
            const Copy& c = (*copies)[ci];
            bool covered = false;
            bool disjoint = true;
            for (std::uint32_t cell : c) {
                if (removed[cell]) covered = true;
                if (used[cell]) disjoint = false;
            }
            if (covered) continue;
            if (*first_uncovered == UINT32_MAX) *first_uncovered = ci;
            if (disjoint) {
                ++bound;
                for (std::uint32_t cell : c) used[cell] = 1;
            }
        }
        return bound;
    }

    void dfs() {
        std::uint32_t branch_copy = UINT32_MAX;
        const std::size_t lower = uncovered_disjoint_bound(&branch_copy);
        if (branch_copy == UINT32_MAX) {
            if (removed_count < best) {
                best = removed_count;
                best_removed = removed;
            }
            return;
        }
        if (removed_count + lower >= best) return;
        for (std::uint32_t cell : (*copies)[branch_copy]) {
            removed[cell] = 1;
            ++removed_count;
            dfs();
            --removed_count;
            removed[cell] = 0;
        }
    }
};

}  // namespace detail

/// Exact maximum pattern-free subset, with one witness set.  Throws when the
/// grid exceeds `cell_cap` cells; use greedy_pattern_free beyond that.
inline DensityResult max_pattern_free(const PatternInstance& inst,
                                      std::size_t cell_cap = 4096) {
    validate_pattern(inst);
    const std::size_t total = inst.cell_count();
    if (total > cell_cap)
        throw std::invalid_argument("max_pattern_free: grid of " + std::to_string(total) +
                                    " cells exceeds cap " + std::to_string(cell_cap));
    const std::vector<Copy> copies = enumerate_copies(inst);
    detail::HittingSearch search;
    search.total_cells = total;
    search.copies = &copies;
    search.removed.assign(total, 0);
    search.best = total + 1;
    // Seed the bound with a deterministic greedy solution.
    {
        std::vector<char> kept(total, 1);
        for (const Copy& c : copies) {
            bool whole = true;
            for (std::uint32_t cell : c)
                if (!kept[cell]) whole = false;
            if (whole) kept[c.front()] = 0;
        }
        std::vector<char> removed(total);
        std::size_t count = 0;
        for (std::size_t i = 0; i < total; ++i) {
            removed[i] = !kept[i];
            count += removed[i];
        }
        search.best = count;
        search.best_removed = removed;
    }
    search.dfs();

    DensityResult result;
    result.exact = true;
    result.max_size = total - search.best;
    std::vector<char> kept(total);
    for (std::uint32_t i = 0; i < total; ++i) {
        kept[i] = !search.best_removed[i];
        if (kept[i]) result.example.push_back(i);
    }
    if (!is_pattern_free(kept, copies))
        throw std::logic_error("max_pattern_free: solver returned a set containing a copy");
    return result;
}

/// Randomized greedy lower bound: cells are visited in a seeded shuffle and
/// kept whenever they complete no copy.  The result is verified before
/// returning, so it is always a genuine pattern-free set.
inline DensityResult greedy_pattern_free(const PatternInstance& inst, std::uint64_t seed) {
    validate_pattern(inst);
    const std::size_t total = inst.cell_count();
    const std::vector<Copy> copies = enumerate_copies(inst);
    std::vector<std::vector<std::uint32_t>> copies_of_cell(total);
    for (std::uint32_t ci = 0; ci < copies.size(); ++ci)
        for (std::uint32_t cell : copies[ci]) copies_of_cell[cell].push_back(ci);

    std::vector<std::uint32_t> order(total);
    for (std::uint32_t i = 0; i < total; ++i) order[i] = i;
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<char> kept(total, 0);
    for (std::uint32_t cell : order) {
        kept[cell] = 1;
        bool ok = true;
        for (std::uint32_t ci : copies_of_cell[cell]) {
            bool whole = true;
            for (std::uint32_t member : copies[ci])
                if (!kept[member]) {
                    whole = false;
                    break;
                }
            if (whole) {
                ok = false;
                break;
            }
        }
        if (!ok) kept[cell] = 0;
    }
    if (!is_pattern_free(kept, copies))
        throw std::logic_error("greedy_pattern_free: built a set containing a copy");
    DensityResult result;
    result.exact = false;
    for (std::uint32_t i = 0; i < total; ++i)
        if (kept[i]) result.example.push_back(i);
    result.max_size = result.example.size();
    return result;
}

struct DensityRow {
    unsigned grid = 0;
    std::size_t size = 0;
    double density = 0.0;
    bool exact = false;
};

/// Maximum (or greedy, beyond the cap) pattern-free sizes over a range of
/// grid sizes.  Densities are size / N^d.
inline std::vector<DensityRow> density_curve(const PatternInstance& base, unsigned grid_from,
                                             unsigned grid_to, std::size_t cell_cap = 4096,
                                             std::uint64_t greedy_seed = 1) {
    if (grid_from == 0 || grid_from > grid_to)
        throw std::invalid_argument("density_curve: bad grid range");
    std::vector<DensityRow> rows;
    for (unsigned n = grid_from; n <= grid_to; ++n) {
        PatternInstance inst = base;
        inst.grid = n;
        validate_pattern(inst);
        DensityRow row;
        row.grid = n;
        const DensityResult r = inst.cell_count() <= cell_cap
                                    ? max_pattern_free(inst, cell_cap)
                                    : greedy_pattern_free(inst, greedy_seed);
        row.size = r.max_size;
        row.exact = r.exact;
        row.density = static_cast<double>(r.max_size) / static_cast<double>(inst.cell_count());
        rows.push_back(row);
    }
    return rows;
}

}  // namespace msl
