// Acceptance gate: one self-contained check per release criterion, each
// printing a single PASS/FAIL line.  Exit status 0 iff every criterion holds.
//
// Usage: acceptance_tests <fixtures-dir> <cli-path> <tmp-dir>

#include <msl/msl.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

namespace fs = std::filesystem;
using namespace msl;
using Clock = std::chrono::steady_clock;

namespace {

double elapsed(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string secs(double s) {
    std::ostringstream os;
    os.precision(2);
    os << std::fixed << s << " s";
    return os.str();
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// ---------------------------------------------------------------------------
// Criterion 1: the difference calculus is exact.  On randomized instances the
// pushforward identity D_v(p o L) = (D_{Lv} p) o L and the product rule
// D_v(fg) = (D_v f) g + (shift_v f)(D_v g) must hold as polynomial identities.
// ---------------------------------------------------------------------------

bool criterion1(std::string& detail) {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(0x1de57a11u);
    auto ri = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    auto rand_poly = [&](std::size_t dim, int term_budget) {
        Polynomial p(dim);
        const std::vector<Exponents> basis = monomials_up_to(dim, 4);
        for (int t = 0; t < term_budget; ++t) {
            const int num = ri(-9, 9);
            if (num == 0) continue;
            const Exponents& e = basis[static_cast<std::size_t>(
                ri(0, static_cast<int>(basis.size()) - 1))];
            p += Polynomial::monomial(dim, e, Rational(num, ri(1, 3)));
        }
        return p;
    };

    const std::size_t instances = 1000;
    for (std::size_t n = 0; n < instances; ++n) {
        const std::size_t d = 1 + n % 3;
        const std::size_t k = static_cast<std::size_t>(ri(1, static_cast<int>(d)));
        RatMatrix l(k, d);
        for (int tries = 0;; ++tries) {
            for (std::size_t r = 0; r < k; ++r)
                for (std::size_t c = 0; c < d; ++c) l.at(r, c) = Rational(ri(-2, 2), ri(1, 2));
            if (l.rank() == k) break;
            if (tries > 500) {
                detail = "could not draw a surjective map";
                return false;
            }
        }
        std::vector<Rational> v(d);
        bool nonzero = false;
        for (std::size_t i = 0; i < d; ++i) {
            v[i] = ri(-3, 3);
            if (v[i] != 0) nonzero = true;
        }
        if (!nonzero) v[0] = 1;

        const Polynomial p = rand_poly(k, 4);
        const Polynomial pushed = compose_linear(p, l);
        if (difference(pushed, v) != compose_linear(difference(p, l.apply(v)), l)) {
            detail = "pushforward identity failed at instance " + std::to_string(n);
            return false;
        }
        const Polynomial f = rand_poly(d, 3);
        const Polynomial g = rand_poly(d, 3);
        if (difference(f * g, v) !=
            difference(f, v) * g + shift(f, v) * difference(g, v)) {
            detail = "product rule failed at instance " + std::to_string(n);
            return false;
        }
    }
    const double dt = elapsed(t0);
    if (dt > 10.0) {
        detail = "identities hold but took " + secs(dt) + " (limit 10 s)";
        return false;
    }
    detail = "pushforward and product-rule identities exact on " + std::to_string(instances) +
             " randomized instances (" + secs(dt) + ")";
    return true;
}

// ---------------------------------------------------------------------------
// Corpus shared by criteria 2-4: every fixture decided and searched once.
// ---------------------------------------------------------------------------

struct FixtureRun {
    std::string name;
    Problem prob;
    MapSystem sys;  // integer-normalized maps used for the search
    DegeneracyResult deg;
    SearchReport search;
};

bool load_corpus(const fs::path& dir, std::vector<FixtureRun>& out, std::string& err) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
        FixtureRun fr;
        fr.name = file.filename().string();
        try {
            fr.prob = load_problem_file(file.string());
            fr.sys = normalize_integer(fr.prob.maps);
            fr.deg = decide_degeneracy(fr.prob.phase, fr.prob.maps);
            SearchSchedule sched;
            if (fr.prob.schedule) sched = *fr.prob.schedule;
            if (sched.radius_max > 6) {
                err = fr.name + ": schedule radius " + std::to_string(sched.radius_max) +
                      " exceeds 6";
                return false;
            }
            for (const Int& m : sched.moduli)
                if (!(m == 1 || m == 2)) {
                    err = fr.name + ": modulus outside {1, 2}";
                    return false;
                }
            fr.search = find_witness(fr.prob.phase, fr.sys, sched);
        } catch (const std::exception& e) {
            err = fr.name + ": " + e.what();
            return false;
        }
        out.push_back(std::move(fr));
    }
    return true;
}

// ---------------------------------------------------------------------------
// Criterion 2: the exact decision and the witness search agree on the whole
// corpus -- a witness is found exactly when the phase is nondegenerate.
// ---------------------------------------------------------------------------

bool criterion2(const std::vector<FixtureRun>& corpus, std::string& detail) {
    if (corpus.size() < 12) {
        detail = "corpus has only " + std::to_string(corpus.size()) + " fixtures (need 12)";
        return false;
    }
    std::set<std::string> names;
    for (const FixtureRun& fr : corpus) names.insert(fr.name);
    for (const char* required : {"cone5.json", "bilinear.json", "trilinear.json",
                                 "quad_three_dirs.json"})
        if (!names.count(required)) {
            detail = std::string("required fixture missing: ") + required;
            return false;
        }
    std::size_t degenerate = 0;
    std::string disagreements;
    for (const FixtureRun& fr : corpus) {
        if (fr.deg.degenerate) ++degenerate;
        if (fr.deg.degenerate == fr.search.found()) disagreements += fr.name + " ";
    }
    if (degenerate < 4) {
        detail = "only " + std::to_string(degenerate) + " degenerate constructions (need 4)";
        return false;
    }
    if (!disagreements.empty()) {
        detail = "decision/search disagreement on: " + disagreements;
        return false;
    }
    detail = "decision and witness search agree on all " + std::to_string(corpus.size()) +
             " fixtures (" + std::to_string(degenerate) + " degenerate, " +
             std::to_string(corpus.size() - degenerate) + " witnessed)";
    return true;
}

// ---------------------------------------------------------------------------
// Criterion 3: every witness the search returns passes independent
// verification, and the two flagship pattern polynomials come out exactly:
// the rectangle gives h = r^2 and the parity cube gives h = -r^3.
// ---------------------------------------------------------------------------

bool criterion3(const std::vector<FixtureRun>& corpus, std::string& detail) {
    std::size_t verified = 0;
    std::optional<Polynomial> h_rect, h_cube;
    for (const FixtureRun& fr : corpus) {
        if (!fr.search.found()) continue;
        const WitnessCheck check = verify_witness(*fr.search.witness, fr.prob.phase, fr.sys);
        if (!check.valid) {
            detail = fr.name + ": witness failed verification: " + check.diagnostic;
            return false;
        }
        if (check.phase_pairing == 0) {
            detail = fr.name + ": witness pairing vanishes";
            return false;
        }
        ++verified;
        if (fr.name == "bilinear.json")
            h_rect = pattern_polynomial(fr.prob.phase, *fr.search.witness);
        if (fr.name == "trilinear.json")
            h_cube = pattern_polynomial(fr.prob.phase, *fr.search.witness);
    }
    if (!h_rect || !h_cube) {
        detail = "rectangle or cube fixture produced no witness";
        return false;
    }
    if (*h_rect != Polynomial::monomial(3, {0, 0, 2}, 1)) {
        detail = "rectangle pattern polynomial is not r^2: " + h_rect->to_string();
        return false;
    }
    if (*h_cube != Polynomial::monomial(4, {0, 0, 0, 3}, -1)) {
        detail = "cube pattern polynomial is not -r^3: " + h_cube->to_string();
        return false;
    }
    detail = "all " + std::to_string(verified) +
             " found witnesses verify; rectangle h = r^2 and cube h = -r^3 exactly";
    return true;
}

// ---------------------------------------------------------------------------
// Criterion 4: fuzzing the exclusion inequality.  For random grid functions,
// epsilon, base point, and ratio, whenever the configuration x + rS lies in
// the sublevel set E_eps the witness bound |h(x, r)| <= (sum |c_s|) eps must
// hold -- checked in exact rational arithmetic.
// ---------------------------------------------------------------------------

bool criterion4(const std::vector<FixtureRun>& corpus, std::string& detail) {
    const auto t0 = Clock::now();
    struct Target {
        const FixtureRun* fr;
        Polynomial h;
        Rational mass;
    };
    std::vector<Target> targets;
    for (const FixtureRun& fr : corpus) {
        if (!fr.search.found()) continue;
        Rational mass = 0;
        for (const Rational& c : fr.search.witness->coeffs) mass += rat_abs(c);
        targets.push_back({&fr, pattern_polynomial(fr.prob.phase, *fr.search.witness), mass});
    }
    if (targets.empty()) {
        detail = "no witnessed fixtures to fuzz";
        return false;
    }

    std::mt19937_64 rng(0xf022edu);
    auto ri = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    auto rd = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };

    std::size_t contained = 0;
    // One draw: random functions + (eps, x, r); returns false on a violation.
    auto check_draw = [&](const Target& tg, const std::vector<GridFunction>& fns,
                          const Rational& eps, const std::vector<Rational>& x,
                          const Rational& r) {
        const std::size_t d = tg.fr->prob.phase.dimension();
        const Witness& w = *tg.fr->search.witness;
        const MapSystem& sys = tg.fr->sys;
        bool inside = true;
        Rational pairing = 0;
        std::vector<Rational> pt(d);
        for (std::size_t k = 0; k < w.points.size(); ++k) {
            for (std::size_t i = 0; i < d; ++i) pt[i] = x[i] + r * Rational(w.points[k][i]);
            Rational res = tg.fr->prob.phase.eval(pt);
            for (std::size_t j = 0; j < sys.size(); ++j)
                res -= Rational(fns[j].value(sys.map(j).apply(pt)));
            if (rat_abs(res) >= eps) {
                inside = false;
                break;
            }
            pairing += w.coeffs[k] * res;
        }
        if (!inside) return true;
        ++contained;
        std::vector<Rational> hx(d + 1);
        for (std::size_t i = 0; i < d; ++i) hx[i] = x[i];
        hx[d] = r;
        const Rational hv = tg.h.eval(hx);
        if (hv != pairing) {
            detail = tg.fr->name + ": pairing identity broke under fuzzing";
            return false;
        }
        if (rat_abs(hv) > tg.mass * eps) {
            detail = tg.fr->name + ": |h| = " + format_rational(rat_abs(hv)) +
                     " exceeds bound " + format_rational(tg.mass * eps);
            return false;
        }
        return true;
    };

    const std::size_t draws = 10000;
    for (std::size_t n = 0; n < draws; ++n) {
        const Target& tg = targets[n % targets.size()];
        const MapSystem& sys = tg.fr->sys;
        const std::size_t d = tg.fr->prob.phase.dimension();
        std::vector<GridFunction> fns;
        for (std::size_t j = 0; j < sys.size(); ++j) {
            GridFunction g;
            if (ri(0, 2) == 0) {
                g = GridFunction::constant(rd(-2.0, 2.0));
            } else {
                g.pitch = Rational(1, ri(1, 3));
                g.fallback = rd(-2.0, 2.0);
                const std::size_t dj = sys.map(j).codomain_dim();
                std::vector<Int> cell(dj, Int(-2));
                while (true) {
                    g.table[cell] = rd(-2.0, 2.0);
                    std::size_t i = dj;
                    bool done = false;
                    while (i > 0) {
                        --i;
                        if (++cell[i] <= 2) break;
                        cell[i] = -2;
                        if (i == 0) done = true;
                    }
                    if (done) break;
                }
            }
            fns.push_back(std::move(g));
        }
        Rational eps(1 + ri(0, 8), 1);
        for (int k = ri(0, 4); k > 0; --k) eps /= 10;
        std::vector<Rational> x(d);
        for (std::size_t i = 0; i < d; ++i) x[i] = Rational(ri(-4, 4), ri(1, 3));
        const Rational r(ri(0, 1) ? ri(1, 3) : -ri(1, 3), ri(1, 3));
        if (!check_draw(tg, fns, eps, x, r)) return false;
    }
    // Deterministic draws guaranteed to be contained, so the bound is
    // genuinely exercised on every witnessed fixture.
    for (const Target& tg : targets) {
        const std::vector<GridFunction> zeros(tg.fr->sys.size(), GridFunction::constant(0.0));
        const std::vector<Rational> origin(tg.fr->prob.phase.dimension(), Rational(0));
        if (!check_draw(tg, zeros, Rational(1000), origin, Rational(1))) return false;
    }
    if (contained == 0) {
        detail = "fuzzing never produced a contained configuration";
        return false;
    }
    const double dt = elapsed(t0);
    if (dt > 60.0) {
        detail = "fuzzing clean but took " + secs(dt) + " (limit 60 s)";
        return false;
    }
    detail = std::to_string(draws + targets.size()) + " fuzz draws across " +
             std::to_string(targets.size()) + " witnessed fixtures, " +
             std::to_string(contained) + " contained, zero bound violations (" + secs(dt) +
             ")";
    return true;
}

// ---------------------------------------------------------------------------
// Criterion 5: progression-free densities.  The library curve for the
// three-term progression must be (1,2,2,3,4,4,4,4,5) on grids 1..9 and match
// an independent exhaustive enumerator built here from scratch; the corner
// pattern on the 2x2 grid must allow 3 free cells.  Budget: 5 minutes.
// ---------------------------------------------------------------------------

std::size_t brute_max_free(const PatternInstance& inst) {
    const std::size_t d = inst.dim;
    const long n = static_cast<long>(inst.grid);
    std::size_t cells = 1;
    for (std::size_t i = 0; i < d; ++i) cells *= static_cast<std::size_t>(n);
    // Enumerate every placed copy x + k * shape inside the grid, k != 0.
    auto index_of = [&](const std::vector<long>& pt) {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < d; ++i) idx = idx * static_cast<std::size_t>(n) +
                                                  static_cast<std::size_t>(pt[i]);
        return idx;
    };
    std::set<std::vector<std::size_t>> copies;
    for (long k = -n; k <= n; ++k) {
        if (k == 0) continue;
        std::vector<long> base(d, 0);
        while (true) {
            std::vector<std::size_t> copy;
            bool ok = true;
            for (const auto& s : inst.shape) {
                std::vector<long> pt(d);
                for (std::size_t i = 0; i < d; ++i) {
                    pt[i] = base[i] + k * s[i];
                    if (pt[i] < 0 || pt[i] >= n) ok = false;
                }
                if (!ok) break;
                copy.push_back(index_of(pt));
            }
            if (ok) {
                std::sort(copy.begin(), copy.end());
                copies.insert(copy);
            }
            std::size_t i = d;
            bool done = false;
            while (i > 0) {
                --i;
                if (++base[i] < n) break;
                base[i] = 0;
                if (i == 0) done = true;
            }
            if (done) break;
        }
    }
    std::size_t best = 0;
    for (std::uint64_t mask = 0; mask < (1ull << cells); ++mask) {
        bool ok = true;
        for (const auto& copy : copies) {
            bool all = true;
            for (std::size_t idx : copy)
                if (!(mask >> idx & 1ull)) {
                    all = false;
                    break;
                }
            if (all) {
                ok = false;
                break;
            }
        }
        if (ok) best = std::max<std::size_t>(best, static_cast<std::size_t>(
                                                       __builtin_popcountll(mask)));
    }
    return best;
}

bool criterion5(const fs::path& fixtures, std::string& detail) {
    const auto t0 = Clock::now();
    const Problem ap3 = load_problem_file((fixtures / "ap3.json").string());
    if (!ap3.pattern) {
        detail = "ap3.json has no pattern";
        return false;
    }
    const std::vector<DensityRow> rows = density_curve(*ap3.pattern, 1, 9);
    const std::size_t expect[9] = {1, 2, 2, 3, 4, 4, 4, 4, 5};
    if (rows.size() != 9) {
        detail = "density curve has " + std::to_string(rows.size()) + " rows";
        return false;
    }
    for (std::size_t i = 0; i < 9; ++i) {
        if (rows[i].size != expect[i] || !rows[i].exact) {
            detail = "progression maximum at grid " + std::to_string(i + 1) + " is " +
                     std::to_string(rows[i].size) + ", expected " + std::to_string(expect[i]);
            return false;
        }
        PatternInstance inst = *ap3.pattern;
        inst.grid = static_cast<unsigned>(i + 1);
        const std::size_t independent = brute_max_free(inst);
        if (independent != expect[i]) {
            detail = "independent enumerator gives " + std::to_string(independent) +
                     " at grid " + std::to_string(i + 1);
            return false;
        }
        if (max_pattern_free(inst).max_size != independent) {
            detail = "search disagrees with enumerator at grid " + std::to_string(i + 1);
            return false;
        }
    }
    const Problem corner = load_problem_file((fixtures / "corner.json").string());
    if (!corner.pattern) {
        detail = "corner.json has no pattern";
        return false;
    }
    for (unsigned n = 1; n <= 4; ++n) {
        PatternInstance inst = *corner.pattern;
        inst.grid = n;
        const std::size_t independent = brute_max_free(inst);
        if (max_pattern_free(inst).max_size != independent) {
            detail = "corner pattern disagrees with enumerator at grid " + std::to_string(n);
            return false;
        }
        if (n == 2 && independent != 3) {
            detail = "corner maximum on the 2x2 grid is " + std::to_string(independent) +
                     ", expected 3";
            return false;
        }
    }
    const double dt = elapsed(t0);
    if (dt > 300.0) {
        detail = "densities correct but took " + secs(dt) + " (limit 5 min)";
        return false;
    }
    detail = "progression curve (1,2,2,3,4,4,4,4,5) and corner maximum 3 confirmed against "
             "an independent enumerator (" +
             secs(dt) + ")";
    return true;
}

// ---------------------------------------------------------------------------
// Criterion 6: sublevel dichotomy.  The adversarial tabulation keeps the
// degenerate phase's sublevel set at least half the box for every epsilon,
// while the nondegenerate phase with zero functions shrinks strictly and ends
// below a fifth of its starting measure.
// ---------------------------------------------------------------------------

bool criterion6(const fs::path& fixtures, std::string& detail) {
    const Problem split = load_problem_file((fixtures / "additive_split.json").string());
    const DegeneracyResult dres = decide_degeneracy(split.phase, split.maps);
    if (!dres.degenerate || !split.box || split.epsilons.size() < 4) {
        detail = "additive_split.json is not the expected degenerate sweep";
        return false;
    }
    const Rational vol = split.box->volume();
    for (const Rational& eps : split.epsilons) {
        const Adversary adv =
            degenerate_adversary(split.phase, split.maps, *dres.decomposition, eps, *split.box);
        const SublevelReport rep =
            measure_sublevel(split.phase, split.maps, adv.fns, eps, *split.box, 64);
        if (!(rep.measure >= vol / 2)) {
            detail = "adversary measure " + format_double(rep.measure_d()) + " at eps " +
                     format_rational(eps) + " fell below half the box";
            return false;
        }
    }
    const Problem bil = load_problem_file((fixtures / "bilinear.json").string());
    if (!bil.box || bil.epsilons.size() < 4) {
        detail = "bilinear.json is not the expected sweep";
        return false;
    }
    const std::vector<GridFunction> zeros(bil.maps.size(), GridFunction::constant(0.0));
    std::vector<Rational> measures;
    for (const Rational& eps : bil.epsilons)
        measures.push_back(
            measure_sublevel(bil.phase, bil.maps, zeros, eps, *bil.box, 64).measure);
    for (std::size_t i = 1; i < measures.size(); ++i)
        if (!(measures[i] < measures[i - 1])) {
            detail = "nondegenerate measures are not strictly decreasing at step " +
                     std::to_string(i);
            return false;
        }
    if (!(measures.back() < measures.front() / 5)) {
        detail = "final measure " + format_rational(measures.back()) +
                 " is not below a fifth of " + format_rational(measures.front());
        return false;
    }
    detail = "degenerate phase holds the full box under the adversary while the "
             "nondegenerate sweep collapses (" +
             format_rational(measures.front()) + " down to " +
             format_rational(measures.back()) + ")";
    return true;
}

// ---------------------------------------------------------------------------
// Criterion 7: circle sublevel bound.  For a panel of convex phases with
// slope at least 1, the window measure obeys m(delta) <= C delta log(1/delta)
// with one constant C fitted on the coarse deltas; the identity phase must
// return exactly delta.
// ---------------------------------------------------------------------------

bool criterion7(std::string& detail) {
    const unsigned K = 2048;
    const std::vector<std::array<double, 3>> phases = {
        {1, 0, 0}, {1, 1, 0}, {1, 0, 1}, {1, 2, 3}, {2, 0, 0},  {2, 3, 1},
        {3, 5, 0}, {1, 10, 0}, {1, 0, 10}, {5, 1, 1}, {4, 0, 2}, {1, 6, 6}};
    auto samples_of = [&](const std::array<double, 3>& c) {
        std::vector<double> s(K + 1);
        for (unsigned k = 0; k <= K; ++k) {
            const double t = static_cast<double>(k) / K;
            s[k] = c[0] * t + c[1] * t * t + c[2] * t * t * t;
        }
        return s;
    };
    double cfit = 0;
    for (const auto& c : phases) {
        const std::vector<double> s = samples_of(c);
        for (int j = 3; j <= 6; ++j) {
            const double delta = std::ldexp(1.0, -j);
            cfit = std::max(cfit,
                            circle_sublevel_measure(s, delta) / (delta * std::log(1 / delta)));
        }
    }
    if (!(cfit > 0)) {
        detail = "fitted constant is not positive";
        return false;
    }
    for (std::size_t pi = 0; pi < phases.size(); ++pi) {
        const std::vector<double> s = samples_of(phases[pi]);
        for (int j = 3; j <= 10; ++j) {
            const double delta = std::ldexp(1.0, -j);
            const double m = circle_sublevel_measure(s, delta);
            if (m > 1.05 * cfit * delta * std::log(1 / delta)) {
                detail = "phase " + std::to_string(pi + 1) + " breaks the bound at delta 2^-" +
                         std::to_string(j);
                return false;
            }
        }
    }
    const std::vector<double> identity = samples_of({1, 0, 0});
    for (int j = 1; j <= 10; ++j) {
        const double delta = std::ldexp(1.0, -j);
        if (circle_sublevel_measure(identity, delta) != delta) {
            detail = "identity phase is not exact at delta 2^-" + std::to_string(j);
            return false;
        }
    }
    detail = "m(delta) <= C delta log(1/delta) for " + std::to_string(phases.size()) +
             " convex phases with C = " + format_double(cfit) +
             "; identity returns delta exactly";
    return true;
}

// ---------------------------------------------------------------------------
// Criterion 8: periodic sublevel measure on the line fixture matches the
// exact value eps/pi within two grid cells at resolution 512.
// ---------------------------------------------------------------------------

bool criterion8(const fs::path& fixtures, std::string& detail) {
    const Problem prob = load_problem_file((fixtures / "line_phase.json").string());
    if (!prob.box || prob.epsilons.empty() || prob.lambdas.empty()) {
        detail = "line_phase.json is missing its sweep";
        return false;
    }
    const unsigned resolution = 512;
    const PeriodicReport rep = measure_periodic_sublevel(
        prob.phase, prob.maps, {}, to_double(prob.epsilons.front()), prob.lambdas.front(),
        *prob.box, resolution);
    const double pi = 3.14159265358979323846;
    const double target = to_double(prob.epsilons.front()) / pi;
    const double tolerance = 2.0 * to_double(prob.box->volume()) / resolution;
    if (std::abs(rep.measure - target) > tolerance) {
        detail = "measure " + format_double(rep.measure) + " differs from eps/pi = " +
                 format_double(target) + " by more than " + format_double(tolerance);
        return false;
    }
    detail = "periodic measure " + format_double(rep.measure) + " within two cells of eps/pi "
             "= " + format_double(target);
    return true;
}

// ---------------------------------------------------------------------------
// Criterion 9: oscillatory decay.  The bilinear phase decays with log-log
// slope in [-1.2, -0.8] over lambda = 1..128; the zero phase stays flat; and
// at lambda = 0 the integrator agrees with a plain direct quadrature to
// 1e-10 relative.  Budget: 2 minutes.
// ---------------------------------------------------------------------------

bool criterion9(const fs::path& fixtures, std::string& detail) {
    const auto t0 = Clock::now();
    std::vector<double> lambdas;
    for (int k = 0; k <= 7; ++k) lambdas.push_back(static_cast<double>(1 << k));

    const Problem bil = load_problem_file((fixtures / "bilinear.json").string());
    const std::vector<GridFunction> ones(bil.maps.size(), GridFunction::constant(1.0));
    const DecayCurve curve = decay_curve(bil.phase, bil.maps, ones, *bil.box, lambdas);
    if (!(curve.slope >= -1.2 && curve.slope <= -0.8)) {
        detail = "bilinear slope " + format_double(curve.slope) + " outside [-1.2, -0.8]";
        return false;
    }

    const Problem zp = load_problem_file((fixtures / "zero_phase.json").string());
    const std::vector<GridFunction> zones(zp.maps.size(), GridFunction::constant(1.0));
    const DecayCurve flat = decay_curve(zp.phase, zp.maps, zones, *zp.box, lambdas);
    if (!(flat.slope >= -0.05 && flat.slope <= 0.05)) {
        detail = "zero-phase slope " + format_double(flat.slope) + " outside [-0.05, 0.05]";
        return false;
    }

    const unsigned res = 128;
    const std::complex<double> at_zero =
        oscillatory_integral(bil.phase, bil.maps, ones, *bil.box, 0.0, res);
    double direct = 0;
    const double step = 2.0 / res;
    for (unsigned a = 0; a < res; ++a)
        for (unsigned b = 0; b < res; ++b) {
            const double x = -1.0 + (a + 0.5) * step;
            const double y = -1.0 + (b + 0.5) * step;
            direct += (1 - x * x) * (1 - x * x) * (1 - y * y) * (1 - y * y);
        }
    direct *= step * step;
    if (std::abs(at_zero.imag()) > 1e-15) {
        detail = "lambda = 0 integral has a spurious imaginary part";
        return false;
    }
    const double rel = std::abs(at_zero.real() - direct) / std::abs(direct);
    if (rel > 1e-10) {
        detail = "lambda = 0 disagrees with direct quadrature (relative " +
                 format_double(rel) + ")";
        return false;
    }
    const double dt = elapsed(t0);
    if (dt > 120.0) {
        detail = "decay correct but took " + secs(dt) + " (limit 2 min)";
        return false;
    }
    detail = "bilinear slope " + format_double(curve.slope) + ", flat slope " +
             format_double(flat.slope) + ", lambda = 0 matches direct quadrature (" +
             secs(dt) + ")";
    return true;
}

// ---------------------------------------------------------------------------
// Criterion 10: determinism.  Every subcommand, run twice on the fixture
// corpus, emits byte-identical stdout and artifacts.
// ---------------------------------------------------------------------------

struct CliContext {
    std::string cli;
    fs::path fixtures;
    fs::path tmp;
    int counter = 0;
};

struct CliResult {
    int code = -1;
    std::string out;
};

CliResult cli_run(CliContext& ctx, const std::string& args) {
    fs::create_directories(ctx.tmp);
    const fs::path capture = ctx.tmp / ("stdout_" + std::to_string(++ctx.counter));
    const std::string cmd = ctx.cli + " " + args + " > " + capture.string() + " 2> " +
                            capture.string() + ".err";
    const int status = std::system(cmd.c_str());
    return {status == -1 ? -1 : WEXITSTATUS(status), slurp(capture)};
}

bool same_artifacts(const fs::path& a, const fs::path& b, std::string& why) {
    auto names_of = [](const fs::path& dir) {
        std::vector<std::string> names;
        if (fs::exists(dir))
            for (const auto& entry : fs::directory_iterator(dir))
                names.push_back(entry.path().filename().string());
        std::sort(names.begin(), names.end());
        return names;
    };
    const std::vector<std::string> names = names_of(a);
    if (names != names_of(b)) {
        why = "artifact sets differ";
        return false;
    }
    for (const std::string& name : names)
        if (slurp(a / name) != slurp(b / name)) {
            why = name + " differs between runs";
            return false;
        }
    return true;
}

bool criterion10(CliContext& ctx, std::string& detail) {
    const auto t0 = Clock::now();
    auto fx = [&](const char* name) { return (ctx.fixtures / name).string(); };
    struct Cmd {
        std::string label;
        std::string args;
        bool has_out;
    };
    const std::vector<Cmd> cmds = {
        {"analyze-nondegenerate", "analyze " + fx("bilinear.json"), true},
        {"analyze-degenerate", "analyze " + fx("additive_split.json"), true},
        {"witness-rectangle", "witness " + fx("bilinear.json"), true},
        {"witness-cube", "witness " + fx("trilinear.json"), true},
        {"sublevel-grid", "sublevel " + fx("bilinear.json") + " --resolution 16", true},
        {"sublevel-mc",
         "sublevel " + fx("bilinear.json") + " --mode mc --seed 7 --resolution 16", true},
        {"sublevel-adversary",
         "sublevel " + fx("additive_split.json") + " --adversary --resolution 8", true},
        {"sublevel-scan", "sublevel " + fx("bilinear.json") + " --scan --resolution 8", true},
        {"periodic", "periodic " + fx("line_phase.json") + " --resolution 512", true},
        {"density-progression", "density " + fx("ap3.json"), true},
        {"density-corner", "density " + fx("corner.json"), true},
        {"oscint-plain", "oscint " + fx("zero_phase.json"), true},
        {"oscint-modulated", "oscint " + fx("additive_split.json") + " --modulated", true},
        {"selftest", "selftest", false},
    };
    for (const Cmd& cmd : cmds) {
        const fs::path d1 = ctx.tmp / ("det_" + cmd.label) / "r1";
        const fs::path d2 = ctx.tmp / ("det_" + cmd.label) / "r2";
        const std::string suffix1 = cmd.has_out ? " --out " + d1.string() : "";
        const std::string suffix2 = cmd.has_out ? " --out " + d2.string() : "";
        const CliResult r1 = cli_run(ctx, cmd.args + suffix1);
        const CliResult r2 = cli_run(ctx, cmd.args + suffix2);
        if (r1.code != 0 || r2.code != 0) {
            detail = cmd.label + " exited " + std::to_string(r1.code) + "/" +
                     std::to_string(r2.code);
            return false;
        }
        if (r1.out != r2.out) {
            detail = cmd.label + ": stdout differs between runs";
            return false;
        }
        if (cmd.has_out) {
            std::string why;
            if (!same_artifacts(d1, d2, why)) {
                detail = cmd.label + ": " + why;
                return false;
            }
        }
    }
    detail = std::to_string(cmds.size()) +
             " subcommand invocations byte-identical across repeated runs (" +
             secs(elapsed(t0)) + ")";
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 4) {
        std::cerr << "usage: acceptance_tests <fixtures-dir> <cli-path> <tmp-dir>\n";
        return 2;
    }
    const fs::path fixtures = argv[1];
    const std::string cli = argv[2];
    const fs::path tmp = argv[3];
    std::error_code ec;
    fs::create_directories(tmp, ec);

    bool all = true;
    auto run = [&](int n, auto&& fn) {
        std::string detail;
        bool ok = false;
        try {
            ok = fn(detail);
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("unexpected exception: ") + e.what();
        }
        std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << detail << "\n"
                  << std::flush;
        all = all && ok;
    };

    run(1, [&](std::string& d) { return criterion1(d); });

    std::vector<FixtureRun> corpus;
    std::string corpus_err;
    const bool corpus_ok = load_corpus(fixtures, corpus, corpus_err);
    run(2, [&](std::string& d) {
        if (!corpus_ok) {
            d = "corpus failed to load: " + corpus_err;
            return false;
        }
        return criterion2(corpus, d);
    });
    run(3, [&](std::string& d) {
        if (!corpus_ok) {
            d = "skipped: corpus failed to load";
            return false;
        }
        return criterion3(corpus, d);
    });
    run(4, [&](std::string& d) {
        if (!corpus_ok) {
            d = "skipped: corpus failed to load";
            return false;
        }
        return criterion4(corpus, d);
    });
    run(5, [&](std::string& d) { return criterion5(fixtures, d); });
    run(6, [&](std::string& d) { return criterion6(fixtures, d); });
    run(7, [&](std::string& d) { return criterion7(d); });
    run(8, [&](std::string& d) { return criterion8(fixtures, d); });
    run(9, [&](std::string& d) { return criterion9(fixtures, d); });
    CliContext ctx{cli, fixtures, tmp};
    run(10, [&](std::string& d) { return criterion10(ctx, d); });

    std::cout << (all ? "acceptance: all criteria passed" : "acceptance: failures detected")
              << "\n";
    return all ? 0 : 1;
}
