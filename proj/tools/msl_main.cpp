// msl: certify nondegeneracy of phase polynomials against families of linear
// maps, search and verify finite witness sets, and run the empirical
// measurements (sublevel sweeps, pattern density curves, oscillatory decay)
// that the witnesses control.
//
// Exit codes: 0 = definite answer, 1 = search or check exhausted/failed
// (no witness within budget, selftest failure, exclusion violations),
// 2 = invalid input or usage.

#include <msl/msl.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using msl::Rational;

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path path = std::filesystem::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::vector<double> lambda_sweep(const msl::Problem& prob) {
    if (!prob.lambdas.empty()) return prob.lambdas;
    std::vector<double> l;
    for (int k = 0; k <= 7; ++k) l.push_back(static_cast<double>(1 << k));
    return l;
}

std::vector<Rational> epsilon_sweep(const msl::Problem& prob) {
    if (!prob.epsilons.empty()) return prob.epsilons;
    std::vector<Rational> eps;
    Rational e(1, 10);
    for (int k = 0; k < 4; ++k) {
        eps.push_back(e);
        e /= 10;
    }
    return eps;
}

msl::Box require_box(const msl::Problem& prob) {
    if (!prob.box) throw msl::ProblemError("problem: this command needs a \"box\" field");
    return *prob.box;
}

msl::SearchSchedule schedule_for(const msl::Problem& prob, unsigned budget_flag,
                                 const std::vector<unsigned>& modulus_flag) {
    msl::SearchSchedule sched;
    if (prob.schedule) sched = *prob.schedule;
    if (budget_flag != 0) sched.radius_max = budget_flag;
    if (!modulus_flag.empty()) {
        sched.moduli.clear();
        for (unsigned m : modulus_flag) sched.moduli.push_back(msl::Int(m));
    }
    return sched;
}

std::string witness_to_text(const msl::Witness& w) {
    std::ostringstream os;
    for (std::size_t k = 0; k < w.points.size(); ++k) {
        os << "  (";
        for (std::size_t i = 0; i < w.points[k].size(); ++i) {
            if (i) os << ", ";
            os << w.points[k][i].str();
        }
        os << ")  coeff " << msl::format_rational(w.coeffs[k]) << '\n';
    }
    return os.str();
}

std::vector<std::string> pattern_var_names(std::size_t d) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < d; ++i) names.push_back("y" + std::to_string(i + 1));
    names.push_back("r");
    return names;
}

int cmd_analyze(const std::string& file, const std::string& out_dir) {
    const msl::Problem prob = msl::load_problem_file(file);
    std::cout << "phase: " << prob.phase.to_string() << "\n";
    std::cout << "maps: " << prob.maps.size() << "\n";
    const msl::DegeneracyResult res = msl::decide_degeneracy(prob.phase, prob.maps);

    nlohmann::ordered_json summary;
    if (res.degenerate) {
        std::cout << "verdict: degenerate\n";
        summary["verdict"] = "degenerate";
        summary["parts"] = nlohmann::ordered_json::array();
        for (std::size_t j = 0; j < res.decomposition->parts.size(); ++j) {
            const std::string text = res.decomposition->parts[j].to_string(
                {"t1", "t2", "t3", "t4", "t5", "t6", "t7", "t8"});
            std::cout << "  p" << j + 1 << "(t) = " << text << "\n";
            summary["parts"].push_back(text);
        }
    } else {
        std::cout << "verdict: nondegenerate\n";
        summary["verdict"] = "nondegenerate";
        const msl::Polynomial mono =
            msl::Polynomial::monomial(prob.phase.dimension(), *res.unreachable_monomial, 1);
        std::cout << "  unreachable monomial: " << mono.to_string() << "\n";
        std::cout << "  span codimension: " << res.span_codimension << "\n";
        summary["unreachable_monomial"] = *res.unreachable_monomial;
        summary["span_codimension"] = res.span_codimension;
        bool all_strict = !prob.maps.empty();
        for (const msl::LinearMap& m : prob.maps.maps())
            if (m.codomain_dim() >= m.domain_dim()) all_strict = false;
        if (all_strict) {
            const msl::AnnihilatorResult ann = msl::annihilator_test(prob.phase, prob.maps);
            if (ann.found()) {
                std::cout << "  annihilator probe: " << ann.op->to_string()
                          << " maps phase to " << ann.image.to_string() << "\n";
                summary["annihilator"] = {{"operator", ann.op->to_string()},
                                          {"image", ann.image.to_string()}};
            } else {
                std::cout << "  annihilator probe: inconclusive after "
                          << ann.combinations_tried << " combinations\n";
            }
        }
    }
    if (!out_dir.empty()) write_file(out_dir, "analyze.json", summary.dump(2) + "\n");
    return 0;
}

int cmd_witness(const std::string& file, unsigned budget, const std::vector<unsigned>& moduli,
                const std::string& out_dir) {
    const msl::Problem prob = msl::load_problem_file(file);
    const msl::MapSystem sys = msl::normalize_integer(prob.maps);
    const msl::SearchSchedule sched = schedule_for(prob, budget, moduli);
    const msl::SearchReport rep = msl::find_witness(prob.phase, sys, sched);
    if (!rep.found()) {
        std::cout << "witness: exhausted (radius " << rep.max_radius_tried << ", "
                  << rep.span_tests << " cubes";
        if (!rep.note.empty()) std::cout << "; " << rep.note;
        std::cout << ")\n";
        return 1;
    }
    const msl::Witness& w = *rep.witness;
    std::cout << "witness: found at modulus " << rep.modulus.str() << ", radius "
              << rep.radius << "\n";
    std::cout << witness_to_text(w);
    const msl::WitnessCheck check = msl::verify_witness(w, prob.phase, sys);
    std::cout << "phase pairing: " << msl::format_rational(check.phase_pairing) << "\n";
    const msl::Polynomial h = msl::pattern_polynomial(prob.phase, w);
    std::cout << "pattern polynomial: h(y, r) = "
              << h.to_string(pattern_var_names(prob.phase.dimension())) << "\n";
    if (!out_dir.empty()) write_file(out_dir, "witness.csv", msl::witness_csv(w));
    return 0;
}

int cmd_sublevel(const std::string& file, unsigned resolution, const std::string& mode,
                 std::uint64_t seed, bool adversary, bool scan, const std::string& out_dir) {
    const msl::Problem prob = msl::load_problem_file(file);
    const msl::Box box = require_box(prob);
    const std::vector<Rational> epsilons = epsilon_sweep(prob);
    const msl::SampleMode sample_mode =
        mode == "mc" ? msl::SampleMode::monte_carlo : msl::SampleMode::grid;

    std::optional<msl::Decomposition> dec;
    if (adversary) {
        const msl::DegeneracyResult res = msl::decide_degeneracy(prob.phase, prob.maps);
        if (!res.degenerate)
            throw msl::ProblemError(
                "adversary requested but the phase is nondegenerate for these maps");
        dec = res.decomposition;
    }

    std::vector<msl::SublevelReport> rows;
    for (const Rational& eps : epsilons) {
        std::vector<msl::GridFunction> fns;
        if (dec) {
            fns = msl::degenerate_adversary(prob.phase, prob.maps, *dec, eps, box).fns;
        } else {
            fns.assign(prob.maps.size(), msl::GridFunction::constant(0.0));
        }
        rows.push_back(msl::measure_sublevel(prob.phase, prob.maps, fns, eps, box, resolution,
                                             sample_mode, seed));
    }
    std::cout << "epsilon,hits,samples,measure\n";
    for (const msl::SublevelReport& r : rows)
        std::cout << msl::format_rational(r.epsilon) << ',' << r.hits << ',' << r.samples
                  << ',' << msl::format_double(r.measure_d()) << "\n";
    if (!out_dir.empty()) write_file(out_dir, "sublevel.csv", msl::sublevel_csv(rows));

    if (!scan) return 0;

    // Exclusion scan: configurations x + rS inside the measured sublevel sets
    // must satisfy |h(x, r)| <= (sum |c_s|) eps.
    const msl::MapSystem sys = msl::normalize_integer(prob.maps);
    const msl::SearchReport rep = msl::find_witness(prob.phase, sys, schedule_for(prob, 0, {}));
    if (!rep.found()) {
        std::cout << "scan: no witness within budget; nothing to scan\n";
        return 1;
    }
    msl::Int max_coord = 1;
    for (const auto& pt : rep.witness->points)
        for (const msl::Int& c : pt) max_coord = std::max(max_coord, msl::Int(abs(c)));
    Rational min_side = box.sides[0].second - box.sides[0].first;
    for (const auto& [lo, hi] : box.sides) min_side = std::min(min_side, Rational(hi - lo));
    std::vector<Rational> ratios;
    for (int k = 3; k <= 5; ++k)
        ratios.push_back(min_side / (Rational(max_coord) * Rational(1 << k)));

    std::size_t total_violations = 0;
    msl::ScanReport last;
    for (const Rational& eps : epsilons) {
        std::vector<msl::GridFunction> fns;
        if (dec)
            fns = msl::degenerate_adversary(prob.phase, prob.maps, *dec, eps, box).fns;
        else
            fns.assign(prob.maps.size(), msl::GridFunction::constant(0.0));
        const msl::ScanReport scan_rep = msl::pattern_exclusion_scan(
            prob.phase, prob.maps, *rep.witness, fns, eps, box, resolution, ratios);
        std::cout << "scan eps " << msl::format_rational(eps) << ": "
                  << scan_rep.configurations << " configurations, " << scan_rep.contained
                  << " inside, " << scan_rep.violations.size() << " violations\n";
        total_violations += scan_rep.violations.size();
        last = scan_rep;
    }
    if (!out_dir.empty())
        write_file(out_dir, "scan.csv", msl::scan_csv(last, prob.phase.dimension()));
    return total_violations == 0 ? 0 : 1;
}

int cmd_periodic(const std::string& file, unsigned resolution, const std::string& out_dir) {
    const msl::Problem prob = msl::load_problem_file(file);
    const msl::Box box = require_box(prob);
    const std::vector<Rational> epsilons = epsilon_sweep(prob);
    const std::vector<double> lambdas = lambda_sweep(prob);
    std::vector<msl::GridFunction> fns(prob.maps.size(), msl::GridFunction::constant(0.0));
    std::vector<msl::PeriodicReport> rows;
    for (const Rational& eps : epsilons)
        for (const double lambda : lambdas)
            rows.push_back(msl::measure_periodic_sublevel(
                prob.phase, prob.maps, fns, msl::to_double(eps), lambda, box, resolution));
    std::cout << "epsilon,lambda,hits,samples,measure\n";
    for (const msl::PeriodicReport& r : rows)
        std::cout << msl::format_double(r.epsilon) << ',' << msl::format_double(r.lambda)
                  << ',' << r.hits << ',' << r.samples << ',' << msl::format_double(r.measure)
                  << "\n";
    if (!out_dir.empty()) write_file(out_dir, "periodic.csv", msl::periodic_csv(rows));
    return 0;
}

int cmd_density(const std::string& file, unsigned grid_max, std::size_t cap,
                std::uint64_t seed, const std::string& out_dir) {
    const msl::Problem prob = msl::load_problem_file(file);
    if (!prob.pattern)
        throw msl::ProblemError("problem: density needs a \"pattern\" field");
    msl::PatternInstance inst = *prob.pattern;
    const unsigned to = grid_max != 0 ? grid_max : inst.grid;
    const std::vector<msl::DensityRow> rows = msl::density_curve(inst, 1, to, cap, seed);
    std::cout << "grid,size,density,exact\n";
    for (const msl::DensityRow& r : rows)
        std::cout << r.grid << ',' << r.size << ',' << msl::format_double(r.density) << ','
                  << (r.exact ? 1 : 0) << "\n";
    if (!out_dir.empty()) write_file(out_dir, "density.csv", msl::density_csv(rows));
    return 0;
}

int cmd_oscint(const std::string& file, unsigned resolution, bool modulated,
               const std::string& mod_epsilon, const std::string& out_dir) {
    const msl::Problem prob = msl::load_problem_file(file);
    const msl::Box box = require_box(prob);
    const std::vector<double> lambdas = lambda_sweep(prob);
    std::vector<msl::GridFunction> fns;
    if (modulated) {
        const msl::DegeneracyResult res = msl::decide_degeneracy(prob.phase, prob.maps);
        if (!res.degenerate)
            throw msl::ProblemError(
                "modulation requested but the phase is nondegenerate for these maps");
        const Rational eps = msl::parse_rational(mod_epsilon);
        fns = msl::degenerate_adversary(prob.phase, prob.maps, *res.decomposition, eps, box)
                  .fns;
    } else {
        fns.assign(prob.maps.size(), msl::GridFunction::constant(1.0));
    }
    const msl::DecayCurve curve =
        msl::decay_curve(prob.phase, prob.maps, fns, box, lambdas, resolution, modulated);
    std::cout << "lambda,resolution,re,im,abs\n";
    for (const msl::DecayRow& r : curve.rows)
        std::cout << msl::format_double(r.lambda) << ',' << r.resolution << ','
                  << msl::format_double(r.value.real()) << ','
                  << msl::format_double(r.value.imag()) << ','
                  << msl::format_double(std::abs(r.value)) << "\n";
    std::cout << "top-decade slope: " << msl::format_double(curve.slope) << "\n";
    if (!out_dir.empty()) write_file(out_dir, "decay.csv", msl::decay_csv(curve));
    return 0;
}

int cmd_selftest() {
    const std::vector<msl::SelftestResult> results = msl::run_selftest();
    bool all = true;
    for (const msl::SelftestResult& r : results) {
        std::cout << (r.passed ? "PASS" : "FAIL") << ' ' << r.name;
        if (!r.passed && !r.detail.empty()) std::cout << " (" << r.detail << ")";
        std::cout << "\n";
        all = all && r.passed;
    }
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nondegeneracy certificates, finite witnesses, and sublevel measurements "
                 "for polynomial phases against families of linear maps"};
    app.require_subcommand(1);

    std::string file, out_dir, mode = "grid", mod_epsilon = "1/512";
    unsigned resolution = 64, budget = 0, grid_max = 0, osc_resolution = 0;
    std::uint64_t seed = 1;
    std::size_t cap = 4096;
    std::vector<unsigned> moduli;
    bool adversary = false, scan = false, modulated = false;

    CLI::App* analyze = app.add_subcommand("analyze", "decide degeneracy with certificates");
    analyze->add_option("file", file, "problem JSON")->required();
    analyze->add_option("--out", out_dir, "directory for analyze.json");

    CLI::App* witness = app.add_subcommand("witness", "search scaled cubes for a witness");
    witness->add_option("file", file, "problem JSON")->required();
    witness->add_option("--budget", budget, "max cube radius (default from file or 6)");
    witness->add_option("--modulus", moduli, "lattice scales to try")->delimiter(',');
    witness->add_option("--out", out_dir, "directory for witness.csv");

    CLI::App* sublevel = app.add_subcommand("sublevel", "measure sublevel sets on the box");
    sublevel->add_option("file", file, "problem JSON")->required();
    sublevel->add_option("--resolution", resolution, "samples per axis (default 64)");
    sublevel->add_option("--mode", mode, "grid or mc")
        ->check(CLI::IsMember({"grid", "mc"}));
    sublevel->add_option("--seed", seed, "Monte Carlo seed");
    sublevel->add_flag("--adversary", adversary,
                       "tabulate worst-case grid functions (degenerate phases only)");
    sublevel->add_flag("--scan", scan, "check the witness exclusion inequality");
    sublevel->add_option("--out", out_dir, "directory for sublevel.csv");

    CLI::App* periodic = app.add_subcommand("periodic", "measure distance-to-2piZ sublevel sets");
    periodic->add_option("file", file, "problem JSON")->required();
    periodic->add_option("--resolution", resolution, "samples per axis (default 64)");
    periodic->add_option("--out", out_dir, "directory for periodic.csv");

    CLI::App* density = app.add_subcommand("density", "pattern-free density curve");
    density->add_option("file", file, "problem JSON with a pattern field")->required();
    density->add_option("--grid-max", grid_max, "largest grid size (default from file)");
    density->add_option("--cap", cap, "exact-solver cell cap (default 4096)");
    density->add_option("--seed", seed, "greedy fallback seed");
    density->add_option("--out", out_dir, "directory for density.csv");

    CLI::App* oscint = app.add_subcommand("oscint", "oscillatory integral decay curve");
    oscint->add_option("file", file, "problem JSON")->required();
    oscint->add_option("--resolution", osc_resolution,
                       "samples per axis (default: anti-aliasing guard)");
    oscint->add_flag("--modulated", modulated,
                     "adversarial phase tables (degenerate phases only)");
    oscint->add_option("--mod-epsilon", mod_epsilon,
                       "residual height for the adversary (default 1/512)");
    oscint->add_option("--out", out_dir, "directory for decay.csv");

    CLI::App* selftest = app.add_subcommand("selftest", "run built-in checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(file, out_dir);
        if (witness->parsed()) return cmd_witness(file, budget, moduli, out_dir);
        if (sublevel->parsed())
            return cmd_sublevel(file, resolution, mode, seed, adversary, scan, out_dir);
        if (periodic->parsed()) return cmd_periodic(file, resolution, out_dir);
        if (density->parsed()) return cmd_density(file, grid_max, cap, seed, out_dir);
        if (oscint->parsed())
            return cmd_oscint(file, osc_resolution, modulated, mod_epsilon, out_dir);
        if (selftest->parsed()) return cmd_selftest();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
