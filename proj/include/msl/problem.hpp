#pragma once

// Problem files.
//
// A problem bundles a phase polynomial with a map family plus the optional
// data the measurement tools need: a box, epsilon and lambda sweeps, a
// witness-search budget, and a density pattern.  The on-disk form is JSON
// with rationals as strings ("3/4"), so nothing is lost to parsing.  The
// parser is strict -- unknown fields and malformed entries are rejected with
// a field path -- and the serializer is canonical, so parse-then-serialize is
// idempotent and reports stay byte-stable.

#include <msl/density.hpp>
#include <msl/linear_map.hpp>
#include <msl/measure.hpp>
#include <msl/polynomial.hpp>
#include <msl/witness.hpp>

#include <json.hpp>

#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace msl {

class ProblemError : public std::runtime_error {
public:
    explicit ProblemError(const std::string& what) : std::runtime_error(what) {}
};

struct Problem {
    Polynomial phase{1};
    MapSystem maps;
    std::optional<Box> box;
    std::vector<Rational> epsilons;
    std::vector<double> lambdas;
    std::optional<SearchSchedule> schedule;
    std::optional<PatternInstance> pattern;
};

namespace detail {

using Json = nlohmann::ordered_json;

[[noreturn]] inline void fail(const std::string& path, const std::string& why) {
    throw ProblemError("problem: " + path + ": " + why);
}

inline Rational parse_rational_field(const Json& j, const std::string& path) {
    try {
        if (j.is_number_integer()) return Rational(Int(j.get<long long>()));
        if (j.is_string()) return parse_rational(j.get<std::string>());
    } catch (const std::exception& e) {
        fail(path, e.what());
    }
    fail(path, "expected a rational as string (\"3/4\") or integer");
}

inline void check_keys(const Json& j, const std::string& path,
                       std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) fail(path.empty() ? key : path + "." + key, "unknown field");
    }
}

inline Polynomial parse_phase(const Json& j) {
    if (!j.is_object()) fail("phase", "expected an object");
    check_keys(j, "phase", {"dimension", "terms"});
    if (!j.contains("dimension") || !j["dimension"].is_number_unsigned())
        fail("phase.dimension", "expected a positive integer");
    const std::size_t d = j["dimension"].get<std::size_t>();
    if (d == 0 || d > 8) fail("phase.dimension", "must be between 1 and 8");
    if (!j.contains("terms") || !j["terms"].is_array())
        fail("phase.terms", "expected an array of [exponents, coefficient] pairs");
    Polynomial p(d);
    std::size_t k = 0;
    for (const Json& term : j["terms"]) {
        const std::string path = "phase.terms[" + std::to_string(k++) + "]";
        if (!term.is_array() || term.size() != 2)
            fail(path, "expected [exponents, coefficient]");
        const Json& ej = term[0];
        if (!ej.is_array() || ej.size() != d)
            fail(path, "exponent list must have length " + std::to_string(d));
        Exponents e(d);
        for (std::size_t i = 0; i < d; ++i) {
            if (!ej[i].is_number_unsigned()) fail(path, "exponents must be nonnegative integers");
            e[i] = ej[i].get<unsigned>();
        }
        p.add_term(std::move(e), parse_rational_field(term[1], path));
    }
    return p;
}

inline MapSystem parse_maps(const Json& j) {
    if (!j.is_array()) fail("maps", "expected an array");
    std::vector<LinearMap> maps;
    std::size_t k = 0;
    for (const Json& mj : j) {
        const std::string path = "maps[" + std::to_string(k++) + "]";
        if (!mj.is_object()) fail(path, "expected an object");
        check_keys(mj, path, {"matrix"});
        if (!mj.contains("matrix") || !mj["matrix"].is_array() || mj["matrix"].empty())
            fail(path + ".matrix", "expected a nonempty array of rows");
        const Json& rows = mj["matrix"];
        const std::size_t nc = rows[0].is_array() ? rows[0].size() : 0;
        if (nc == 0) fail(path + ".matrix", "rows must be nonempty arrays");
        RatMatrix m(rows.size(), nc);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (!rows[r].is_array() || rows[r].size() != nc)
                fail(path + ".matrix", "ragged rows");
            for (std::size_t c = 0; c < nc; ++c)
                m.at(r, c) = parse_rational_field(
                    rows[r][c], path + ".matrix[" + std::to_string(r) + "][" +
                                    std::to_string(c) + "]");
        }
        maps.push_back({std::move(m)});
    }
    try {
        return MapSystem(std::move(maps));
    } catch (const std::invalid_argument& e) {
        fail("maps", e.what());
    }
}

inline Box parse_box(const Json& j, std::size_t d) {
    if (!j.is_array() || j.size() != d)
        fail("box", "expected " + std::to_string(d) + " [lo, hi] pairs");
    Box box;
    for (std::size_t i = 0; i < d; ++i) {
        const std::string path = "box[" + std::to_string(i) + "]";
        if (!j[i].is_array() || j[i].size() != 2) fail(path, "expected [lo, hi]");
        Rational lo = parse_rational_field(j[i][0], path);
        Rational hi = parse_rational_field(j[i][1], path);
        if (lo >= hi) fail(path, "lo must be below hi");
        box.sides.push_back({std::move(lo), std::move(hi)});
    }
    return box;
}

inline PatternInstance parse_pattern(const Json& j) {
    if (!j.is_object()) fail("pattern", "expected an object");
    check_keys(j, "pattern", {"dimension", "points", "grid"});
    PatternInstance inst;
    if (!j.contains("dimension") || !j["dimension"].is_number_unsigned())
        fail("pattern.dimension", "expected a positive integer");
    inst.dim = j["dimension"].get<std::size_t>();
    if (!j.contains("grid") || !j["grid"].is_number_unsigned())
        fail("pattern.grid", "expected a positive integer");
    inst.grid = j["grid"].get<unsigned>();
    if (!j.contains("points") || !j["points"].is_array())
        fail("pattern.points", "expected an array of integer points");
    std::size_t k = 0;
    for (const Json& pj : j["points"]) {
        const std::string path = "pattern.points[" + std::to_string(k++) + "]";
        if (!pj.is_array() || pj.size() != inst.dim)
            fail(path, "expected " + std::to_string(inst.dim) + " coordinates");
        std::vector<long> pt(inst.dim);
        for (std::size_t i = 0; i < inst.dim; ++i) {
            if (!pj[i].is_number_integer()) fail(path, "coordinates must be integers");
            pt[i] = pj[i].get<long>();
        }
        inst.shape.push_back(std::move(pt));
    }
    try {
        validate_pattern(inst);
    } catch (const std::invalid_argument& e) {
        fail("pattern", e.what());
    }
    return inst;
}

}  // namespace detail

inline Problem parse_problem(const std::string& text) {
    detail::Json j;
    try {
        j = detail::Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ProblemError(std::string("problem: not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ProblemError("problem: top level must be an object");
    detail::check_keys(j, "", {"phase", "maps", "box", "epsilons", "lambdas", "budget",
                               "modulus", "pattern"});
    if (!j.contains("phase")) detail::fail("phase", "missing");
    if (!j.contains("maps")) detail::fail("maps", "missing");

    Problem prob;
    prob.phase = detail::parse_phase(j["phase"]);
    prob.maps = detail::parse_maps(j["maps"]);
    if (!prob.maps.empty() && prob.maps.domain_dim() != prob.phase.dimension())
        detail::fail("maps", "domain dimension " + std::to_string(prob.maps.domain_dim()) +
                                 " does not match phase dimension " +
                                 std::to_string(prob.phase.dimension()));
    if (j.contains("box")) prob.box = detail::parse_box(j["box"], prob.phase.dimension());
    if (j.contains("epsilons")) {
        if (!j["epsilons"].is_array()) detail::fail("epsilons", "expected an array");
        std::size_t k = 0;
        for (const detail::Json& e : j["epsilons"]) {
            const std::string path = "epsilons[" + std::to_string(k++) + "]";
            Rational eps = detail::parse_rational_field(e, path);
            if (eps <= 0) detail::fail(path, "must be positive");
            prob.epsilons.push_back(std::move(eps));
        }
    }
    if (j.contains("lambdas")) {
        if (!j["lambdas"].is_array()) detail::fail("lambdas", "expected an array");
        std::size_t k = 0;
        for (const detail::Json& l : j["lambdas"]) {
            const std::string path = "lambdas[" + std::to_string(k++) + "]";
            if (!l.is_number()) detail::fail(path, "expected a number");
            prob.lambdas.push_back(l.get<double>());
        }
    }
    if (j.contains("budget") || j.contains("modulus")) {
        SearchSchedule sched;
        if (j.contains("budget")) {
            if (!j["budget"].is_number_unsigned() || j["budget"].get<unsigned>() == 0)
                detail::fail("budget", "expected a positive integer");
            sched.radius_max = j["budget"].get<unsigned>();
        }
        if (j.contains("modulus")) {
            if (!j["modulus"].is_array() || j["modulus"].empty())
                detail::fail("modulus", "expected a nonempty array of positive integers");
            sched.moduli.clear();
            std::size_t k = 0;
            for (const detail::Json& m : j["modulus"]) {
                const std::string path = "modulus[" + std::to_string(k++) + "]";
                if (!m.is_number_unsigned() || m.get<unsigned>() == 0)
                    detail::fail(path, "expected a positive integer");
                sched.moduli.push_back(Int(m.get<unsigned long long>()));
            }
        }
        prob.schedule = sched;
    }
    if (j.contains("pattern")) prob.pattern = detail::parse_pattern(j["pattern"]);
    return prob;
}

inline std::string problem_to_json(const Problem& prob) {
    detail::Json j;
    detail::Json phase;
    phase["dimension"] = prob.phase.dimension();
    phase["terms"] = detail::Json::array();
    for (const auto& [e, c] : prob.phase.terms())
        phase["terms"].push_back({e, format_rational(c)});
    j["phase"] = std::move(phase);
    j["maps"] = detail::Json::array();
    for (const LinearMap& m : prob.maps.maps()) {
        detail::Json rows = detail::Json::array();
        for (std::size_t r = 0; r < m.matrix.rows(); ++r) {
            detail::Json row = detail::Json::array();
            for (std::size_t c = 0; c < m.matrix.cols(); ++c)
                row.push_back(format_rational(m.matrix.at(r, c)));
            rows.push_back(std::move(row));
        }
        j["maps"].push_back({{"matrix", std::move(rows)}});
    }
    if (prob.box) {
        detail::Json box = detail::Json::array();
        for (const auto& [lo, hi] : prob.box->sides)
            box.push_back({format_rational(lo), format_rational(hi)});
        j["box"] = std::move(box);
    }
    if (!prob.epsilons.empty()) {
        detail::Json eps = detail::Json::array();
        for (const Rational& e : prob.epsilons) eps.push_back(format_rational(e));
        j["epsilons"] = std::move(eps);
    }
    if (!prob.lambdas.empty()) j["lambdas"] = prob.lambdas;
    if (prob.schedule) {
        j["budget"] = prob.schedule->radius_max;
        detail::Json mods = detail::Json::array();
        for (const Int& m : prob.schedule->moduli)
            mods.push_back(m.convert_to<unsigned long long>());
        j["modulus"] = std::move(mods);
    }
    if (prob.pattern) {
        detail::Json pat;
        pat["dimension"] = prob.pattern->dim;
        pat["points"] = prob.pattern->shape;
        pat["grid"] = prob.pattern->grid;
        j["pattern"] = std::move(pat);
    }
    return j.dump(2) + "\n";
}

inline Problem load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ProblemError("problem: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_problem(buf.str());
}

}  // namespace msl
