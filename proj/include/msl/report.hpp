#pragma once

// Report formatting.
//
// Every artifact the tools emit goes through these writers: CSV with LF line
// endings, a fixed header row, rationals in canonical "n/d" form and doubles
// through one fixed "%.12g" format.  Identical inputs therefore produce
// byte-identical files.  The witness CSV round-trips: written witnesses parse
// back losslessly.

#include <msl/density.hpp>
#include <msl/measure.hpp>
#include <msl/oscint.hpp>
#include <msl/rational.hpp>
#include <msl/witness.hpp>

#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace msl {

inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline std::string sublevel_csv(const std::vector<SublevelReport>& rows) {
    std::ostringstream os;
    os << "epsilon,hits,samples,measure\n";
    for (const SublevelReport& r : rows)
        os << format_rational(r.epsilon) << ',' << r.hits << ',' << r.samples << ','
           << format_double(r.measure_d()) << '\n';
    return os.str();
}

inline std::string periodic_csv(const std::vector<PeriodicReport>& rows) {
    std::ostringstream os;
    os << "epsilon,lambda,hits,samples,measure\n";
    for (const PeriodicReport& r : rows)
        os << format_double(r.epsilon) << ',' << format_double(r.lambda) << ',' << r.hits
           << ',' << r.samples << ',' << format_double(r.measure) << '\n';
    return os.str();
}

inline std::string density_csv(const std::vector<DensityRow>& rows) {
    std::ostringstream os;
    os << "grid,size,density,exact\n";
    for (const DensityRow& r : rows)
        os << r.grid << ',' << r.size << ',' << format_double(r.density) << ','
           << (r.exact ? 1 : 0) << '\n';
    return os.str();
}

inline std::string decay_csv(const DecayCurve& curve) {
    std::ostringstream os;
    os << "lambda,resolution,re,im,abs\n";
    for (const DecayRow& r : curve.rows)
        os << format_double(r.lambda) << ',' << r.resolution << ','
           << format_double(r.value.real()) << ',' << format_double(r.value.imag()) << ','
           << format_double(std::abs(r.value)) << '\n';
    return os.str();
}

inline std::string scan_csv(const ScanReport& report, std::size_t dim) {
    std::ostringstream os;
    for (std::size_t i = 0; i < dim; ++i) os << 'x' << i + 1 << ',';
    os << "r,h,bound\n";
    for (const ScanRecord& v : report.violations) {
        for (const Rational& x : v.base) os << format_rational(x) << ',';
        os << format_rational(v.ratio) << ',' << format_rational(v.h_value) << ','
           << format_rational(v.bound) << '\n';
    }
    return os.str();
}

inline std::string witness_csv(const Witness& w) {
    if (w.points.empty()) throw std::invalid_argument("witness_csv: empty witness");
    std::ostringstream os;
    const std::size_t d = w.points.front().size();
    for (std::size_t i = 0; i < d; ++i) os << 's' << i + 1 << ',';
    os << "coeff\n";
    for (std::size_t k = 0; k < w.points.size(); ++k) {
        for (const Int& x : w.points[k]) os << x.str() << ',';
        os << format_rational(w.coeffs[k]) << '\n';
    }
    return os.str();
}

/// Parses the witness_csv format back; the inverse of witness_csv.
inline Witness witness_from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("witness csv: empty file");
    std::size_t d = 0;
    {
        std::istringstream header(line);
        std::string field;
        bool coeff_seen = false;
        while (std::getline(header, field, ',')) {
            if (field == "coeff")
                coeff_seen = true;
            else if (!coeff_seen)
                ++d;
            else
                throw std::invalid_argument("witness csv: fields after coeff column");
        }
        if (!coeff_seen || d == 0)
            throw std::invalid_argument("witness csv: header must be s1,...,sd,coeff");
    }
    Witness w;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<Int> pt;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != d + 1)
            throw std::invalid_argument("witness csv: line " + std::to_string(line_no) +
                                        ": expected " + std::to_string(d + 1) + " fields");
        try {
            for (std::size_t i = 0; i < d; ++i) pt.emplace_back(Int(fields[i]));
            w.coeffs.push_back(parse_rational(fields[d]));
        } catch (const std::exception& e) {
            throw std::invalid_argument("witness csv: line " + std::to_string(line_no) + ": " +
                                        e.what());
        }
        w.points.push_back(std::move(pt));
    }
    if (w.points.empty()) throw std::invalid_argument("witness csv: no data rows");
    return w;
}

}  // namespace msl
