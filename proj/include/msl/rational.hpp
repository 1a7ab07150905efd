#pragma once

// Exact scalar arithmetic used throughout the library.
//
// Every algebraic computation (polynomial arithmetic, elimination, witness
// search) runs over arbitrary-precision rationals; floating point appears
// only in the measurement and quadrature layers.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace msl {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// cpp_rational keeps values canonical: gcd-reduced, positive denominator.

inline Int int_gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int int_lcm(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }

inline Int rat_num(const Rational& r) { return numerator(r); }
inline Int rat_den(const Rational& r) { return denominator(r); }

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

/// Largest integer <= r.
inline Int rat_floor(const Rational& r) {
    Int q = numerator(r) / denominator(r);
    if (numerator(r) < 0 && q * denominator(r) != numerator(r)) --q;
    return q;
}

inline Int rat_ceil(const Rational& r) { return -rat_floor(-r); }

inline Rational rat_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

/// Parses "num", "-num" or "num/den" with a nonzero denominator.
inline Rational parse_rational(const std::string& text) {
    auto bad = [&](const char* why) {
        throw std::invalid_argument("invalid rational '" + text + "': " + why);
    };
    if (text.empty()) bad("empty");
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(Int(text));
        const std::string num = text.substr(0, slash);
        const std::string den = text.substr(slash + 1);
        if (num.empty() || den.empty()) bad("missing numerator or denominator");
        Int d(den);
        if (d == 0) bad("zero denominator");
        return Rational(Int(num), d);
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        bad("not a number");
    }
    return Rational();  // unreachable
}

/// Canonical text form: "n" when integral, "n/d" otherwise.
inline std::string format_rational(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) {
        s += '/';
        s += denominator(r).str();
    }
    return s;
}

inline std::vector<Rational> to_rational_vector(const std::vector<Int>& v) {
    std::vector<Rational> out;
    out.reserve(v.size());
    for (const Int& x : v) out.emplace_back(x);
    return out;
}

}  // namespace msl
