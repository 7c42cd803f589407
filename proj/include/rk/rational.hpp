#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

#include "rk/errors.hpp"

namespace rk {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational with arbitrary-precision integer parts. cpp_rational keeps
// the canonical form we rely on: gcd(|num|, den) = 1 and den > 0.
using Rational = boost::multiprecision::cpp_rational;

inline BigInt rational_num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt rational_den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Renders as "p/q", or just "p" for integers.
inline std::string to_string(const Rational& r) {
    std::string s = rational_num(r).str();
    if (rational_den(r) != 1) s += "/" + rational_den(r).str();
    return s;
}

/// Parses "p/q" or a plain integer string. Throws ValidationError otherwise.
inline Rational parse_rational(std::string_view text) {
    const auto bad = [&] {
        return ValidationError("not a rational literal: '" + std::string(text) + "'");
    };
    if (text.empty()) throw bad();
    const auto slash = text.find('/');
    try {
        if (slash == std::string_view::npos) return Rational(BigInt(std::string(text)));
        BigInt num{std::string(text.substr(0, slash))};
        BigInt den{std::string(text.substr(slash + 1))};
        if (den == 0) throw bad();
        if (den < 0) {  // canonical form keeps the denominator positive
            num = -num;
            den = -den;
        }
        return Rational(num, den);
    } catch (const std::exception&) {
        throw bad();
    }
}

}  // namespace rk
