#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pypl {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using RatVec = std::vector<Rational>;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Exact conversion: every finite double is p * 2^e with integer p, e.
inline Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("rational_from_double: non-finite value");
    if (x == 0.0) return Rational(0);
    int exp = 0;
    double mant = std::frexp(x, &exp);
    // 53 bits of mantissa
    auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
    exp -= 53;
    Rational r(scaled);
    if (exp >= 0) {
        r *= Rational(Int(1) << exp);
    } else {
        r /= Rational(Int(1) << (-exp));
    }
    return r;
}

/// Parses "p/q", integers, and plain decimals ("1.5", "-0.25") exactly.
inline Rational rational_from_string(const std::string& s) {
    auto bad = [&] { throw std::invalid_argument("not a rational literal: '" + s + "'"); };
    if (s.empty()) bad();
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rational num(rational_from_string(s.substr(0, slash)));
        Rational den(rational_from_string(s.substr(slash + 1)));
        if (den == 0) bad();
        return num / den;
    }
    std::size_t i = 0;
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') {
        neg = (s[i] == '-');
        ++i;
    }
    Int digits = 0;
    Int denom = 1;
    bool seen_digit = false, seen_dot = false;
    for (; i < s.size(); ++i) {
        if (s[i] == '.') {
            if (seen_dot) bad();
            seen_dot = true;
        } else if (s[i] >= '0' && s[i] <= '9') {
            digits = digits * 10 + (s[i] - '0');
            if (seen_dot) denom *= 10;
            seen_digit = true;
        } else {
            bad();
        }
    }
    if (!seen_digit) bad();
    Rational r(digits, denom);
    return neg ? -r : r;
}

inline std::string to_string(const Rational& r) { return r.str(); }

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

}  // namespace pypl
