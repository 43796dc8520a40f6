#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <vector>

namespace stab {

// Exact rational scalar. cpp_rational keeps gcd(|num|, den) = 1 and den > 0,
// which is exactly the canonical form required throughout.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline Rational make_rational(long num, long den = 1) {
    return Rational(Integer(num), Integer(den));
}

inline Integer num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer den(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rational& q) { return den(q) == 1; }

// "p/q" with the "/q" part omitted for integers.
inline std::string rat_to_string(const Rational& q) {
    std::string s = num(q).str();
    if (den(q) != 1) {
        s += "/";
        s += den(q).str();
    }
    return s;
}

// Accepts "n" or "n/d" with d > 0. Returns nullopt on malformed input.
inline std::optional<Rational> rat_from_string(const std::string& s) {
    auto is_int = [](const std::string& t) {
        if (t.empty()) return false;
        std::size_t i = (t[0] == '-') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    };
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            if (!is_int(s)) return std::nullopt;
            return Rational(Integer(s));
        }
        std::string n = s.substr(0, slash), d = s.substr(slash + 1);
        if (!is_int(n) || !is_int(d) || d[0] == '-') return std::nullopt;
        Integer di(d);
        if (di == 0) return std::nullopt;
        return Rational(Integer(n), di);
    } catch (...) {
        return std::nullopt;
    }
}

using Vec = std::vector<Rational>;

inline Rational dot(const Vec& a, const Vec& b) {
    Rational r = 0;
    for (std::size_t i = 0; i < a.size(); ++i) r += a[i] * b[i];
    return r;
}

inline bool is_zero(const Vec& v) {
    for (const auto& c : v)
        if (c != 0) return false;
    return true;
}

} // namespace stab
