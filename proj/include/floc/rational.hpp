#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace floc {

// Arbitrary-precision exact arithmetic. cpp_rational keeps values canonical:
// lowest terms, positive denominator.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Rat rat(long long num, long long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    return Rat(Int(num), Int(den));
}

inline Int rat_num(const Rat& r) { return numerator(r); }
inline Int rat_den(const Rat& r) { return denominator(r); }

inline double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

inline std::string rat_str(const Rat& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

// Accepts "3", "-3", "3/14"; returns nullopt on anything else.
inline std::optional<Rat> parse_rat(std::string_view s) {
    if (s.empty()) return std::nullopt;
    auto digits = [](std::string_view t) {
        if (t.empty()) return false;
        size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); i++)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    };
    size_t slash = s.find('/');
    try {
        if (slash == std::string_view::npos) {
            if (!digits(s)) return std::nullopt;
            return Rat(Int(std::string(s)));
        }
        std::string_view a = s.substr(0, slash), b = s.substr(slash + 1);
        if (!digits(a) || !digits(b)) return std::nullopt;
        Int den{std::string(b)};
        if (den == 0) return std::nullopt;
        return Rat(Int(std::string(a)), den);
    } catch (...) {
        return std::nullopt;
    }
}

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

}  // namespace floc
