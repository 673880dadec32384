#ifndef VPND_RATIONAL_HPP
#define VPND_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace vpnd {

/// Exact rational number. Always stored reduced with positive denominator,
/// so equality of values is equality of representations.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline BigInt numerator_of(const Rational& r) { return numerator(r); }
inline BigInt denominator_of(const Rational& r) { return denominator(r); }

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

/// Canonical text form: "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

/// Parses "p" or "p/q" (q > 0 after normalization). Returns nullopt on
/// malformed input instead of throwing; callers attach file/line context.
inline std::optional<Rational> parse_rational(const std::string& text) {
    if (text.empty()) return std::nullopt;
    auto is_int = [](const std::string& s) {
        if (s.empty()) return false;
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    try {
        auto slash = text.find('/');
        if (slash == std::string::npos) {
            if (!is_int(text)) return std::nullopt;
            return Rational(BigInt(text));
        }
        std::string num = text.substr(0, slash);
        std::string den = text.substr(slash + 1);
        if (!is_int(num) || !is_int(den)) return std::nullopt;
        BigInt d(den);
        if (d == 0) return std::nullopt;
        return Rational(BigInt(num), d);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

}  // namespace vpnd

#endif  // VPND_RATIONAL_HPP
