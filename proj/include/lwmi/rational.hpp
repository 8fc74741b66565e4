#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include "lwmi/errors.hpp"

namespace lwmi {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

inline double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

// Canonical text form: "p/q" in lowest terms, or just "p" for integers.
inline std::string rat_to_string(const Rat& r) {
    std::string s = rat_num(r).str();
    if (rat_den(r) != 1) {
        s += '/';
        s += rat_den(r).str();
    }
    return s;
}

namespace detail {

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

inline Int int_from_digits(std::string_view s) {
    return Int(std::string(s));
}

inline Int pow10(std::size_t k) {
    Int p = 1;
    for (std::size_t i = 0; i < k; ++i) p *= 10;
    return p;
}

} // namespace detail

// Parses "p/q", plain integers, and decimal/scientific literals, all
// exactly: "0.1" becomes 1/10, "2.5e-1" becomes 1/4. Throws input_error
// on anything else.
inline Rat rat_parse(std::string_view text) {
    std::string_view s = text;
    if (s.empty()) throw input_error("empty rational literal");

    bool neg = false;
    if (s.front() == '+' || s.front() == '-') {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty()) throw input_error("bare sign is not a rational: '" + std::string(text) + "'");

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        std::string_view num = s.substr(0, slash);
        std::string_view den = s.substr(slash + 1);
        if (!detail::all_digits(num) || !detail::all_digits(den))
            throw input_error("malformed rational: '" + std::string(text) + "'");
        Int q = detail::int_from_digits(den);
        if (q == 0) throw input_error("zero denominator: '" + std::string(text) + "'");
        Rat r(detail::int_from_digits(num), q);
        return neg ? Rat(-r) : r;
    }

    // decimal / scientific
    std::string_view mant = s;
    long long exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        mant = s.substr(0, e);
        std::string_view es = s.substr(e + 1);
        bool eneg = false;
        if (!es.empty() && (es.front() == '+' || es.front() == '-')) {
            eneg = es.front() == '-';
            es.remove_prefix(1);
        }
        if (!detail::all_digits(es) || es.size() > 6)
            throw input_error("malformed exponent: '" + std::string(text) + "'");
        exp10 = std::stoll(std::string(es));
        if (eneg) exp10 = -exp10;
    }

    std::string_view ip = mant, fp;
    if (auto dot = mant.find('.'); dot != std::string_view::npos) {
        ip = mant.substr(0, dot);
        fp = mant.substr(dot + 1);
        if (ip.empty() && fp.empty())
            throw input_error("malformed number: '" + std::string(text) + "'");
        if (!ip.empty() && !detail::all_digits(ip))
            throw input_error("malformed number: '" + std::string(text) + "'");
        if (!fp.empty() && !detail::all_digits(fp))
            throw input_error("malformed number: '" + std::string(text) + "'");
    } else if (!detail::all_digits(ip)) {
        throw input_error("malformed number: '" + std::string(text) + "'");
    }

    Int digits = 0;
    if (!ip.empty()) digits = detail::int_from_digits(ip);
    for (char c : fp) digits = digits * 10 + (c - '0');

    Rat r(digits);
    long long shift = exp10 - static_cast<long long>(fp.size());
    if (shift > 0)
        r *= Rat(detail::pow10(static_cast<std::size_t>(shift)));
    else if (shift < 0)
        r /= Rat(detail::pow10(static_cast<std::size_t>(-shift)));
    return neg ? Rat(-r) : r;
}

} // namespace lwmi
