#pragma once

// Exact rational scalar used throughout the library, plus text conversion.

#include <gmpxx.h>

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kfr {

using Rational = mpq_class;

inline Rational abs_diff(const Rational& a, const Rational& b) {
    Rational d = a - b;
    if (sgn(d) < 0) d = -d;
    return d;
}

inline Rational abs_of(const Rational& a) { return sgn(a) < 0 ? Rational(-a) : a; }

/// Thrown when a coordinate string is not a number we can represent exactly.
class NumberFormatError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

}  // namespace detail

/// Parses "12", "-3.25", "1e-3", "2.5E2" or "7/3" into an exact rational.
/// Decimal mantissas are scaled by powers of ten; nothing is rounded.
inline Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    if (s.empty()) throw NumberFormatError("empty number");

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        std::string_view num = s.substr(0, slash);
        std::string_view den = s.substr(slash + 1);
        std::string_view num_digits = (!num.empty() && (num[0] == '-' || num[0] == '+')) ? num.substr(1) : num;
        if (!detail::all_digits(num_digits) || !detail::all_digits(den))
            throw NumberFormatError("malformed fraction '" + std::string(text) + "'");
        mpz_class n(std::string(num_digits), 10);
        mpz_class d(std::string(den), 10);
        if (d == 0) throw NumberFormatError("zero denominator in '" + std::string(text) + "'");
        if (!num.empty() && num[0] == '-') n = -n;
        Rational r(n, d);
        r.canonicalize();
        return r;
    }

    bool negative = false;
    if (s.front() == '-' || s.front() == '+') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }

    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_text = s.substr(e + 1);
        bool exp_negative = false;
        if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
            exp_negative = exp_text.front() == '-';
            exp_text.remove_prefix(1);
        }
        if (!detail::all_digits(exp_text) || exp_text.size() > 6)
            throw NumberFormatError("malformed exponent in '" + std::string(text) + "'");
        exponent = std::stol(std::string(exp_text));
        if (exp_negative) exponent = -exponent;
        s = s.substr(0, e);
    }

    std::string digits;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view int_part = s.substr(0, dot);
        std::string_view frac_part = s.substr(dot + 1);
        if ((!int_part.empty() && !detail::all_digits(int_part)) ||
            (!frac_part.empty() && !detail::all_digits(frac_part)) || (int_part.empty() && frac_part.empty()))
            throw NumberFormatError("malformed decimal '" + std::string(text) + "'");
        digits = std::string(int_part) + std::string(frac_part);
        exponent -= static_cast<long>(frac_part.size());
    } else {
        if (!detail::all_digits(s)) throw NumberFormatError("malformed number '" + std::string(text) + "'");
        digits = std::string(s);
    }

    mpz_class mantissa(digits, 10);
    if (negative) mantissa = -mantissa;
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    Rational r = exponent < 0 ? Rational(mantissa, scale) : Rational(mantissa * scale);
    r.canonicalize();
    return r;
}

/// Converts a finite double to the rational denoted by its shortest round-trip decimal.
/// 0.1 becomes 1/10, not the binary expansion.
inline Rational rational_from_double(double value) {
    if (!std::isfinite(value)) throw NumberFormatError("non-finite number");
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw NumberFormatError("cannot format number");
    return parse_rational(std::string_view(buf, static_cast<std::size_t>(end - buf)));
}

/// Canonical exact text: "3", "-7/2".
inline std::string to_exact_string(const Rational& r) { return r.get_str(10); }

/// Finite decimal when the denominator is 2^a 5^b, otherwise "p/q".
inline std::string to_display_string(const Rational& r) {
    mpz_class den = r.get_den();
    if (den == 1) return r.get_num().get_str(10);
    unsigned long twos = 0, fives = 0;
    while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) { den /= 2; ++twos; }
    while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) { den /= 5; ++fives; }
    if (den != 1) return r.get_str(10);
    unsigned long places = twos > fives ? twos : fives;
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
    mpz_class scaled = r.get_num() * scale / r.get_den();
    bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    std::string digits = scaled.get_str(10);
    if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
    digits.insert(digits.size() - places, ".");
    return (negative ? "-" : "") + digits;
}

inline double to_double(const Rational& r) { return r.get_d(); }

}  // namespace kfr
