#include "sigmaphi/rational.hpp"

#include "sigmaphi/errors.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sigmaphi {

namespace {

uint64_t pow10_u64(unsigned e) {
    if (e > 19) throw config_error("rational: power of ten out of range");
    uint64_t r = 1;
    for (unsigned i = 0; i < e; ++i) {
        if (r > UINT64_MAX / 10) throw config_error("rational: power of ten out of range");
        r *= 10;
    }
    return r;
}

uint64_t mul_checked(uint64_t a, uint64_t b) {
    uint64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw config_error("rational: value does not fit 64 bits");
    return r;
}

} // namespace

Rational make_rational(uint64_t num, uint64_t den) {
    if (den == 0) throw config_error("rational: zero denominator");
    uint64_t g = std::gcd(num, den);
    if (g == 0) g = 1;
    return Rational{num / g, den / g};
}

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw config_error("rational: empty value");

    auto slash = text.find('/');
    if (slash != std::string::npos) {
        const std::string a = text.substr(0, slash);
        const std::string b = text.substr(slash + 1);
        if (a.empty() || b.empty() || a.find_first_not_of("0123456789") != std::string::npos ||
            b.find_first_not_of("0123456789") != std::string::npos)
            throw config_error("rational: malformed fraction '" + text + "'");
        uint64_t num, den;
        try {
            num = std::stoull(a);
            den = std::stoull(b);
        } catch (const std::exception&) {
            throw config_error("rational: fraction out of range '" + text + "'");
        }
        return make_rational(num, den);
    }

    // decimal with optional exponent: [digits][.digits][(e|E)[+|-]digits]
    size_t i = 0;
    if (i < text.size() && text[i] == '+') ++i;
    if (i < text.size() && text[i] == '-')
        throw config_error("rational: value must be nonnegative '" + text + "'");

    uint64_t mantissa = 0;
    unsigned digits = 0, frac_digits = 0;
    bool seen_digit = false, seen_dot = false;
    for (; i < text.size(); ++i) {
        char ch = text[i];
        if (ch >= '0' && ch <= '9') {
            seen_digit = true;
            if (digits >= 19) throw config_error("rational: too many digits in '" + text + "'");
            mantissa = mantissa * 10 + static_cast<unsigned>(ch - '0');
            if (mantissa != 0 || digits > 0) ++digits;
            if (seen_dot) ++frac_digits;
        } else if (ch == '.') {
            if (seen_dot) throw config_error("rational: malformed number '" + text + "'");
            seen_dot = true;
        } else if (ch == 'e' || ch == 'E') {
            break;
        } else {
            throw config_error("rational: malformed number '" + text + "'");
        }
    }
    if (!seen_digit) throw config_error("rational: malformed number '" + text + "'");

    long exponent = 0;
    if (i < text.size()) { // at 'e' or 'E'
        try {
            size_t used = 0;
            exponent = std::stol(text.substr(i + 1), &used);
            if (used != text.size() - i - 1) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw config_error("rational: malformed exponent '" + text + "'");
        }
    }

    long shift = exponent - static_cast<long>(frac_digits);
    if (shift >= 0)
        return make_rational(mul_checked(mantissa, pow10_u64(static_cast<unsigned>(shift))), 1);
    return make_rational(mantissa, pow10_u64(static_cast<unsigned>(-shift)));
}

Rational approx_rational(double x, uint64_t max_den) {
    if (max_den == 0) throw config_error("approx_rational: max_den must be >= 1");
    if (!std::isfinite(x) || x < 0)
        throw config_error("approx_rational: value must be finite and nonnegative");

    // Continued fraction convergents p/q; on denominator overflow, try the
    // last admissible semiconvergent and keep whichever lands closer.
    uint64_t p2 = 0, p1 = 1; // p_{k-2}, p_{k-1}
    uint64_t q2 = 1, q1 = 0;
    long double rem = x;
    for (int iter = 0; iter < 64; ++iter) {
        long double fl = std::floor(rem);
        if (fl > static_cast<long double>(UINT64_MAX) / 2)
            throw config_error("approx_rational: value too large");
        uint64_t a = static_cast<uint64_t>(fl);
        if (q1 > 0 && a > (max_den - q2) / q1) {
            // Next convergent would overshoot max_den; clip the partial
            // quotient to the largest admissible semiconvergent and keep
            // whichever of it and the previous convergent lands closer.
            uint64_t t = (max_den - q2) / q1;
            uint64_t sp = t * p1 + p2, sq = t * q1 + q2;
            long double err1 = std::fabs(static_cast<long double>(x) -
                                         static_cast<long double>(p1) / q1);
            long double errs = std::fabs(static_cast<long double>(x) -
                                         static_cast<long double>(sp) / sq);
            if (t > 0 && errs < err1) return make_rational(sp, sq);
            return make_rational(p1, q1);
        }
        uint64_t p = a * p1 + p2;
        uint64_t q = a * q1 + q2;
        long double frac = rem - fl;
        if (frac <= 0 || static_cast<long double>(p) / q == static_cast<long double>(x))
            return make_rational(p, q);
        p2 = p1; p1 = p;
        q2 = q1; q1 = q;
        rem = 1.0L / frac;
    }
    return make_rational(p1, q1 == 0 ? 1 : q1);
}

Rational floor_rational(double x, uint64_t max_den) {
    if (max_den == 0) throw config_error("floor_rational: max_den must be >= 1");
    if (!std::isfinite(x) || x < 0)
        throw config_error("floor_rational: value must be finite and nonnegative");
    long double scaled = static_cast<long double>(x) * max_den;
    if (scaled > static_cast<long double>(UINT64_MAX) / 2)
        throw config_error("floor_rational: value too large");
    uint64_t num = static_cast<uint64_t>(std::floor(scaled));
    while (num > 0 && static_cast<long double>(num) / max_den > static_cast<long double>(x)) --num;
    return make_rational(num, max_den);
}

std::string to_string(const Rational& r) {
    if (r.den == 1) return std::to_string(r.num);
    return std::to_string(r.num) + "/" + std::to_string(r.den);
}

double to_double(const Rational& r) {
    return static_cast<double>(static_cast<long double>(r.num) / r.den);
}

} // namespace sigmaphi
