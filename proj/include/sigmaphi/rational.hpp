#pragma once

#include <cstdint>
#include <string>

namespace sigmaphi {

// Nonnegative rational in lowest terms. Thresholds (c, delta) are kept exact
// so that comparisons like sigma(n) >= delta * n never depend on binary
// rounding: 1.8 as a double is strictly greater than 9/5, which is enough to
// misclassify boundary cases such as sigma(10) = 18.
struct Rational {
    uint64_t num = 0;
    uint64_t den = 1;

    friend bool operator==(const Rational&, const Rational&) = default;
};

Rational make_rational(uint64_t num, uint64_t den);

// Accepts "a/b", integers ("2"), decimals ("1.8"), and scientific notation
// ("1e-2", "2.5e3"), all parsed exactly. Throws config_error on malformed
// input or when the value cannot be represented.
Rational parse_rational(const std::string& text);

// Best rational approximation to x with denominator <= max_den, by continued
// fraction convergents plus the final semiconvergent. Exact doubles with a
// small representable denominator come back unchanged (1.5 -> 3/2).
Rational approx_rational(double x, uint64_t max_den);

// Largest rational with denominator <= max_den that is <= x. Used for the
// auto delta = c * ln(y) so the side condition delta <= c * ln(y) stays true.
Rational floor_rational(double x, uint64_t max_den);

std::string to_string(const Rational& r);

double to_double(const Rational& r);

} // namespace sigmaphi
