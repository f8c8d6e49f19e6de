#include "sigmaphi/factored.hpp"

#include <stdexcept>
#include <string>

namespace sigmaphi {

uint64_t checked_mul(uint64_t a, uint64_t b) {
    uint64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("checked_mul: " + std::to_string(a) + " * " + std::to_string(b) +
                                  " exceeds 64 bits");
    return r;
}

uint64_t checked_add(uint64_t a, uint64_t b) {
    uint64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("checked_add: " + std::to_string(a) + " + " + std::to_string(b) +
                                  " exceeds 64 bits");
    return r;
}

uint64_t sigma_prime_power(uint64_t p, uint32_t k) {
    if (p < 2) throw std::domain_error("sigma_prime_power: prime must be >= 2");
    if (k == 0) return 1;
    // Horner: s_i = s_{i-1} * p + 1 walks 1, p+1, p^2+p+1, ...
    uint64_t s = 1;
    for (uint32_t i = 0; i < k; ++i) s = checked_add(checked_mul(s, p), 1);
    return s;
}

uint64_t phi_from_factors(std::span<const PrimePower> factors) {
    // phi(n) <= n, so partial products never overflow when the input is a
    // valid factorization of a uint64_t.
    uint64_t r = 1;
    for (const auto& pp : factors) {
        uint64_t t = pp.prime - 1;
        for (uint32_t i = 1; i < pp.exponent; ++i) t *= pp.prime;
        r *= t;
    }
    return r;
}

uint64_t sigma_from_factors(std::span<const PrimePower> factors) {
    uint64_t r = 1;
    for (const auto& pp : factors)
        r = checked_mul(r, sigma_prime_power(pp.prime, pp.exponent));
    return r;
}

uint64_t phi(const FactoredInteger& f) { return phi_from_factors(f.factors); }

uint64_t sigma(const FactoredInteger& f) { return sigma_from_factors(f.factors); }

void validate(const FactoredInteger& f) {
    uint64_t prod = 1;
    uint64_t last_prime = 0;
    for (const auto& pp : f.factors) {
        if (pp.prime < 2)
            throw std::invalid_argument("FactoredInteger: prime < 2");
        if (pp.prime <= last_prime)
            throw std::invalid_argument("FactoredInteger: factors not strictly ascending");
        if (pp.exponent == 0)
            throw std::invalid_argument("FactoredInteger: zero exponent");
        last_prime = pp.prime;
        for (uint32_t i = 0; i < pp.exponent; ++i) prod = checked_mul(prod, pp.prime);
    }
    if (prod != f.value)
        throw std::invalid_argument("FactoredInteger: factor product " + std::to_string(prod) +
                                    " != value " + std::to_string(f.value));
}

} // namespace sigmaphi
