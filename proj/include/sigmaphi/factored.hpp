#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sigmaphi {

struct PrimePower {
    uint64_t prime = 0;
    uint32_t exponent = 0;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// An integer together with its full factorization. factors are sorted by
// prime, exponents >= 1, and the product of prime^exponent equals value.
// value == 1 has an empty factor list.
struct FactoredInteger {
    uint64_t value = 1;
    std::vector<PrimePower> factors;

    friend bool operator==(const FactoredInteger&, const FactoredInteger&) = default;
};

// Throws std::overflow_error instead of wrapping.
uint64_t checked_mul(uint64_t a, uint64_t b);
uint64_t checked_add(uint64_t a, uint64_t b);

// sigma(p^k) = 1 + p + ... + p^k, checked.
uint64_t sigma_prime_power(uint64_t p, uint32_t k);

uint64_t phi_from_factors(std::span<const PrimePower> factors);
uint64_t sigma_from_factors(std::span<const PrimePower> factors);

// Euler phi / divisor sum of a factored integer.
uint64_t phi(const FactoredInteger& f);
uint64_t sigma(const FactoredInteger& f);

// Checks the representation invariants (sorted, exponents >= 1, product
// matches value). Throws std::invalid_argument on violation.
void validate(const FactoredInteger& f);

} // namespace sigmaphi
