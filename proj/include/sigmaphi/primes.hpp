#pragma once

#include <cstdint>
#include <vector>

namespace sigmaphi {

// Floor of sqrt(n), exact for the full uint64_t range.
uint64_t isqrt_u64(uint64_t n);

// All primes <= limit, ascending. limit == 0 or 1 gives an empty list.
std::vector<uint32_t> sieve_primes(uint32_t limit);

// Complete ascending prime list whose largest entry B satisfies
// (B + 1)^2 > top, so trial division by the list certifies any surviving
// cofactor <= top as prime. This is the strongest guarantee recoverable
// from a bare list: the sieve limit itself is not part of the type.
std::vector<uint32_t> sieve_primes_certified(uint64_t top);

// flags[n] == true iff n is prime, for 0 <= n <= limit.
std::vector<bool> prime_flags(uint64_t limit);

// Deterministic trial-division primality test. Meant for validating small
// configuration values, not for bulk work.
bool is_prime_u64(uint64_t n);

} // namespace sigmaphi
