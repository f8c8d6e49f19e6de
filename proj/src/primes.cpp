#include "sigmaphi/primes.hpp"

#include "sigmaphi/errors.hpp"

#include <cmath>

namespace sigmaphi {

uint64_t isqrt_u64(uint64_t n) {
    if (n == 0) return 0;
    // Start from the double estimate and correct; sqrt(double) alone is off
    // by one near 2^52 and above.
    uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

std::vector<uint32_t> sieve_primes(uint32_t limit) {
    std::vector<uint32_t> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(static_cast<size_t>(limit) + 1, false);
    for (uint64_t i = 2; i * i <= limit; ++i) {
        if (composite[i]) continue;
        for (uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    primes.reserve(static_cast<size_t>(limit / (limit > 100 ? std::log(static_cast<double>(limit)) - 1.0 : 1.0)) + 16);
    for (uint32_t n = 2; n <= limit; ++n)
        if (!composite[n]) primes.push_back(n);
    return primes;
}

std::vector<uint32_t> sieve_primes_certified(uint64_t top) {
    uint64_t root = isqrt_u64(top);
    if (root > 0xFFFFFFFFull)
        throw capacity_error("sieve_primes_certified: top " + std::to_string(top) +
                             " needs base primes beyond 32 bits");
    auto primes = sieve_primes(static_cast<uint32_t>(std::max<uint64_t>(2, root)));
    // The largest prime can fall short of the sieve limit; extend one prime
    // at a time until (B + 1)^2 clears top.
    uint64_t back = primes.empty() ? 1 : primes.back();
    while (static_cast<unsigned __int128>(back + 1) * (back + 1) <= top) {
        do { ++back; } while (!is_prime_u64(back));
        if (back > 0xFFFFFFFFull)
            throw capacity_error("sieve_primes_certified: certification prime beyond 32 bits");
        primes.push_back(static_cast<uint32_t>(back));
    }
    return primes;
}

std::vector<bool> prime_flags(uint64_t limit) {
    constexpr uint64_t kFlagCap = 1'000'000'000ull;
    if (limit > kFlagCap)
        throw capacity_error("prime_flags: limit " + std::to_string(limit) +
                             " exceeds cap " + std::to_string(kFlagCap));
    std::vector<bool> flags(limit + 1, true);
    flags[0] = false;
    if (limit >= 1) flags[1] = false;
    for (uint64_t i = 2; i * i <= limit; ++i) {
        if (!flags[i]) continue;
        for (uint64_t j = i * i; j <= limit; j += i) flags[j] = false;
    }
    return flags;
}

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    if (n % 3 == 0) return n == 3;
    for (uint64_t d = 5; d * d <= n; d += 6) {
        if (n % d == 0 || n % (d + 2) == 0) return false;
    }
    return true;
}

} // namespace sigmaphi
