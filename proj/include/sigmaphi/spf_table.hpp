#pragma once

#include "sigmaphi/factored.hpp"

#include <cstdint>
#include <vector>

namespace sigmaphi {

// Smallest-prime-factor table for 0..limit. spf[0] == spf[1] == 0; for n >= 2,
// spf[n] is the least prime dividing n (== n exactly when n is prime).
struct SpfTable {
    uint64_t limit = 0;
    std::vector<uint32_t> spf;

    uint32_t spf_of(uint64_t n) const;

    // Primes <= limit, read off the table.
    std::vector<uint32_t> primes() const;
};

// Default cap: 2^30 entries (4 GiB of uint32_t). Table limits above
// 2^32 - 1 are rejected outright since entries are 32-bit.
inline constexpr uint64_t kDefaultSpfEntryCap = 1ull << 30;

SpfTable build_spf_table(uint64_t limit, uint64_t entry_cap = kDefaultSpfEntryCap);

// Full factorization by repeated table lookup. Requires 1 <= n <= table.limit.
FactoredInteger factorize(uint64_t n, const SpfTable& table);

} // namespace sigmaphi
