#pragma once

#include "sigmaphi/factored.hpp"
#include "sigmaphi/primes.hpp"

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace sigmaphi {

// Materialized factorizations for every n in [lo, hi).
class SieveSegment {
public:
    SieveSegment(uint64_t lo, uint64_t hi) : lo_(lo), hi_(hi) {}

    uint64_t lo() const { return lo_; }
    uint64_t hi() const { return hi_; }
    uint64_t size() const { return hi_ - lo_; }

    std::span<const PrimePower> factors_of(uint64_t n) const {
        if (n < lo_ || n >= hi_)
            throw std::out_of_range("SieveSegment: n outside [lo, hi)");
        uint64_t i = n - lo_;
        return {factors_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
    }

    FactoredInteger factored(uint64_t n) const {
        auto s = factors_of(n);
        return {n, std::vector<PrimePower>(s.begin(), s.end())};
    }

    friend SieveSegment sieve_range(uint64_t lo, uint64_t hi);

private:
    uint64_t lo_, hi_;
    std::vector<uint64_t> offsets_; // size() + 1 entries into factors_
    std::vector<PrimePower> factors_;
};

SieveSegment sieve_range(uint64_t lo, uint64_t hi);

namespace detail {

// Any uint64_t has at most 15 distinct prime factors (the product of the
// first 16 primes already exceeds 2^64).
inline constexpr int kMaxDistinctFactors = 15;

struct SievedFactor {
    uint32_t prime;
    uint32_t exponent;
};

} // namespace detail

// Streams (n, factors) for every n in [lo, hi) in ascending order, without
// materializing the range. base_primes must be ascending and cover
// sqrt(hi - 1). The span handed to fn is valid only during the call.
//
// Works block-by-block: each n starts as "remaining = n"; every base prime
// with a multiple in the block divides out its full power; whatever is left
// exceeds sqrt(hi - 1), so a leftover > 1 is prime (a composite leftover
// would be a product of two factors > sqrt(n)).
template <typename Fn>
void for_each_factored(uint64_t lo, uint64_t hi, std::span<const uint32_t> base_primes, Fn&& fn) {
    if (lo < 1 || lo >= hi)
        throw std::domain_error("for_each_factored: need 1 <= lo < hi");
    // Coverage: with the list complete up to its largest entry B, every
    // composite <= (B+1)^2 - 1 has a sieved prime factor.
    uint64_t back = base_primes.empty() ? 1 : base_primes.back();
    if (static_cast<unsigned __int128>(back + 1) * (back + 1) <= hi - 1)
        throw std::logic_error("for_each_factored: base primes do not cover sqrt of range");

    constexpr uint64_t kBlock = 1ull << 16;
    std::vector<uint64_t> remaining(kBlock);
    std::vector<uint8_t> counts(kBlock);
    std::vector<detail::SievedFactor> slots(kBlock * detail::kMaxDistinctFactors);
    std::vector<PrimePower> scratch;
    scratch.reserve(detail::kMaxDistinctFactors + 1);

    for (uint64_t blo = lo; blo < hi; blo += kBlock) {
        uint64_t bhi = std::min(hi, blo + kBlock);
        size_t len = static_cast<size_t>(bhi - blo);
        for (size_t i = 0; i < len; ++i) remaining[i] = blo + i;
        std::fill(counts.begin(), counts.begin() + len, uint8_t{0});

        for (uint32_t p : base_primes) {
            uint64_t p64 = p;
            if (p64 * p64 >= bhi) break;
            uint64_t start = ((blo + p64 - 1) / p64) * p64;
            for (uint64_t m = start; m < bhi; m += p64) {
                size_t idx = static_cast<size_t>(m - blo);
                uint64_t r = remaining[idx];
                uint32_t k = 0;
                do {
                    r /= p64;
                    ++k;
                } while (r % p64 == 0);
                remaining[idx] = r;
                slots[idx * detail::kMaxDistinctFactors + counts[idx]] = {p, k};
                ++counts[idx];
            }
        }

        for (size_t i = 0; i < len; ++i) {
            scratch.clear();
            const auto* s = slots.data() + i * detail::kMaxDistinctFactors;
            for (uint8_t j = 0; j < counts[i]; ++j)
                scratch.push_back({s[j].prime, s[j].exponent});
            if (remaining[i] > 1) scratch.push_back({remaining[i], 1});
            fn(blo + i, std::span<const PrimePower>(scratch));
        }
    }
}

} // namespace sigmaphi
