#include "sigmaphi/segment.hpp"

#include "sigmaphi/errors.hpp"

#include <string>

namespace sigmaphi {

namespace {
// sieve_range materializes every factorization, so keep ranges bounded.
constexpr uint64_t kMaxMaterializedLen = 1ull << 28;
constexpr uint64_t kMaxRangeEnd = 100'000'000'001ull; // matches the scan cap, see counting.hpp
} // namespace

SieveSegment sieve_range(uint64_t lo, uint64_t hi) {
    if (lo < 1 || lo >= hi)
        throw std::domain_error("sieve_range: need 1 <= lo < hi");
    if (hi > kMaxRangeEnd)
        throw capacity_error("sieve_range: hi " + std::to_string(hi) + " exceeds cap " +
                             std::to_string(kMaxRangeEnd));
    if (hi - lo > kMaxMaterializedLen)
        throw capacity_error("sieve_range: range length " + std::to_string(hi - lo) +
                             " exceeds cap " + std::to_string(kMaxMaterializedLen));

    auto primes = sieve_primes_certified(hi - 1);

    SieveSegment seg(lo, hi);
    seg.offsets_.reserve(hi - lo + 1);
    seg.offsets_.push_back(0);
    for_each_factored(lo, hi, primes, [&](uint64_t, std::span<const PrimePower> f) {
        seg.factors_.insert(seg.factors_.end(), f.begin(), f.end());
        seg.offsets_.push_back(seg.factors_.size());
    });
    return seg;
}

} // namespace sigmaphi
