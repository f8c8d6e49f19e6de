#pragma once

#include "sigmaphi/factored.hpp"

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace sigmaphi {

// Memoizes the factorization of sigma(p^k). sigma is multiplicative, so the
// factorization of sigma(n) is the merge of these per-prime-power pieces.
//
// The caller keeps trial_primes alive for the cache's lifetime. With largest
// trial prime B, any cofactor left after trial division is certified prime
// when it is < (B+1)^2; a larger survivor means the prime table was too small
// for the inputs and raises std::logic_error rather than guessing.
// Covering sigma(p^k) <= 2*p^k <= 2x for a scan up to x needs B >= sqrt(2x).
class PrimePowerSigmaCache {
public:
    explicit PrimePowerSigmaCache(std::span<const uint32_t> trial_primes);

    const FactoredInteger& sigma_of(uint64_t p, uint32_t k);

    std::size_t size() const { return map_.size(); }
    uint64_t certified_below() const { return certified_below_; }

private:
    std::span<const uint32_t> primes_;
    uint64_t certified_below_;
    std::unordered_map<uint64_t, FactoredInteger> map_;
};

// sigma(n) in factored form, assembled from the cache. Deterministic for a
// given input regardless of cache state.
FactoredInteger sigma_factored(const FactoredInteger& f, PrimePowerSigmaCache& cache);

// phi(sigma(n)).
uint64_t phi_sigma(const FactoredInteger& f, PrimePowerSigmaCache& cache);

// Does p divide sigma(n)? Decided entirely mod p: p | sigma(n) iff p divides
// sigma(q^k) for some prime power q^k || n, and each sigma(q^k) mod p is a
// geometric series evaluated by Horner steps. sigma(n) itself is never
// factored or even materialized. Throws std::domain_error unless p is prime.
bool divides_sigma(uint64_t p, const FactoredInteger& f);

// sigma(q^k) mod m. Horner on 1 + q + ... + q^k; when q == 1 (mod m) the
// steps degenerate to counting and give k+1 mod m, as they should.
uint64_t sigma_prime_power_mod(uint64_t q, uint32_t k, uint64_t m);

// Unchecked-precondition variants used by the scan kernel (p already
// validated prime, scratch reused across calls).
bool sigma_divisible_by(std::span<const PrimePower> n_factors, uint64_t p);
void sigma_factored_into(std::span<const PrimePower> n_factors, PrimePowerSigmaCache& cache,
                         FactoredInteger& out, std::vector<PrimePower>& scratch);

} // namespace sigmaphi
