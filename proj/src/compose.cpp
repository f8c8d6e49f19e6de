#include "sigmaphi/compose.hpp"

#include "sigmaphi/primes.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace sigmaphi {

namespace {

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

// Cache key: k < 64 always (2^64 overflows past that), so pack (p, k) into
// one word. p < 2^58 holds for anything this tool can factor.
inline uint64_t cache_key(uint64_t p, uint32_t k) { return (p << 6) | k; }

} // namespace

uint64_t sigma_prime_power_mod(uint64_t q, uint32_t k, uint64_t m) {
    if (m == 0) throw std::domain_error("sigma_prime_power_mod: zero modulus");
    uint64_t qm = q % m;
    uint64_t s = 1 % m;
    for (uint32_t i = 0; i < k; ++i) s = (mulmod_u64(s, qm, m) + 1) % m;
    return s;
}

PrimePowerSigmaCache::PrimePowerSigmaCache(std::span<const uint32_t> trial_primes)
    : primes_(trial_primes) {
    if (primes_.empty() || primes_.front() != 2)
        throw std::invalid_argument("PrimePowerSigmaCache: trial primes must start at 2");
    uint64_t b1 = static_cast<uint64_t>(primes_.back()) + 1;
    certified_below_ = (b1 >= (1ull << 32)) ? UINT64_MAX : b1 * b1;
}

const FactoredInteger& PrimePowerSigmaCache::sigma_of(uint64_t p, uint32_t k) {
    if (k == 0 || k >= 64)
        throw std::domain_error("sigma_of: exponent out of range");
    uint64_t key = cache_key(p, k);
    auto it = map_.find(key);
    if (it != map_.end()) return it->second;

    FactoredInteger f;
    f.value = sigma_prime_power(p, k);
    uint64_t v = f.value;
    for (uint32_t q : primes_) {
        uint64_t q64 = q;
        if (q64 * q64 > v) break;
        if (v % q64 != 0) continue;
        uint32_t e = 0;
        do {
            v /= q64;
            ++e;
        } while (v % q64 == 0);
        f.factors.push_back({q64, e});
    }
    if (v > 1) {
        if (v >= certified_below_)
            throw std::logic_error("sigma cache: cofactor " + std::to_string(v) + " of sigma(" +
                                   std::to_string(p) + "^" + std::to_string(k) +
                                   ") exceeds the certification bound " +
                                   std::to_string(certified_below_) +
                                   "; trial prime table too small");
        f.factors.push_back({v, 1});
    }
    return map_.emplace(key, std::move(f)).first->second;
}

void sigma_factored_into(std::span<const PrimePower> n_factors, PrimePowerSigmaCache& cache,
                         FactoredInteger& out, std::vector<PrimePower>& scratch) {
    scratch.clear();
    uint64_t value = 1;
    for (const auto& pp : n_factors) {
        const FactoredInteger& piece = cache.sigma_of(pp.prime, pp.exponent);
        value = checked_mul(value, piece.value);
        scratch.insert(scratch.end(), piece.factors.begin(), piece.factors.end());
    }
    std::sort(scratch.begin(), scratch.end(),
              [](const PrimePower& a, const PrimePower& b) { return a.prime < b.prime; });

    out.value = value;
    out.factors.clear();
    for (const auto& pp : scratch) {
        if (!out.factors.empty() && out.factors.back().prime == pp.prime)
            out.factors.back().exponent += pp.exponent;
        else
            out.factors.push_back(pp);
    }
}

FactoredInteger sigma_factored(const FactoredInteger& f, PrimePowerSigmaCache& cache) {
    FactoredInteger out;
    std::vector<PrimePower> scratch;
    sigma_factored_into(f.factors, cache, out, scratch);
    return out;
}

uint64_t phi_sigma(const FactoredInteger& f, PrimePowerSigmaCache& cache) {
    FactoredInteger s = sigma_factored(f, cache);
    return phi_from_factors(s.factors);
}

bool sigma_divisible_by(std::span<const PrimePower> n_factors, uint64_t p) {
    for (const auto& pp : n_factors)
        if (sigma_prime_power_mod(pp.prime, pp.exponent, p) == 0) return true;
    return false;
}

bool divides_sigma(uint64_t p, const FactoredInteger& f) {
    if (!is_prime_u64(p))
        throw std::domain_error("divides_sigma: " + std::to_string(p) + " is not prime");
    return sigma_divisible_by(f.factors, p);
}

} // namespace sigmaphi
