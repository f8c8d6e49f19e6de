#include "sigmaphi/spf_table.hpp"

#include "sigmaphi/errors.hpp"

#include <stdexcept>
#include <string>

namespace sigmaphi {

uint32_t SpfTable::spf_of(uint64_t n) const {
    if (n > limit)
        throw std::out_of_range("spf_of: " + std::to_string(n) + " exceeds table limit " +
                                std::to_string(limit));
    return spf[n];
}

std::vector<uint32_t> SpfTable::primes() const {
    std::vector<uint32_t> out;
    for (uint64_t n = 2; n <= limit; ++n)
        if (spf[n] == n) out.push_back(static_cast<uint32_t>(n));
    return out;
}

SpfTable build_spf_table(uint64_t limit, uint64_t entry_cap) {
    if (limit < 2)
        throw std::domain_error("build_spf_table: limit must be >= 2, got " + std::to_string(limit));
    if (limit > 0xFFFFFFFFull)
        throw capacity_error("build_spf_table: limit " + std::to_string(limit) +
                             " does not fit 32-bit entries");
    if (limit + 1 > entry_cap)
        throw capacity_error("build_spf_table: limit " + std::to_string(limit) +
                             " exceeds entry cap " + std::to_string(entry_cap));

    SpfTable t;
    t.limit = limit;
    t.spf.assign(limit + 1, 0);
    for (uint64_t i = 2; i <= limit; ++i) {
        if (t.spf[i] != 0) continue;
        t.spf[i] = static_cast<uint32_t>(i);
        // i is prime; mark i as smallest factor of i^2, i^2+i, ... that are
        // still unmarked (anything below i^2 already has a smaller factor).
        for (uint64_t j = i * i; j <= limit; j += i)
            if (t.spf[j] == 0) t.spf[j] = static_cast<uint32_t>(i);
    }
    return t;
}

FactoredInteger factorize(uint64_t n, const SpfTable& table) {
    if (n == 0) throw std::domain_error("factorize: n must be >= 1");
    if (n > table.limit)
        throw std::out_of_range("factorize: " + std::to_string(n) + " exceeds table limit " +
                                std::to_string(table.limit));
    FactoredInteger f;
    f.value = n;
    while (n > 1) {
        uint64_t p = table.spf[n];
        uint32_t k = 0;
        while (n % p == 0) {
            n /= p;
            ++k;
        }
        f.factors.push_back({p, k});
    }
    return f;
}

} // namespace sigmaphi
