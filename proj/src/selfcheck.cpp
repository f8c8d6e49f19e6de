#include "sigmaphi/selfcheck.hpp"

#include "sigmaphi/compose.hpp"
#include "sigmaphi/counting.hpp"
#include "sigmaphi/errors.hpp"
#include "sigmaphi/factored.hpp"
#include "sigmaphi/primes.hpp"
#include "sigmaphi/spf_table.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace sigmaphi {

namespace {

constexpr uint64_t kSelfcheckCap = 1'000'000;

void require_limit(uint64_t limit) {
    if (limit < 1) throw std::domain_error("selfcheck: limit must be >= 1");
    if (limit > kSelfcheckCap)
        throw capacity_error("selfcheck: limit " + std::to_string(limit) + " exceeds cap " +
                             std::to_string(kSelfcheckCap));
}

uint64_t splitmix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// sigma over a whole range by divisor marking: every d contributes itself to
// each multiple. No factorizations involved.
std::vector<uint64_t> sigma_by_divisor_marking(uint64_t limit) {
    std::vector<uint64_t> s(limit + 1, 0);
    for (uint64_t d = 1; d <= limit; ++d)
        for (uint64_t m = d; m <= limit; m += d) s[m] += d;
    return s;
}

// sigma(n) by explicit divisor-pair enumeration, one value at a time.
uint64_t sigma_by_enumeration(uint64_t n) {
    uint64_t s = 0;
    for (uint64_t i = 1; i * i <= n; ++i) {
        if (n % i != 0) continue;
        s += i;
        uint64_t j = n / i;
        if (j != i) s += j;
    }
    return s;
}

// phi(n) by gcd counting, folded: coprime residues pair up as (m, n - m), so
// counting m <= n/2 and doubling is enough once n >= 3. For even n the
// coprime m are all odd, halving the work again.
uint64_t phi_by_gcd_count(uint64_t n) {
    if (n <= 2) return n >= 1 ? 1 : 0;
    uint64_t half = n / 2;
    uint64_t count = 0;
    if (n % 2 == 0) {
        for (uint64_t m = 1; m <= half; m += 2)
            if (std::gcd(m, n) == 1) ++count;
    } else {
        for (uint64_t m = 1; m <= half; ++m)
            if (std::gcd(m, n) == 1) ++count;
    }
    return 2 * count;
}

FactoredInteger factor_by_trial_division(uint64_t n) {
    FactoredInteger f;
    f.value = n;
    uint64_t v = n;
    for (uint64_t d = 2; d * d <= v; ++d) {
        if (v % d != 0) continue;
        uint32_t k = 0;
        while (v % d == 0) {
            v /= d;
            ++k;
        }
        f.factors.push_back({d, k});
    }
    if (v > 1) f.factors.push_back({v, 1});
    return f;
}

} // namespace

std::optional<std::string> check_sigma_oracle(uint64_t limit) {
    require_limit(limit);
    auto oracle = sigma_by_divisor_marking(limit);
    auto table = build_spf_table(std::max<uint64_t>(2, limit));
    for (uint64_t n = 1; n <= limit; ++n) {
        uint64_t impl = sigma(factorize(n, table));
        if (impl != oracle[n])
            return "sigma(" + std::to_string(n) + ") = " + std::to_string(impl) +
                   " but divisor marking gives " + std::to_string(oracle[n]);
    }
    // Second, structurally different oracle on a deterministic sample.
    uint64_t samples = std::min<uint64_t>(limit, 256);
    for (uint64_t i = 0; i < samples; ++i) {
        uint64_t n = 1 + splitmix64(0xabcd0001 + i) % limit;
        uint64_t enumerated = sigma_by_enumeration(n);
        if (oracle[n] != enumerated)
            return "divisor oracles disagree at n = " + std::to_string(n);
        if (sigma(factorize(n, table)) != enumerated)
            return "sigma(" + std::to_string(n) + ") != divisor-pair enumeration " +
                   std::to_string(enumerated);
    }
    return std::nullopt;
}

std::optional<std::string> check_phi_oracle(uint64_t limit) {
    require_limit(limit);
    auto table = build_spf_table(std::max<uint64_t>(2, limit));
    uint64_t exhaustive = std::min<uint64_t>(limit, 10'000);
    for (uint64_t n = 1; n <= exhaustive; ++n) {
        uint64_t impl = phi(factorize(n, table));
        uint64_t oracle = phi_by_gcd_count(n);
        if (impl != oracle)
            return "phi(" + std::to_string(n) + ") = " + std::to_string(impl) +
                   " but gcd counting gives " + std::to_string(oracle);
    }
    for (uint64_t i = 0; exhaustive < limit && i < 256; ++i) {
        uint64_t n = exhaustive + 1 + splitmix64(0xabcd0002 + i) % (limit - exhaustive);
        uint64_t impl = phi(factorize(n, table));
        uint64_t oracle = phi_by_gcd_count(n);
        if (impl != oracle)
            return "phi(" + std::to_string(n) + ") = " + std::to_string(impl) +
                   " but gcd counting gives " + std::to_string(oracle);
    }
    return std::nullopt;
}

std::optional<std::string> check_phi_sigma_paths(uint64_t limit) {
    require_limit(limit);
    auto table = build_spf_table(std::max<uint64_t>(2, limit));
    auto primes = sieve_primes(static_cast<uint32_t>(std::max<uint64_t>(2, isqrt_u64(2 * limit))));
    PrimePowerSigmaCache cache(primes);
    for (uint64_t n = 1; n <= limit; ++n) {
        FactoredInteger f = factorize(n, table);
        uint64_t via_cache = phi_sigma(f, cache);
        FactoredInteger sf = factor_by_trial_division(sigma(f));
        uint64_t via_refactor = phi(sf);
        if (via_cache != via_refactor)
            return "phi(sigma(" + std::to_string(n) + ")): cache path " +
                   std::to_string(via_cache) + ", refactor path " + std::to_string(via_refactor);
    }
    return std::nullopt;
}

std::optional<std::string> check_multiplicativity(uint64_t limit, uint64_t pairs, uint64_t seed) {
    require_limit(limit);
    auto table = build_spf_table(std::max<uint64_t>(2, limit));
    auto check_pair = [&](uint64_t m, uint64_t n) -> std::optional<std::string> {
        FactoredInteger fm = factorize(m, table), fn = factorize(n, table);
        FactoredInteger fmn = factor_by_trial_division(m * n);
        if (phi(fmn) != phi(fm) * phi(fn))
            return "phi(" + std::to_string(m) + "*" + std::to_string(n) + ") != phi*phi";
        if (sigma(fmn) != sigma(fm) * sigma(fn))
            return "sigma(" + std::to_string(m) + "*" + std::to_string(n) + ") != sigma*sigma";
        return std::nullopt;
    };
    uint64_t exhaustive = std::min<uint64_t>(limit, 300);
    for (uint64_t m = 1; m <= exhaustive; ++m)
        for (uint64_t n = 1; n <= exhaustive; ++n) {
            if (std::gcd(m, n) != 1) continue;
            if (auto err = check_pair(m, n)) return err;
        }
    // Random pairs capped so the trial division of m*n stays cheap.
    uint64_t draw_cap = std::min<uint64_t>(limit, 100'000);
    for (uint64_t i = 0; i < pairs; ++i) {
        uint64_t m = 1 + splitmix64(seed + 2 * i) % draw_cap;
        uint64_t n = 1 + splitmix64(seed + 2 * i + 1) % draw_cap;
        if (std::gcd(m, n) != 1) continue;
        if (auto err = check_pair(m, n)) return err;
    }
    return std::nullopt;
}

std::optional<std::string> check_sandwich(uint64_t limit) {
    require_limit(limit);
    constexpr long double kSixOverPiSquared = 0.607927101854026628L;
    auto table = build_spf_table(std::max<uint64_t>(2, limit));
    for (uint64_t n = 2; n <= limit; ++n) {
        FactoredInteger f = factorize(n, table);
        long double v = static_cast<long double>(phi(f)) * sigma(f) /
                        (static_cast<long double>(n) * n);
        if (!(v > kSixOverPiSquared) || !(v <= 1.0L))
            return "phi*sigma/n^2 = " + std::to_string(static_cast<double>(v)) +
                   " outside (6/pi^2, 1] at n = " + std::to_string(n);
    }
    return std::nullopt;
}

std::optional<std::string> check_inclusion_random(uint64_t x, unsigned configs, uint64_t seed) {
    static const Rational kSlopes[] = {{1, 3}, {1, 2}, {1, 1}, {3, 2}, {2, 1}, {3, 1}};
    for (unsigned i = 0; i < configs; ++i) {
        ScanConfig cfg;
        cfg.x = x;
        cfg.y = 2.0 + static_cast<double>(splitmix64(seed + 3 * i) % 7); // 2..8
        cfg.c = kSlopes[splitmix64(seed + 3 * i + 1) % 6];
        // delta anywhere in (0, c ln y], kept on the valid side by flooring
        long double cap = static_cast<long double>(cfg.c.num) / cfg.c.den *
                          std::log(static_cast<long double>(cfg.y));
        long double u = 0.1L + 0.9L * static_cast<long double>(splitmix64(seed + 3 * i + 2) % 1000) / 1000.0L;
        cfg.delta = floor_rational(static_cast<double>(cap * u), 1'000'000);
        if (cfg.delta.num == 0) cfg.delta = {1, 1'000'000};
        auto violations = verify_inclusion(cfg);
        if (!violations.empty()) {
            std::ostringstream os;
            os << "inclusion violated at n = " << violations.front() << " (x = " << x
               << ", y = " << cfg.y << ", c = " << to_string(cfg.c)
               << ", delta = " << to_string(cfg.delta) << ")";
            return os.str();
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_markov(uint64_t x) {
    static const Rational kDeltas[] = {{3, 2}, {9, 5}, {2, 1}, {3, 1}};
    for (const auto& d : kDeltas) {
        BoundEvaluation b = markov_check(d, x);
        if (b.deviation > 0)
            return "markov bound exceeded: count " + std::to_string(b.empirical) + " > bound " +
                   std::to_string(b.theoretical) + " at delta = " + to_string(d);
    }
    return std::nullopt;
}

std::optional<std::string> check_mertens(double y_max) {
    if (!(y_max >= 2.0)) throw std::domain_error("check_mertens: y_max must be >= 2");
    if (y_max > 1'000'000.0)
        throw capacity_error("check_mertens: y_max exceeds cap 1e6");
    auto primes = sieve_primes(static_cast<uint32_t>(y_max));
    // Walk y through the primes; the product only changes there. Descending
    // re-evaluation per y matches mertens_product exactly.
    for (uint32_t y : primes) {
        long double prod = 1.0L;
        for (auto it = primes.rbegin(); it != primes.rend(); ++it)
            if (*it <= y) prod *= 1.0L - 1.0L / static_cast<long double>(*it);
        long double cap = 1.0L / std::log(static_cast<long double>(y));
        if (!(prod < cap))
            return "product over p <= " + std::to_string(y) + " is " +
                   std::to_string(static_cast<double>(prod)) + ", not below 1/ln(y) = " +
                   std::to_string(static_cast<double>(cap));
    }
    return std::nullopt;
}

} // namespace sigmaphi
