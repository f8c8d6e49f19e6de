#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sigmaphi/errors.hpp"
#include "sigmaphi/factored.hpp"
#include "sigmaphi/primes.hpp"
#include "sigmaphi/segment.hpp"
#include "sigmaphi/spf_table.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

using namespace sigmaphi;

TEST_CASE("isqrt_u64 exact on edges") {
    CHECK(isqrt_u64(0) == 0);
    CHECK(isqrt_u64(1) == 1);
    CHECK(isqrt_u64(3) == 1);
    CHECK(isqrt_u64(4) == 2);
    CHECK(isqrt_u64(2000) == 44);
    for (uint64_t r : {2ull, 1000ull, 1ull << 26, (1ull << 31) - 1, 3037000499ull}) {
        CHECK(isqrt_u64(r * r) == r);
        CHECK(isqrt_u64(r * r - 1) == r - 1);
        CHECK(isqrt_u64(r * r + 1) == r);
    }
    CHECK(isqrt_u64(UINT64_MAX) == 4294967295ull);
}

TEST_CASE("sieve_primes matches trial division") {
    auto primes = sieve_primes(100);
    std::vector<uint32_t> expect = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                    43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
    CHECK(primes == expect);
    CHECK(sieve_primes(1).empty());
    CHECK(sieve_primes(2) == std::vector<uint32_t>{2});

    auto big = sieve_primes(10000);
    CHECK(big.size() == 1229); // pi(1e4)
    for (uint32_t p : big) CHECK(oracles::is_prime_slow(p));
}

TEST_CASE("prime_flags and is_prime_u64 agree") {
    auto flags = prime_flags(10000);
    for (uint64_t n = 0; n <= 10000; ++n) CHECK(flags[n] == is_prime_u64(n));
    CHECK_THROWS_AS(prime_flags(2'000'000'000ull), capacity_error);
}

TEST_CASE("sieve_primes_certified certifies its top") {
    for (uint64_t top : {2ull, 3ull, 4ull, 1999ull, 2000ull, 2001ull, 1936ull, 100000ull}) {
        auto primes = sieve_primes_certified(top);
        REQUIRE(!primes.empty());
        uint64_t back = primes.back();
        CHECK((back + 1) * (back + 1) > top);
        // Completeness: every prime <= back is present.
        auto full = sieve_primes(static_cast<uint32_t>(back));
        CHECK(primes == full);
    }
}

TEST_CASE("build_spf_table basics and errors") {
    SpfTable t = build_spf_table(100);
    CHECK(t.spf_of(2) == 2);
    CHECK(t.spf_of(4) == 2);
    CHECK(t.spf_of(7) == 7);
    CHECK(t.spf_of(9) == 3);
    CHECK(t.spf_of(91) == 7); // 91 = 7 * 13
    CHECK(t.spf_of(97) == 97);
    CHECK_THROWS_AS(t.spf_of(101), std::out_of_range);
    CHECK_THROWS_AS(build_spf_table(1), std::domain_error);
    CHECK_THROWS_AS(build_spf_table(1ull << 31), capacity_error);
}

TEST_CASE("spf table matches trial division up to 20000") {
    SpfTable t = build_spf_table(20000);
    for (uint64_t n = 2; n <= 20000; ++n) {
        auto f = oracles::factor_slow(n);
        CHECK(t.spf_of(n) == f.front().first);
    }
    auto primes = t.primes();
    auto expect = sieve_primes(20000);
    CHECK(std::equal(primes.begin(), primes.end(), expect.begin(), expect.end()));
}

TEST_CASE("factorize round-trips and matches the oracle") {
    SpfTable t = build_spf_table(10000);
    CHECK(factorize(1, t) == FactoredInteger{1, {}});
    CHECK(factorize(12, t) == FactoredInteger{12, {{2, 2}, {3, 1}}});
    CHECK(factorize(97, t) == FactoredInteger{97, {{97, 1}}});
    CHECK(factorize(360, t) == FactoredInteger{360, {{2, 3}, {3, 2}, {5, 1}}});
    for (uint64_t n = 1; n <= 5000; ++n) {
        FactoredInteger f = factorize(n, t);
        validate(f);
        auto slow = oracles::factor_slow(n);
        REQUIRE(f.factors.size() == slow.size());
        for (size_t i = 0; i < slow.size(); ++i) {
            CHECK(f.factors[i].prime == slow[i].first);
            CHECK(f.factors[i].exponent == slow[i].second);
        }
    }
    CHECK_THROWS_AS(factorize(0, t), std::domain_error);
    CHECK_THROWS_AS(factorize(10001, t), std::out_of_range);
}

TEST_CASE("phi and sigma match brute force") {
    SpfTable t = build_spf_table(20000);
    CHECK(phi(factorize(1, t)) == 1);
    CHECK(phi(factorize(12, t)) == 4);
    CHECK(phi(factorize(13, t)) == 12);
    CHECK(sigma(factorize(1, t)) == 1);
    CHECK(sigma(factorize(6, t)) == 12);
    CHECK(sigma(factorize(10, t)) == 18);
    CHECK(sigma(factorize(28, t)) == 56); // perfect number
    CHECK(sigma_prime_power(2, 5) == 63);

    // Full sigma oracle; phi oracle over a smaller range (quadratic cost).
    for (uint64_t n = 1; n <= 20000; ++n)
        CHECK(sigma(factorize(n, t)) == oracles::sigma_slow(n));
    for (uint64_t n = 1; n <= 5000; ++n)
        CHECK(phi(factorize(n, t)) == oracles::phi_slow(n));
}

TEST_CASE("sigma overflow is detected, never wrapped") {
    // sigma(2^63) = 2^64 - 1 is the last power of two that fits.
    CHECK(sigma_prime_power(2, 62) == UINT64_MAX / 2);
    CHECK(sigma_prime_power(2, 63) == UINT64_MAX);
    CHECK_THROWS_AS(sigma_prime_power(2, 64), std::overflow_error);
    CHECK_THROWS_AS(sigma_prime_power(4294967311ull, 2), std::overflow_error);
}

TEST_CASE("multiplicativity on coprime pairs") {
    SpfTable t = build_spf_table(4000000);
    // Exhaustive over a small grid, then deterministic samples higher up.
    for (uint64_t m = 1; m <= 300; ++m) {
        for (uint64_t n = 1; n <= 300; ++n) {
            if (std::gcd(m, n) != 1) continue;
            CHECK(phi(factorize(m * n, t)) == phi(factorize(m, t)) * phi(factorize(n, t)));
            CHECK(sigma(factorize(m * n, t)) == sigma(factorize(m, t)) * sigma(factorize(n, t)));
        }
    }
    uint64_t state = 42;
    for (int i = 0; i < 2000;) {
        uint64_t m = oracles::splitmix64(state) % 2000 + 1;
        uint64_t n = oracles::splitmix64(state) % 2000 + 1;
        if (std::gcd(m, n) != 1) continue;
        ++i;
        CHECK(phi(factorize(m * n, t)) == phi(factorize(m, t)) * phi(factorize(n, t)));
        CHECK(sigma(factorize(m * n, t)) == sigma(factorize(m, t)) * sigma(factorize(n, t)));
    }
}

TEST_CASE("classical sandwich 6/pi^2 < phi(n) sigma(n) / n^2 <= 1") {
    SpfTable t = build_spf_table(100000);
    const long double lo = 0.607927101854026628L; // 6/pi^2
    for (uint64_t n = 2; n <= 100000; ++n) {
        FactoredInteger f = factorize(n, t);
        long double ratio = static_cast<long double>(phi(f)) * static_cast<long double>(sigma(f)) /
                            (static_cast<long double>(n) * static_cast<long double>(n));
        CHECK(ratio > lo);
        CHECK(ratio <= 1.0L);
    }
}

TEST_CASE("FactoredInteger validation rejects bad shapes") {
    FactoredInteger ok{12, {{2, 2}, {3, 1}}};
    CHECK_NOTHROW(validate(ok));
    FactoredInteger wrong_value{13, {{2, 2}, {3, 1}}};
    CHECK_THROWS_AS(validate(wrong_value), std::invalid_argument);
    FactoredInteger unsorted{12, {{3, 1}, {2, 2}}};
    CHECK_THROWS_AS(validate(unsorted), std::invalid_argument);
    FactoredInteger zero_exp{12, {{2, 2}, {3, 1}, {5, 0}}};
    CHECK_THROWS_AS(validate(zero_exp), std::invalid_argument);
    FactoredInteger one_with_factors{1, {{2, 1}}};
    CHECK_THROWS_AS(validate(one_with_factors), std::invalid_argument);
}

TEST_CASE("sieve_range reconstructs factorizations") {
    SieveSegment seg = sieve_range(1, 11);
    CHECK(seg.size() == 10);
    CHECK(seg.factored(1) == FactoredInteger{1, {}});
    CHECK(seg.factored(6) == FactoredInteger{6, {{2, 1}, {3, 1}}});
    CHECK(seg.factored(8) == FactoredInteger{8, {{2, 3}}});
    CHECK_THROWS_AS(seg.factors_of(11), std::out_of_range);
    CHECK_THROWS_AS(seg.factors_of(0), std::out_of_range);

    SieveSegment one = sieve_range(1, 2);
    CHECK(one.factored(1).factors.empty());
}

TEST_CASE("sieve_range spot check against trial division at 1e6") {
    SieveSegment seg = sieve_range(1000000, 1010000);
    uint64_t state = 7;
    for (int i = 0; i < 100; ++i) {
        uint64_t n = 1000000 + oracles::splitmix64(state) % 10000;
        FactoredInteger f = seg.factored(n);
        validate(f);
        auto slow = oracles::factor_slow(n);
        REQUIRE(f.factors.size() == slow.size());
        for (size_t j = 0; j < slow.size(); ++j) {
            CHECK(f.factors[j].prime == slow[j].first);
            CHECK(f.factors[j].exponent == slow[j].second);
        }
    }
}

TEST_CASE("sieve_range segments stitch together identically") {
    SieveSegment whole = sieve_range(1, 30001);
    std::vector<std::pair<uint64_t, uint64_t>> splits = {{1, 9973}, {9973, 20110}, {20110, 30001}};
    for (auto [lo, hi] : splits) {
        SieveSegment part = sieve_range(lo, hi);
        for (uint64_t n = lo; n < hi; ++n) {
            auto a = whole.factors_of(n);
            auto b = part.factors_of(n);
            REQUIRE(a.size() == b.size());
            for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
        }
    }
}

TEST_CASE("sieve_range rejects bad ranges") {
    CHECK_THROWS_AS(sieve_range(0, 10), std::domain_error);
    CHECK_THROWS_AS(sieve_range(10, 10), std::domain_error);
    CHECK_THROWS_AS(sieve_range(20, 10), std::domain_error);
    CHECK_THROWS_AS(sieve_range(1, 1ull << 29), capacity_error);
    CHECK_THROWS_AS(sieve_range(200'000'000'000ull, 200'000'000'010ull), capacity_error);
}

TEST_CASE("for_each_factored validates prime coverage") {
    std::vector<uint32_t> tiny = {2, 3};
    CHECK_THROWS_AS(for_each_factored(1, 1000, tiny, [](uint64_t, auto) {}), std::logic_error);
    // (3+1)^2 = 16 > 15 covers [1, 16).
    uint64_t seen = 0;
    for_each_factored(1, 16, tiny, [&](uint64_t n, std::span<const PrimePower> f) {
        uint64_t prod = 1;
        for (auto& pp : f)
            for (uint32_t i = 0; i < pp.exponent; ++i) prod *= pp.prime;
        CHECK(prod == n);
        ++seen;
    });
    CHECK(seen == 15);
}
