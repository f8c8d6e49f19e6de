#pragma once

#include "sigmaphi/baselines.hpp"
#include "sigmaphi/rational.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace sigmaphi {

// Hard range cap. For n <= 1e11, sigma(n) < n * (1 + ln n) < 2^63, so every
// intermediate stays in uint64_t; checked arithmetic backs this up anyway.
inline constexpr uint64_t kMaxScanX = 100'000'000'000ull;

// f in the threshold phi(sigma(n)) >= n / f(n). Constant means f = 1/c with
// the rational c below, i.e. the comparison phi(sigma(n)) >= c * n done
// exactly by cross-multiplication. Log5 is listed for completeness but
// rejected at runtime: 1/log_5 n needs log_5 n > 0, which no 64-bit n
// reaches (log_4 n would have to exceed 1, i.e. n > e^e^e^e).
enum class ThresholdFn { Constant, Log, LogLog, Log5 };

struct ScanConfig {
    uint64_t x = 1'000'000;
    double y = 3.0;                // primorial cutoff: P(y) = prod of primes <= y
    Rational c{1, 1};              // threshold slope
    Rational delta{1, 1};          // sigma-ratio cutoff
    ThresholdFn f_choice = ThresholdFn::Constant;
    std::vector<uint64_t> p_list;  // primes p for the S_p counts
    uint64_t segment_size = 1ull << 20;
    unsigned worker_count = 1;
};

// Throws domain/config/capacity errors; returns normally iff the config is
// runnable.
void validate_config(const ScanConfig& cfg);

struct CountReport {
    uint64_t x = 0;
    std::map<uint64_t, uint64_t> sp_counts;      // p -> #{n <= x : p not | sigma(n)}
    uint64_t primorial_count = 0;                // #{n <= x : P(y) | sigma(n)}
    uint64_t threshold_count = 0;                // #{n <= x : phi(sigma(n)) >= n/f(n)}
    uint64_t sigma_ratio_count = 0;              // #{n <= x : sigma(n) >= delta n}
    long double sigma_over_n_sum = 0.0L;         // sum of sigma(n)/n over n <= x
    std::vector<uint64_t> inclusion_violations;  // see verify_inclusion
};

// Which parts of the report a scan should fill in.
struct ScanParts {
    bool sp = false;
    bool primorial = false;
    bool threshold = false;
    bool sigma_ratio = false;
    bool sum = false;
    bool inclusion = false;
};

// One pass over n = 1..x, segmented. Workers claim segments dynamically, but
// partial results merge in segment order, so the report is bit-identical for
// every worker count. base_primes (ascending, covering sqrt(2x)) may be
// shared across calls; pass {} to have the scan sieve its own.
CountReport scan_counts(const ScanConfig& cfg, const ScanParts& parts,
                        std::span<const uint32_t> base_primes = {});

// Everything at once.
CountReport run_scan(const ScanConfig& cfg, std::span<const uint32_t> base_primes = {});

// #{n <= x : p does not divide sigma(n)}.
uint64_t count_sp(uint64_t p, uint64_t x);

// #{n <= x : every prime r <= y divides sigma(n)}.
uint64_t count_primorial_divisible(double y, uint64_t x);

// #{n <= x : phi(sigma(n)) >= n/f(n)} per cfg.f_choice / cfg.c.
uint64_t count_threshold(const ScanConfig& cfg);

// #{n <= x : sigma(n) >= delta n}, exact rational comparison. The double
// overload converts through the best rational approximation with denominator
// <= 10^6 first.
uint64_t count_sigma_ratio(const Rational& delta, uint64_t x);
uint64_t count_sigma_ratio(double delta, uint64_t x);

long double sigma_over_n_sum(uint64_t x);

// The exact inclusion behind the main sieve step: if P(y) | sigma(n) and
// sigma(n) < delta n with delta <= c ln y, then
//   phi(sigma(n)) = sigma(n) * prod_{p | sigma(n)} (1 - 1/p)
//                 < sigma(n) / ln y  <  (delta / ln y) n  <=  c n.
// Returns every n <= x violating it; a nonempty result disproves the
// implementation, not the mathematics. Enforces delta <= c ln y up front.
std::vector<uint64_t> verify_inclusion(const ScanConfig& cfg);

// #{n <= x : sigma(n) >= delta n} against the first-moment bound
// (1/delta) * sum_{n <= x} sigma(n)/n. empirical > theoretical would violate
// Markov's inequality; callers treat positive deviation as a failure.
BoundEvaluation markov_check(const Rational& delta, uint64_t x);
BoundEvaluation markov_check(double delta, uint64_t x);

} // namespace sigmaphi
