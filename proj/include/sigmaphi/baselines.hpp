#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace sigmaphi {

// Empirical quantity next to the bound it is being compared against.
struct BoundEvaluation {
    std::string label;
    double empirical = 0.0;
    double theoretical = 0.0;
    double deviation = 0.0;          // empirical - theoretical
    double relative_deviation = 0.0; // deviation / theoretical
};

BoundEvaluation make_bound_evaluation(std::string label, double empirical, double theoretical);

// A set of primes given by a membership predicate, e.g. "primes == 2 mod 3".
struct PrimeSetProfile {
    std::string description;
    std::function<bool(uint64_t)> member_test;

    // A(x) = sum of 1/p over member primes p <= x. Nonnegative and
    // nondecreasing in x.
    long double reciprocal_sum(uint64_t x) const;
};

// prod_{p <= y} (1 - 1/p), evaluated over primes in descending order.
// Strictly below 1/ln(y) for every y >= 2.
double mertens_product(double y);

// Logarithmic integral li(x), integrating dt/ln t from 2 to x by adaptive
// Simpson quadrature, local tolerance 1e-9.
double li(double x);

// pi(x; q, a): primes p <= x with p == a (mod q). a may be negative (-1 means
// the residue q-1). Requires gcd(a, q) == 1.
uint64_t prime_count_ap(uint64_t x, uint64_t q, int64_t a);

// Sum of 1/q over primes q == -1 (mod p) with lo < q < hi, ascending.
double ap_reciprocal_sum(uint64_t p, double lo, double hi);

// ln applied k times. Throws std::domain_error naming the first iteration
// whose argument is <= 0.
double iterated_log(unsigned k, double x);

// Proportion of n <= x free of prime factors from the profile's set, next to
// the sieve heuristic e^{-A(x)}.
BoundEvaluation brun_proportion(const PrimeSetProfile& profile, uint64_t x);

// Shape of the upper bound for #{n <= x : p does not divide sigma(n)}:
// x * (lnln x / ln x)^{1/(p-1)}, constants omitted. Requires x >= e^p.
double sp_bound_shape(uint64_t p, double x);

// Leading term of sum 1/q over primes q == -1 (mod p), q <= x:
// (lnln x - lnlnln x) / (p - 1). The derivation assumes ln x > e^p; the
// weaker x >= e^p is enough for the bound shape above. Both flags report
// which hypothesis x actually satisfies so small-x comparisons are labeled
// as extrapolation rather than silently rejected.
struct ApSumEstimate {
    double value = 0.0;
    bool strong_hypothesis = false; // ln x > e^p
    bool weak_hypothesis = false;   // x >= e^p
};
ApSumEstimate ap_reciprocal_sum_estimate(uint64_t p, double x);

// Count of n <= x divisible by q^2 for some prime q == -1 (mod p), q > lo.
// Bounds the error made by assuming such q divide n exactly once.
uint64_t square_multiple_count(uint64_t p, double lo, uint64_t x);

// Main-term bound on #{n <= x : phi(sigma(n)) >= c n}: (pi^2/6) * x / (c * log_4 x)
// with log_4 the 4-fold iterated ln. Defined only where log_4 x > 0
// (x > e^{e^e} ~ 3.8e6); below that it throws std::domain_error. Note the
// bound stays above x itself until log_4 x reaches pi^2/(6c), so at any
// sieveable x it is evaluable at best, never binding.
double exceptional_count_main_term(double c, double x);

} // namespace sigmaphi
