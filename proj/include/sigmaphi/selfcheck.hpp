#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace sigmaphi {

// Oracle-equivalence and invariant suites behind the verify subcommand.
// Each returns std::nullopt on success, or a description of the first
// counterexample. Oracles here are deliberately dumb and independent of the
// sieve machinery: divisor enumeration for sigma, gcd counting for phi,
// trial division for factoring.

std::optional<std::string> check_sigma_oracle(uint64_t limit);
std::optional<std::string> check_phi_oracle(uint64_t limit);

// phi(sigma(n)) via the prime-power cache vs. factoring sigma(n) afresh.
std::optional<std::string> check_phi_sigma_paths(uint64_t limit);

std::optional<std::string> check_multiplicativity(uint64_t limit, uint64_t pairs, uint64_t seed);

// 6/pi^2 < phi(n) sigma(n) / n^2 <= 1 for 2 <= n <= limit.
std::optional<std::string> check_sandwich(uint64_t limit);

// Randomized valid configs; verify_inclusion must come back empty for all.
std::optional<std::string> check_inclusion_random(uint64_t x, unsigned configs, uint64_t seed);

// count_sigma_ratio never exceeds its first-moment bound.
std::optional<std::string> check_markov(uint64_t x);

// Strict product inequality at every prime y <= y_max.
std::optional<std::string> check_mertens(double y_max);

} // namespace sigmaphi
