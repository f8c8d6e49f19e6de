#include "sigmaphi/baselines.hpp"

#include "sigmaphi/errors.hpp"
#include "sigmaphi/primes.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace sigmaphi {

BoundEvaluation make_bound_evaluation(std::string label, double empirical, double theoretical) {
    BoundEvaluation b;
    b.label = std::move(label);
    b.empirical = empirical;
    b.theoretical = theoretical;
    b.deviation = empirical - theoretical;
    b.relative_deviation = theoretical != 0.0 ? b.deviation / theoretical
                                              : std::numeric_limits<double>::quiet_NaN();
    return b;
}

long double PrimeSetProfile::reciprocal_sum(uint64_t x) const {
    long double a = 0.0L;
    if (x < 2) return a;
    auto flags = prime_flags(x);
    for (uint64_t p = 2; p <= x; ++p)
        if (flags[p] && member_test(p)) a += 1.0L / static_cast<long double>(p);
    return a;
}

double mertens_product(double y) {
    if (!(y >= 2.0))
        throw std::domain_error("mertens_product: y must be >= 2");
    auto primes = sieve_primes(static_cast<uint32_t>(y));
    // Multiply smallest factors last: descending order accumulates the tiny
    // tail first, which keeps the rounding of the final product tight.
    long double prod = 1.0L;
    for (auto it = primes.rbegin(); it != primes.rend(); ++it)
        prod *= 1.0L - 1.0L / static_cast<long double>(*it);
    long double cap = 1.0L / std::log(static_cast<long double>(y));
    if (!(prod < cap))
        throw std::logic_error("mertens_product: product not below 1/ln(y)");
    return static_cast<double>(prod);
}

namespace {

long double li_simpson(long double a, long double b, long double fa, long double fm,
                       long double fb, long double whole, int depth) {
    long double m = 0.5L * (a + b);
    long double lm = 0.5L * (a + m), rm = 0.5L * (m + b);
    long double flm = 1.0L / std::log(lm), frm = 1.0L / std::log(rm);
    long double left = (m - a) / 6.0L * (fa + 4.0L * flm + fm);
    long double right = (b - m) / 6.0L * (fm + 4.0L * frm + fb);
    if (depth > 48 || std::fabs(left + right - whole) < 1e-9L)
        return left + right + (left + right - whole) / 15.0L;
    return li_simpson(a, m, fa, flm, fm, left, depth + 1) +
           li_simpson(m, b, fm, frm, fb, right, depth + 1);
}

} // namespace

double li(double x) {
    if (!(x >= 2.0)) throw std::domain_error("li: x must be >= 2");
    if (x == 2.0) return 0.0;
    long double a = 2.0L, b = x;
    long double fa = 1.0L / std::log(a), fb = 1.0L / std::log(b);
    long double m = 0.5L * (a + b), fm = 1.0L / std::log(m);
    long double whole = (b - a) / 6.0L * (fa + 4.0L * fm + fb);
    return static_cast<double>(li_simpson(a, b, fa, fm, fb, whole, 0));
}

uint64_t prime_count_ap(uint64_t x, uint64_t q, int64_t a) {
    if (x < 2) throw std::domain_error("prime_count_ap: x must be >= 2");
    if (q == 0) throw std::domain_error("prime_count_ap: q must be >= 1");
    int64_t qm = static_cast<int64_t>(q);
    uint64_t a_norm = static_cast<uint64_t>(((a % qm) + qm) % qm);
    if (std::gcd(a_norm, q) != 1)
        throw std::domain_error("prime_count_ap: residue " + std::to_string(a) +
                                " not coprime to modulus " + std::to_string(q));
    auto flags = prime_flags(x);
    uint64_t count = 0;
    for (uint64_t p = 2; p <= x; ++p)
        if (flags[p] && p % q == a_norm) ++count;
    return count;
}

double ap_reciprocal_sum(uint64_t p, double lo, double hi) {
    if (!is_prime_u64(p))
        throw std::domain_error("ap_reciprocal_sum: p must be prime");
    if (!(lo >= 2.0) || !(hi > lo))
        throw std::domain_error("ap_reciprocal_sum: need 2 <= lo < hi");
    uint64_t top = static_cast<uint64_t>(std::ceil(hi)) - 1; // largest q < hi
    auto flags = prime_flags(top);
    long double sum = 0.0L;
    for (uint64_t q = 2; q <= top; ++q) {
        if (!flags[q]) continue;
        if (static_cast<double>(q) <= lo || static_cast<double>(q) >= hi) continue;
        if (q % p == p - 1) sum += 1.0L / static_cast<long double>(q);
    }
    return static_cast<double>(sum);
}

double iterated_log(unsigned k, double x) {
    if (k == 0) throw std::domain_error("iterated_log: k must be >= 1");
    long double v = x;
    for (unsigned i = 1; i <= k; ++i) {
        if (!(v > 0.0L))
            throw std::domain_error("iterated_log: argument <= 0 at iteration " +
                                    std::to_string(i) + " of " + std::to_string(k));
        v = std::log(v);
    }
    return static_cast<double>(v);
}

BoundEvaluation brun_proportion(const PrimeSetProfile& profile, uint64_t x) {
    if (x < 1) throw std::domain_error("brun_proportion: x must be >= 1");
    auto flags = prime_flags(x);
    std::vector<bool> hit(x + 1, false);
    long double a = 0.0L;
    for (uint64_t p = 2; p <= x; ++p) {
        if (!flags[p] || !profile.member_test(p)) continue;
        a += 1.0L / static_cast<long double>(p);
        for (uint64_t m = p; m <= x; m += p) hit[m] = true;
    }
    uint64_t free_count = 0;
    for (uint64_t n = 1; n <= x; ++n)
        if (!hit[n]) ++free_count;
    long double empirical = static_cast<long double>(free_count) / x;
    long double heuristic = std::exp(-a);
    return make_bound_evaluation(profile.description, static_cast<double>(empirical),
                                 static_cast<double>(heuristic));
}

double sp_bound_shape(uint64_t p, double x) {
    if (!is_prime_u64(p))
        throw std::domain_error("sp_bound_shape: p must be prime");
    long double ep = std::exp(static_cast<long double>(p));
    if (!(static_cast<long double>(x) >= ep))
        throw std::domain_error("sp_bound_shape: requires x >= e^p (x = " + std::to_string(x) +
                                ", e^p = " + std::to_string(static_cast<double>(ep)) + ")");
    long double lx = std::log(static_cast<long double>(x));
    long double llx = std::log(lx);
    return static_cast<double>(x * std::pow(llx / lx, 1.0L / (static_cast<long double>(p) - 1)));
}

ApSumEstimate ap_reciprocal_sum_estimate(uint64_t p, double x) {
    if (!is_prime_u64(p))
        throw std::domain_error("ap_reciprocal_sum_estimate: p must be prime");
    if (!(x > 1.0))
        throw std::domain_error("ap_reciprocal_sum_estimate: ln x <= 0 at x = " +
                                std::to_string(x));
    long double lx = std::log(static_cast<long double>(x));
    long double llx = std::log(lx);
    if (!(llx > 0.0L))
        throw std::domain_error("ap_reciprocal_sum_estimate: lnln x <= 0 at x = " +
                                std::to_string(x));
    long double lllx = std::log(llx);
    ApSumEstimate e;
    e.value = static_cast<double>((llx - lllx) / (static_cast<long double>(p) - 1));
    long double ep = std::exp(static_cast<long double>(p));
    e.strong_hypothesis = lx > ep;
    e.weak_hypothesis = static_cast<long double>(x) >= ep;
    return e;
}

uint64_t square_multiple_count(uint64_t p, double lo, uint64_t x) {
    if (!is_prime_u64(p))
        throw std::domain_error("square_multiple_count: p must be prime");
    if (!(lo >= 2.0)) throw std::domain_error("square_multiple_count: lo must be >= 2");
    if (x < 1) throw std::domain_error("square_multiple_count: x must be >= 1");
    constexpr uint64_t kCap = 1'000'000'000ull;
    if (x > kCap)
        throw capacity_error("square_multiple_count: x exceeds cap " + std::to_string(kCap));
    uint64_t root = isqrt_u64(x);
    auto flags = prime_flags(root);
    std::vector<bool> hit(x + 1, false);
    for (uint64_t q = 2; q <= root; ++q) {
        if (!(static_cast<double>(q) > lo) || !flags[q] || q % p != p - 1) continue;
        for (uint64_t m = q * q; m <= x; m += q * q) hit[m] = true;
    }
    uint64_t count = 0;
    for (uint64_t n = 1; n <= x; ++n)
        if (hit[n]) ++count;
    return count;
}

double exceptional_count_main_term(double c, double x) {
    if (!(c > 0.0))
        throw std::domain_error("exceptional_count_main_term: c must be > 0");
    double l4 = iterated_log(4, x); // throws below e^{e^e}
    if (!(l4 > 0.0))
        throw std::domain_error("exceptional_count_main_term: log_4(x) = " + std::to_string(l4) +
                                " <= 0; bound undefined at x = " + std::to_string(x));
    constexpr double kPiSquaredOverSix = 1.6449340668482264;
    return kPiSquaredOverSix * x / (c * l4);
}

} // namespace sigmaphi
