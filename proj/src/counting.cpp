#include "sigmaphi/counting.hpp"

#include "sigmaphi/compose.hpp"
#include "sigmaphi/errors.hpp"
#include "sigmaphi/primes.hpp"
#include "sigmaphi/segment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace sigmaphi {

namespace {

constexpr uint64_t kRationalDenCap = 1'000'000;

// value >= (num/den) * n, exactly. Products can pass 64 bits (value up to
// ~2.6e12 times den up to 1e6), so widen to 128.
inline bool ratio_at_least(uint64_t value, const Rational& r, uint64_t n) {
    return static_cast<unsigned __int128>(value) * r.den >=
           static_cast<unsigned __int128>(r.num) * n;
}

void check_inclusion_side_condition(const ScanConfig& cfg) {
    long double lhs = static_cast<long double>(cfg.delta.num) / cfg.delta.den;
    long double rhs = static_cast<long double>(cfg.c.num) / cfg.c.den *
                      std::log(static_cast<long double>(cfg.y));
    if (!(lhs <= rhs))
        throw config_error("inclusion check requires delta <= c * ln(y); delta = " +
                           to_string(cfg.delta) + " but c * ln(y) = " +
                           std::to_string(static_cast<double>(rhs)));
}

struct SegmentResult {
    std::vector<uint64_t> sp;
    uint64_t primorial = 0;
    uint64_t threshold = 0;
    uint64_t ratio = 0;
    long double sum = 0.0L;
    std::vector<uint64_t> violations;
};

class Kernel {
public:
    Kernel(const ScanConfig& cfg, const ScanParts& parts, std::span<const uint32_t> base,
           std::span<const uint32_t> y_primes, std::span<const uint64_t> plist)
        : cfg_(cfg), parts_(parts), base_(base), y_primes_(y_primes), plist_(plist),
          cache_(base) {
        need_sigma_factors_ = parts.threshold || parts.inclusion;
        need_sigma_value_ = parts.sum || parts.sigma_ratio || parts.inclusion;
        scratch_.reserve(32);
    }

    void process(uint64_t lo, uint64_t hi, SegmentResult& out) {
        out.sp.assign(plist_.size(), 0);
        for_each_factored(lo, hi, base_, [&](uint64_t n, std::span<const PrimePower> nf) {
            if (parts_.sp) {
                for (size_t i = 0; i < plist_.size(); ++i)
                    if (!sigma_divisible_by(nf, plist_[i])) ++out.sp[i];
            }

            bool primorial_divides = false;
            if (parts_.primorial || parts_.inclusion) {
                primorial_divides = true;
                for (uint32_t r : y_primes_) {
                    if (!sigma_divisible_by(nf, r)) {
                        primorial_divides = false;
                        break;
                    }
                }
                if (parts_.primorial && primorial_divides) ++out.primorial;
            }

            uint64_t sig = 0;
            if (need_sigma_value_) sig = sigma_from_factors(nf);
            if (parts_.sum)
                out.sum += static_cast<long double>(sig) / static_cast<long double>(n);

            bool ratio_ge = false;
            if (parts_.sigma_ratio || parts_.inclusion) {
                ratio_ge = ratio_at_least(sig, cfg_.delta, n);
                if (parts_.sigma_ratio && ratio_ge) ++out.ratio;
            }

            if (need_sigma_factors_) {
                sigma_factored_into(nf, cache_, sf_, scratch_);
                uint64_t ps = phi_from_factors(sf_.factors);
                if (parts_.threshold && threshold_holds(ps, n)) ++out.threshold;
                if (parts_.inclusion) {
                    // The three-way conjunction that must be impossible:
                    // phi(sigma(n)) >= c n while sigma(n) < delta n and
                    // P(y) | sigma(n).
                    if (ratio_at_least(ps, cfg_.c, n) && !ratio_ge && primorial_divides)
                        out.violations.push_back(n);
                }
            }
        });
    }

private:
    bool threshold_holds(uint64_t ps, uint64_t n) const {
        switch (cfg_.f_choice) {
        case ThresholdFn::Constant:
            return ratio_at_least(ps, cfg_.c, n);
        case ThresholdFn::Log: {
            // f(n) = ln n; n = 1 has f <= 0, where n/f(n) is no bound at all.
            if (n < 2) return false;
            long double f = std::log(static_cast<long double>(n));
            return static_cast<long double>(ps) * f >= static_cast<long double>(n);
        }
        case ThresholdFn::LogLog: {
            if (n < 3) return false; // lnln n <= 0 up to n = e^1 < 3
            long double f = std::log(std::log(static_cast<long double>(n)));
            if (f <= 0.0L) return false;
            return static_cast<long double>(ps) * f >= static_cast<long double>(n);
        }
        case ThresholdFn::Log5:
            break; // rejected by validate_config
        }
        throw std::logic_error("threshold_holds: unhandled threshold function");
    }

    const ScanConfig& cfg_;
    ScanParts parts_;
    std::span<const uint32_t> base_;
    std::span<const uint32_t> y_primes_;
    std::span<const uint64_t> plist_;
    PrimePowerSigmaCache cache_;
    FactoredInteger sf_;
    std::vector<PrimePower> scratch_;
    bool need_sigma_factors_ = false;
    bool need_sigma_value_ = false;
};

} // namespace

void validate_config(const ScanConfig& cfg) {
    if (cfg.x < 1) throw std::domain_error("scan: x must be >= 1");
    if (cfg.x > kMaxScanX)
        throw capacity_error("scan: x = " + std::to_string(cfg.x) + " exceeds cap " +
                             std::to_string(kMaxScanX));
    if (!(cfg.y >= 2.0)) throw std::domain_error("scan: y must be >= 2");
    if (!(cfg.y <= 100'000'000.0))
        throw capacity_error("scan: y = " + std::to_string(cfg.y) + " exceeds cap 1e8");
    if (cfg.c.den == 0 || cfg.delta.den == 0)
        throw config_error("scan: rational with zero denominator");
    if (cfg.c.num == 0) throw std::domain_error("scan: c must be > 0");
    if (cfg.delta.num == 0) throw std::domain_error("scan: delta must be > 0");
    if (cfg.f_choice == ThresholdFn::Log5)
        throw config_error("scan: f = 1/log_5 rejected; log_5 n <= 0 for every 64-bit n "
                           "(n would need to exceed e^e^e^e)");
    for (uint64_t p : cfg.p_list)
        if (!is_prime_u64(p))
            throw std::domain_error("scan: S_p requires prime p, got " + std::to_string(p));
    if (cfg.segment_size < 1) throw config_error("scan: segment size must be >= 1");
    if (cfg.worker_count < 1) throw config_error("scan: worker count must be >= 1");
}

CountReport scan_counts(const ScanConfig& cfg, const ScanParts& parts,
                        std::span<const uint32_t> base_primes) {
    validate_config(cfg);
    if (parts.inclusion) check_inclusion_side_condition(cfg);

    // sigma(p^k) < 2 p^k <= 2x, so a list certifying cofactors <= 2x serves
    // both segment sieving and sigma refactorization.
    uint64_t sigma_top = 2 * cfg.x;
    std::vector<uint32_t> own_primes;
    if (base_primes.empty()) {
        own_primes = sieve_primes_certified(sigma_top);
        base_primes = own_primes;
    } else {
        uint64_t back = base_primes.back();
        if (static_cast<unsigned __int128>(back + 1) * (back + 1) <= sigma_top)
            throw std::invalid_argument(
                "scan: base primes end at " + std::to_string(back) +
                "; need (B+1)^2 > 2x = " + std::to_string(sigma_top));
    }

    std::vector<uint32_t> y_primes;
    if (parts.primorial || parts.inclusion)
        y_primes = sieve_primes(static_cast<uint32_t>(cfg.y));

    std::vector<uint64_t> plist(cfg.p_list);
    std::sort(plist.begin(), plist.end());
    plist.erase(std::unique(plist.begin(), plist.end()), plist.end());

    const uint64_t seg_size = cfg.segment_size;
    const uint64_t n_segs = (cfg.x + seg_size - 1) / seg_size;
    const unsigned workers =
        static_cast<unsigned>(std::min<uint64_t>(cfg.worker_count, n_segs));

    std::vector<SegmentResult> results(n_segs);
    std::atomic<uint64_t> next_seg{0};
    std::exception_ptr first_error;
    std::mutex error_mu;

    auto work = [&] {
        try {
            Kernel kernel(cfg, parts, base_primes, y_primes, plist);
            for (;;) {
                uint64_t s = next_seg.fetch_add(1, std::memory_order_relaxed);
                if (s >= n_segs) break;
                uint64_t lo = 1 + s * seg_size;
                uint64_t hi = std::min(cfg.x + 1, lo + seg_size);
                kernel.process(lo, hi, results[s]);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lk(error_mu);
            if (!first_error) first_error = std::current_exception();
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    // Merge in segment order: integer counts commute, but the long double
    // accumulation and the violation list must stay ordered for bit-identical
    // reports across worker counts.
    CountReport rep;
    rep.x = cfg.x;
    std::vector<uint64_t> sp_total(plist.size(), 0);
    for (const auto& r : results) {
        for (size_t i = 0; i < plist.size(); ++i) sp_total[i] += r.sp[i];
        rep.primorial_count += r.primorial;
        rep.threshold_count += r.threshold;
        rep.sigma_ratio_count += r.ratio;
        rep.sigma_over_n_sum += r.sum;
        rep.inclusion_violations.insert(rep.inclusion_violations.end(), r.violations.begin(),
                                        r.violations.end());
    }
    for (size_t i = 0; i < plist.size(); ++i) rep.sp_counts[plist[i]] = sp_total[i];
    return rep;
}

CountReport run_scan(const ScanConfig& cfg, std::span<const uint32_t> base_primes) {
    ScanParts parts;
    parts.sp = !cfg.p_list.empty();
    parts.primorial = true;
    parts.threshold = true;
    parts.sigma_ratio = true;
    parts.sum = true;
    parts.inclusion = true;
    return scan_counts(cfg, parts, base_primes);
}

uint64_t count_sp(uint64_t p, uint64_t x) {
    if (!is_prime_u64(p))
        throw std::domain_error("count_sp: p = " + std::to_string(p) + " is not prime");
    ScanConfig cfg;
    cfg.x = x;
    cfg.p_list = {p};
    ScanParts parts;
    parts.sp = true;
    return scan_counts(cfg, parts).sp_counts.at(p);
}

uint64_t count_primorial_divisible(double y, uint64_t x) {
    ScanConfig cfg;
    cfg.x = x;
    cfg.y = y;
    ScanParts parts;
    parts.primorial = true;
    return scan_counts(cfg, parts).primorial_count;
}

uint64_t count_threshold(const ScanConfig& cfg) {
    ScanParts parts;
    parts.threshold = true;
    return scan_counts(cfg, parts).threshold_count;
}

uint64_t count_sigma_ratio(const Rational& delta, uint64_t x) {
    ScanConfig cfg;
    cfg.x = x;
    cfg.delta = delta;
    ScanParts parts;
    parts.sigma_ratio = true;
    return scan_counts(cfg, parts).sigma_ratio_count;
}

uint64_t count_sigma_ratio(double delta, uint64_t x) {
    return count_sigma_ratio(approx_rational(delta, kRationalDenCap), x);
}

long double sigma_over_n_sum(uint64_t x) {
    ScanConfig cfg;
    cfg.x = x;
    ScanParts parts;
    parts.sum = true;
    return scan_counts(cfg, parts).sigma_over_n_sum;
}

std::vector<uint64_t> verify_inclusion(const ScanConfig& cfg) {
    ScanParts parts;
    parts.inclusion = true;
    return scan_counts(cfg, parts).inclusion_violations;
}

BoundEvaluation markov_check(const Rational& delta, uint64_t x) {
    if (delta.num == 0 || delta.den == 0)
        throw std::domain_error("markov_check: delta must be > 0");
    ScanConfig cfg;
    cfg.x = x;
    cfg.delta = delta;
    ScanParts parts;
    parts.sigma_ratio = true;
    parts.sum = true;
    CountReport rep = scan_counts(cfg, parts);
    long double bound = rep.sigma_over_n_sum * delta.den / delta.num;
    return make_bound_evaluation("markov delta=" + to_string(delta),
                                 static_cast<double>(rep.sigma_ratio_count),
                                 static_cast<double>(bound));
}

BoundEvaluation markov_check(double delta, uint64_t x) {
    return markov_check(approx_rational(delta, kRationalDenCap), x);
}

} // namespace sigmaphi
