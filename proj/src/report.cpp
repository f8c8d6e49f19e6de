#include "sigmaphi/report.hpp"

#include "sigmaphi/baselines.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace sigmaphi {

namespace {

constexpr long double kPiSquaredOverSix = 1.644934066848226436L;

// One CSV row; cells joined with commas, so cells themselves must never
// contain one (lists use ';').
struct Row {
    std::string kind, x, y, c, delta, p, count, bound_shape, ratio, violations;

    std::string str() const {
        std::string out;
        const std::string* cells[] = {&kind, &x, &y, &c, &delta, &p, &count, &bound_shape,
                                      &ratio, &violations};
        for (size_t i = 0; i < 10; ++i) {
            if (i) out += ',';
            out += *cells[i];
        }
        return out;
    }
};

std::string fmt_u64(uint64_t v) { return std::to_string(v); }

std::string violations_cell(const std::vector<uint64_t>& vs) {
    constexpr size_t kMaxListed = 32;
    std::string out;
    for (size_t i = 0; i < vs.size() && i < kMaxListed; ++i) {
        if (i) out += ';';
        out += std::to_string(vs[i]);
    }
    if (vs.size() > kMaxListed)
        out += ";+" + std::to_string(vs.size() - kMaxListed) + " more";
    return out;
}

} // namespace

std::string threshold_fn_name(ThresholdFn f) {
    switch (f) {
    case ThresholdFn::Constant: return "const";
    case ThresholdFn::Log: return "log";
    case ThresholdFn::LogLog: return "loglog";
    case ThresholdFn::Log5: return "log5";
    }
    return "?";
}

std::string format_real(long double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12Lg", v);
    return buf;
}

std::string iso8601_utc_now() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string scan_csv(const ScanConfig& cfg, const CountReport& rep) {
    std::string out = kCsvHeader;
    out += "\nkind,x,y,c,delta,p,count,bound_shape,ratio,violations\n";

    const std::string xs = fmt_u64(rep.x);
    const std::string ys = format_real(cfg.y);

    for (const auto& [p, count] : rep.sp_counts) {
        Row r;
        r.kind = "sp";
        r.x = xs;
        r.p = fmt_u64(p);
        r.count = fmt_u64(count);
        try {
            double shape = sp_bound_shape(p, static_cast<double>(rep.x));
            r.bound_shape = format_real(shape);
            r.ratio = format_real(static_cast<long double>(count) / shape);
        } catch (const std::domain_error&) {
            // x < e^p: the bound shape's hypothesis fails, leave cells empty
        }
        out += r.str() + "\n";
    }

    {
        Row r;
        r.kind = "primorial";
        r.x = xs;
        r.y = ys;
        r.count = fmt_u64(rep.primorial_count);
        out += r.str() + "\n";
    }
    {
        Row r;
        r.kind = "threshold";
        if (cfg.f_choice != ThresholdFn::Constant)
            r.kind += "_" + threshold_fn_name(cfg.f_choice);
        else
            r.c = to_string(cfg.c);
        r.x = xs;
        r.count = fmt_u64(rep.threshold_count);
        out += r.str() + "\n";
    }
    {
        Row r;
        r.kind = "sigma_ratio";
        r.x = xs;
        r.delta = to_string(cfg.delta);
        r.count = fmt_u64(rep.sigma_ratio_count);
        if (cfg.delta.num > 0 && rep.sigma_over_n_sum > 0.0L) {
            long double bound = rep.sigma_over_n_sum * cfg.delta.den / cfg.delta.num;
            r.bound_shape = format_real(bound);
            r.ratio = format_real(static_cast<long double>(rep.sigma_ratio_count) / bound);
        }
        out += r.str() + "\n";
    }
    {
        Row r;
        r.kind = "sigma_over_n";
        r.x = xs;
        r.count = format_real(rep.sigma_over_n_sum);
        long double mean = kPiSquaredOverSix * static_cast<long double>(rep.x);
        r.bound_shape = format_real(mean);
        r.ratio = format_real(rep.sigma_over_n_sum / mean);
        out += r.str() + "\n";
    }
    {
        Row r;
        r.kind = "mertens";
        r.y = ys;
        long double prod = mertens_product(cfg.y);
        long double cap = 1.0L / std::log(static_cast<long double>(cfg.y));
        r.count = format_real(prod);
        r.bound_shape = format_real(cap);
        r.ratio = format_real(prod / cap);
        out += r.str() + "\n";
    }
    {
        Row r;
        r.kind = "inclusion";
        r.x = xs;
        r.y = ys;
        r.c = to_string(cfg.c);
        r.delta = to_string(cfg.delta);
        r.count = fmt_u64(rep.inclusion_violations.size());
        r.violations = violations_cell(rep.inclusion_violations);
        out += r.str() + "\n";
    }
    return out;
}

std::string scan_text(const ScanConfig& cfg, const CountReport& rep) {
    std::ostringstream os;
    os << "sigma-phi-lab scan\n";
    os << "x = " << rep.x << "  y = " << format_real(cfg.y) << "  c = " << to_string(cfg.c)
       << "  delta = " << to_string(cfg.delta) << "  f = " << threshold_fn_name(cfg.f_choice)
       << "  workers = " << cfg.worker_count << "  segment = " << cfg.segment_size << "\n\n";

    for (const auto& [p, count] : rep.sp_counts) {
        os << "S_" << p << "(x) = " << count;
        try {
            double shape = sp_bound_shape(p, static_cast<double>(rep.x));
            os << "   shape x*(lnln x/ln x)^(1/" << (p - 1) << ") = " << format_real(shape)
               << "   ratio = " << format_real(count / shape);
        } catch (const std::domain_error&) {
            os << "   (bound shape needs x >= e^" << p << ", not satisfied)";
        }
        os << "\n";
    }

    os << "P(y) | sigma(n)            count = " << rep.primorial_count << "\n";
    os << "phi(sigma(n)) >= n/f(n)    count = " << rep.threshold_count;
    if (cfg.f_choice == ThresholdFn::Constant) os << "   (f = 1/c, c = " << to_string(cfg.c) << ")";
    os << "\n";

    os << "sigma(n) >= delta*n        count = " << rep.sigma_ratio_count;
    if (cfg.delta.num > 0 && rep.sigma_over_n_sum > 0.0L) {
        long double bound = rep.sigma_over_n_sum * cfg.delta.den / cfg.delta.num;
        os << "   first-moment bound = " << format_real(bound)
           << (static_cast<long double>(rep.sigma_ratio_count) <= bound ? "   ok"
                                                                        : "   VIOLATED");
    }
    os << "\n";

    long double mean = kPiSquaredOverSix * static_cast<long double>(rep.x);
    os << "sum sigma(n)/n             = " << format_real(rep.sigma_over_n_sum)
       << "   (pi^2/6)x = " << format_real(mean)
       << "   ratio = " << format_real(rep.sigma_over_n_sum / mean) << "\n";

    long double prod = mertens_product(cfg.y);
    long double cap = 1.0L / std::log(static_cast<long double>(cfg.y));
    os << "prod_{p<=y}(1 - 1/p)       = " << format_real(prod) << "   1/ln(y) = "
       << format_real(cap) << "   strict inequality "
       << (prod < cap ? "holds" : "VIOLATED") << "\n";

    if (rep.inclusion_violations.empty()) {
        os << "inclusion violations       : none\n";
    } else {
        os << "inclusion violations       : " << rep.inclusion_violations.size() << " ["
           << violations_cell(rep.inclusion_violations) << "]\n";
    }
    return os.str();
}

std::string manifest_json(const ScanConfig& cfg, const RunMeta& meta) {
    nlohmann::ordered_json j;
    j["tool"] = "sigma-phi-lab";
    j["tool_version"] = kToolVersion;
    j["started_at"] = meta.started_at;
    j["finished_at"] = meta.finished_at;
    j["config"]["x"] = cfg.x;
    j["config"]["y"] = cfg.y;
    j["config"]["c"] = to_string(cfg.c);
    j["config"]["delta"] = to_string(cfg.delta);
    j["config"]["delta_source"] = meta.delta_source;
    j["config"]["f"] = threshold_fn_name(cfg.f_choice);
    j["config"]["p_list"] = cfg.p_list;
    j["config"]["segment_size"] = cfg.segment_size;
    j["config"]["workers"] = cfg.worker_count;
    j["cache_hits"] = meta.cache_hits;
    j["outputs"] = meta.outputs;
    return j.dump(2) + "\n";
}

} // namespace sigmaphi
