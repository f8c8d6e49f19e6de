#include "sigmaphi/cache_file.hpp"
#include "sigmaphi/counting.hpp"
#include "sigmaphi/errors.hpp"
#include "sigmaphi/primes.hpp"
#include "sigmaphi/rational.hpp"
#include "sigmaphi/report.hpp"
#include "sigmaphi/selfcheck.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <thread>

namespace fs = std::filesystem;
using namespace sigmaphi;

namespace {

constexpr uint64_t kDeltaDenCap = 1'000'000;

// Exact integer parsing that still accepts scientific notation: "1e7" and
// "2.5e3" go through the rational parser, so "1.5" is rejected as non-integer
// instead of being silently truncated.
uint64_t parse_u64_sci(const std::string& text, const char* what) {
    Rational r;
    try {
        r = parse_rational(text);
    } catch (const config_error& e) {
        throw config_error(std::string(what) + ": " + e.what());
    }
    if (r.den != 1)
        throw config_error(std::string(what) + " must be an integer, got '" + text + "'");
    return r.num;
}

ThresholdFn f_from_name(const std::string& name) {
    if (name == "const") return ThresholdFn::Constant;
    if (name == "log") return ThresholdFn::Log;
    if (name == "loglog") return ThresholdFn::LogLog;
    throw config_error("--f must be one of const, log, loglog");
}

std::string env_or_empty(const char* name) {
    const char* v = std::getenv(name);
    return v == nullptr ? std::string() : std::string(v);
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw config_error("cannot write " + path.string());
    out << content;
    out.flush();
    if (!out) throw config_error("write failed for " + path.string());
}

struct ScanCli {
    std::string x = "1000000";
    double y = 3.0;
    std::string c = "1";
    std::string delta = "auto";
    std::vector<uint64_t> sp = {3, 5, 7};
    std::string f = "const";
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::string segment = "1048576";
    std::string cache_dir;
    std::string out_dir = ".";
    std::string format = "all";
};

int cmd_scan(const ScanCli& a) {
    RunMeta meta;
    meta.started_at = iso8601_utc_now();

    ScanConfig cfg;
    cfg.x = parse_u64_sci(a.x, "--x");
    cfg.y = a.y;
    cfg.c = parse_rational(a.c);
    if (cfg.c.num == 0) throw config_error("--c must be > 0");
    cfg.f_choice = f_from_name(a.f);
    cfg.p_list = a.sp;
    cfg.segment_size = parse_u64_sci(a.segment, "--segment-size");
    cfg.worker_count = a.workers;

    if (a.delta == "auto") {
        // Largest rational <= c * ln(y) with denominator <= 1e6, so the
        // inclusion side condition delta <= c * ln(y) holds by construction.
        long double target = static_cast<long double>(cfg.c.num) / cfg.c.den *
                             std::log(static_cast<long double>(cfg.y));
        cfg.delta = floor_rational(static_cast<double>(target), kDeltaDenCap);
        if (cfg.delta.num == 0)
            throw config_error("auto delta: c * ln(y) too small to represent");
        meta.delta_source = "auto";
    } else {
        cfg.delta = parse_rational(a.delta);
    }

    validate_config(cfg);

    // Base primes, from the cache when one certifies cofactors up to 2x
    // (largest prime B with (B+1)^2 > 2x).
    std::string cache_dir = !a.cache_dir.empty() ? a.cache_dir : env_or_empty("SIGMA_PHI_CACHE_DIR");
    uint64_t sigma_top = 2 * cfg.x;
    std::vector<uint32_t> primes;
    if (!cache_dir.empty()) {
        fs::path cache_path = fs::path(cache_dir) / "spf.splb";
        if (fs::exists(cache_path)) {
            try {
                SpfTable t = load_spf_cache(cache_path);
                primes = t.primes();
                uint64_t back = primes.empty() ? 1 : primes.back();
                if (static_cast<unsigned __int128>(back + 1) * (back + 1) > sigma_top)
                    meta.cache_hits = 1;
                else
                    primes.clear();
            } catch (const config_error& e) {
                std::cerr << "note: ignoring unusable cache: " << e.what() << "\n";
            }
        }
    }
    if (primes.empty()) primes = sieve_primes_certified(sigma_top);

    CountReport rep = run_scan(cfg, primes);

    fs::create_directories(a.out_dir);
    const std::string text = scan_text(cfg, rep);
    if (a.format == "csv" || a.format == "all") {
        fs::path p = fs::path(a.out_dir) / "report.csv";
        write_file(p, scan_csv(cfg, rep));
        meta.outputs.push_back(p.string());
    }
    if (a.format == "text" || a.format == "all") {
        fs::path p = fs::path(a.out_dir) / "report.txt";
        write_file(p, text);
        meta.outputs.push_back(p.string());
    }
    fs::path manifest_path = fs::path(a.out_dir) / "manifest.json";
    meta.outputs.push_back(manifest_path.string());
    meta.finished_at = iso8601_utc_now();
    write_file(manifest_path, manifest_json(cfg, meta));

    std::cout << text;
    for (const auto& o : meta.outputs) std::cout << "wrote " << o << "\n";

    int rc = 0;
    if (!rep.inclusion_violations.empty()) {
        std::cerr << "INVARIANT VIOLATION: inclusion failed for " << rep.inclusion_violations.size()
                  << " value(s), first n = " << rep.inclusion_violations.front() << "\n";
        rc = 2;
    }
    if (cfg.delta.num > 0) {
        long double bound = rep.sigma_over_n_sum * cfg.delta.den / cfg.delta.num;
        if (static_cast<long double>(rep.sigma_ratio_count) > bound) {
            std::cerr << "INVARIANT VIOLATION: sigma-ratio count " << rep.sigma_ratio_count
                      << " exceeds first-moment bound " << format_real(bound) << "\n";
            rc = 2;
        }
    }
    return rc;
}

struct VerifyCli {
    std::string oracle_limit = "10000";
    std::string x = "10000";
    std::vector<std::string> props = {"oracle",    "phi_sigma", "multiplicativity", "sandwich",
                                      "inclusion", "markov",    "mertens"};
};

int cmd_verify(const VerifyCli& a) {
    uint64_t limit = parse_u64_sci(a.oracle_limit, "--oracle-limit");
    if (limit < 1 || limit > 1'000'000)
        throw config_error("--oracle-limit must be in [1, 1000000], got " + a.oracle_limit);
    uint64_t x = parse_u64_sci(a.x, "--x");
    if (x < 1 || x > 1'000'000)
        throw config_error("--x must be in [1, 1000000] for verify, got " + a.x);

    constexpr uint64_t kSeed = 0x7ab5c0de;
    struct Prop {
        const char* name;
        std::function<std::optional<std::string>()> run;
    };
    const std::vector<Prop> catalog = {
        {"oracle",
         [&]() -> std::optional<std::string> {
             if (auto e = check_sigma_oracle(limit)) return e;
             return check_phi_oracle(limit);
         }},
        {"phi_sigma", [&] { return check_phi_sigma_paths(limit); }},
        {"multiplicativity", [&] { return check_multiplicativity(limit, 4000, kSeed); }},
        {"sandwich", [&] { return check_sandwich(limit); }},
        {"inclusion", [&] { return check_inclusion_random(x, 12, kSeed); }},
        {"markov", [&] { return check_markov(x); }},
        {"mertens",
         [&] { return check_mertens(static_cast<double>(std::min<uint64_t>(limit, 10'000))); }},
    };

    for (const auto& want : a.props) {
        bool known = false;
        for (const auto& p : catalog) known = known || want == p.name;
        if (!known) throw config_error("unknown prop '" + want + "'");
    }

    int rc = 0;
    for (const auto& p : catalog) {
        bool selected = false;
        for (const auto& want : a.props) selected = selected || want == p.name;
        if (!selected) continue;
        auto err = p.run();
        if (err) {
            std::cout << "verify " << p.name << ": FAIL  " << *err << "\n";
            rc = 2;
        } else {
            std::cout << "verify " << p.name << ": ok\n";
        }
    }
    return rc;
}

fs::path resolve_cache_path(const std::string& file, const std::string& dir) {
    if (!file.empty()) return file;
    std::string d = !dir.empty() ? dir : env_or_empty("SIGMA_PHI_CACHE_DIR");
    if (d.empty()) d = ".";
    return fs::path(d) / "spf.splb";
}

int cmd_cache_build(const std::string& limit_str, const std::string& file,
                    const std::string& dir) {
    uint64_t limit = parse_u64_sci(limit_str, "--limit");
    fs::path path = resolve_cache_path(file, dir);
    SpfTable table = build_spf_table(limit);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_spf_cache(table, path);
    std::cout << "wrote " << path.string() << ": limit " << table.limit << ", "
              << (kSpfCacheHeaderBytes + 4 * (table.limit + 1)) << " bytes\n";
    return 0;
}

int cmd_cache_check(const std::string& file, const std::string& dir) {
    fs::path path = resolve_cache_path(file, dir);
    CacheCheckResult res = check_spf_cache(path);
    if (res.ok) {
        std::cout << path.string() << " " << res.message << "\n";
        return 0;
    }
    std::cerr << "cache corrupt: " << res.message << " (first mismatch at byte offset "
              << res.first_mismatch_offset << ")\n";
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Counting laboratory for the density of phi(sigma(n)) >= c n"};
    app.require_subcommand(1);
    // Config handling lives on the root app: subcommand-level set_config is
    // never processed by CLI11's parse pipeline. Files use INI sections named
    // after the subcommand ([scan], [verify]); command-line flags win.
    app.set_config("--config", "", "INI file with [scan] / [verify] sections");
    app.allow_config_extras(CLI::config_extras_mode::error);

    ScanCli s;
    auto* scan = app.add_subcommand("scan", "Segmented scan of n = 1..x with a full count report");
    scan->fallthrough(true);
    scan->add_option("--x", s.x, "Scan bound (integer; scientific notation ok)")
        ->capture_default_str();
    scan->add_option("--y", s.y, "Primorial cutoff y")->capture_default_str();
    scan->add_option("--c", s.c, "Threshold slope c (rational a/b or decimal)")
        ->capture_default_str();
    scan->add_option("--delta", s.delta, "Sigma-ratio cutoff, or 'auto' for c*ln(y)")
        ->capture_default_str();
    scan->add_option("--sp", s.sp, "Primes p for S_p(x) counts")
        ->delimiter(',')
        ->capture_default_str();
    scan->add_option("--f", s.f, "Threshold function: const, log, loglog")
        ->capture_default_str();
    scan->add_option("--workers", s.workers, "Worker threads")->capture_default_str();
    scan->add_option("--segment-size", s.segment, "Segment length per work unit")
        ->capture_default_str();
    scan->add_option("--cache-dir", s.cache_dir,
                     "Directory holding spf.splb (or env SIGMA_PHI_CACHE_DIR)");
    scan->add_option("--out", s.out_dir, "Output directory")->capture_default_str();
    scan->add_option("--format", s.format, "Report files to write: csv, text, all")
        ->check(CLI::IsMember({"csv", "text", "all"}))
        ->capture_default_str();

    VerifyCli v;
    auto* verify = app.add_subcommand("verify", "Run oracle and invariant suites at small scale");
    verify->fallthrough(true);
    verify->add_option("--oracle-limit", v.oracle_limit, "Exhaustive oracle range [1, 1e6]")
        ->capture_default_str();
    verify->add_option("--x", v.x, "Scan bound for the invariant suites")->capture_default_str();
    verify->add_option("--props", v.props,
                       "Comma list from: oracle, phi_sigma, multiplicativity, sandwich, "
                       "inclusion, markov, mertens")
        ->delimiter(',');

    auto* cache = app.add_subcommand("cache", "Smallest-prime-factor cache maintenance");
    cache->fallthrough(true);
    cache->require_subcommand(1);
    std::string cb_limit = "1000000", cb_file, cb_dir, cc_file, cc_dir;
    auto* cache_build = cache->add_subcommand("build", "Sieve and write an spf cache file");
    cache_build->fallthrough(true);
    cache_build->add_option("--limit", cb_limit, "Table limit")->capture_default_str();
    cache_build->add_option("--file", cb_file, "Explicit output path");
    cache_build->add_option("--cache-dir", cb_dir, "Directory for spf.splb");
    auto* cache_check = cache->add_subcommand("check", "Validate a cache file against recomputation");
    cache_check->fallthrough(true);
    cache_check->add_option("--file", cc_file, "Explicit cache path");
    cache_check->add_option("--cache-dir", cc_dir, "Directory holding spf.splb");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (scan->parsed()) return cmd_scan(s);
        if (verify->parsed()) return cmd_verify(v);
        if (cache_build->parsed()) return cmd_cache_build(cb_limit, cb_file, cb_dir);
        if (cache_check->parsed()) return cmd_cache_check(cc_file, cc_dir);
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const capacity_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::overflow_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::logic_error& e) {
        // Internal invariants: certification bounds, merge order, Mertens
        // strictness. These are never user errors.
        std::cerr << "INTERNAL ERROR: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
