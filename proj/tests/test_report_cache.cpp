#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sigmaphi/cache_file.hpp"
#include "sigmaphi/counting.hpp"
#include "sigmaphi/errors.hpp"
#include "sigmaphi/primes.hpp"
#include "sigmaphi/report.hpp"
#include "sigmaphi/spf_table.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace sigmaphi;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / ("sigma_phi_test_" + name);
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

void corrupt_byte(const fs::path& p, uint64_t offset) {
    std::fstream f(p, std::ios::in | std::ios::out | std::ios::binary);
    REQUIRE(f.good());
    f.seekg(static_cast<std::streamoff>(offset));
    char b = 0;
    f.read(&b, 1);
    b = static_cast<char>(b ^ 0x5a);
    f.seekp(static_cast<std::streamoff>(offset));
    f.write(&b, 1);
}

} // namespace

TEST_CASE("format_real is stable and compact") {
    CHECK(format_real(0.5L) == "0.5");
    CHECK(format_real(1644.93406685L).substr(0, 10) == "1644.93406");
    CHECK(format_real(1.0L) == "1");
    CHECK(format_real(0.1L) == format_real(0.1L));
}

TEST_CASE("scan_csv structure") {
    ScanConfig cfg;
    cfg.x = 1000;
    cfg.y = 3.0;
    cfg.c = Rational{1, 1};
    cfg.delta = Rational{274653, 250000};
    cfg.p_list = {3, 5};
    CountReport rep = run_scan(cfg);
    std::string csv = scan_csv(cfg, rep);

    auto ls = lines_of(csv);
    REQUIRE(ls.size() == 10);
    CHECK(ls[0] == "# sigma-phi-lab csv v1");
    CHECK(ls[1] == "kind,x,y,c,delta,p,count,bound_shape,ratio,violations");
    // One row per enabled part, in a fixed order: sp rows ascending by p.
    CHECK(ls[2].substr(0, 3) == "sp,");
    CHECK(ls[2].find(",3,") != std::string::npos);
    CHECK(ls[3].substr(0, 3) == "sp,");
    CHECK(ls[4].substr(0, 10) == "primorial,");
    CHECK(ls[5].substr(0, 10) == "threshold,");
    CHECK(ls[6].substr(0, 12) == "sigma_ratio,");
    CHECK(ls[7].substr(0, 13) == "sigma_over_n,");
    CHECK(ls[8].substr(0, 8) == "mertens,");
    CHECK(ls[9].substr(0, 10) == "inclusion,");
    // Every data row has exactly 9 commas.
    for (size_t i = 2; i < ls.size(); ++i)
        CHECK(std::count(ls[i].begin(), ls[i].end(), ',') == 9);
    // No timestamps anywhere.
    CHECK(csv.find("T") == std::string::npos);

    // Rerunning the same config gives byte-identical CSV.
    CountReport rep2 = run_scan(cfg);
    CHECK(scan_csv(cfg, rep2) == csv);
}

TEST_CASE("scan_csv encodes threshold kinds") {
    ScanConfig cfg;
    cfg.x = 2000;
    cfg.f_choice = ThresholdFn::Log;
    CountReport rep = run_scan(cfg);
    std::string csv = scan_csv(cfg, rep);
    CHECK(csv.find("threshold_log,") != std::string::npos);

    cfg.f_choice = ThresholdFn::LogLog;
    rep = run_scan(cfg);
    CHECK(scan_csv(cfg, rep).find("threshold_loglog,") != std::string::npos);
}

TEST_CASE("scan_text mentions each reported quantity") {
    ScanConfig cfg;
    cfg.x = 1000;
    cfg.p_list = {3};
    CountReport rep = run_scan(cfg);
    std::string text = scan_text(cfg, rep);
    CHECK(text.find("S_3(x)") != std::string::npos);
    CHECK(text.find("sum sigma(n)/n") != std::string::npos);
    CHECK(text.find("inclusion violations") != std::string::npos);
    CHECK(text.find("none") != std::string::npos);
}

TEST_CASE("manifest carries config, timestamps, outputs") {
    ScanConfig cfg;
    cfg.x = 12345;
    cfg.c = Rational{9, 5};
    cfg.delta = Rational{274653, 250000};
    cfg.p_list = {3, 7};
    RunMeta meta;
    meta.started_at = "2026-01-01T00:00:00Z";
    meta.finished_at = "2026-01-01T00:00:01Z";
    meta.delta_source = "auto";
    meta.cache_hits = 1;
    meta.outputs = {"/tmp/report.csv", "/tmp/manifest.json"};

    auto j = nlohmann::json::parse(manifest_json(cfg, meta));
    CHECK(j["tool"] == "sigma-phi-lab");
    CHECK(j["tool_version"] == "1.0.0");
    CHECK(j["started_at"] == "2026-01-01T00:00:00Z");
    CHECK(j["config"]["x"] == 12345);
    CHECK(j["config"]["c"] == "9/5");
    CHECK(j["config"]["delta"] == "274653/250000");
    CHECK(j["config"]["delta_source"] == "auto");
    CHECK(j["config"]["f"] == "const");
    CHECK(j["config"]["p_list"].size() == 2);
    CHECK(j["cache_hits"] == 1);
    CHECK(j["outputs"].size() == 2);
}

TEST_CASE("iso8601_utc_now shape") {
    std::string t = iso8601_utc_now();
    REQUIRE(t.size() == 20);
    CHECK(t[4] == '-');
    CHECK(t[10] == 'T');
    CHECK(t[19] == 'Z');
}

TEST_CASE("spf cache round-trips") {
    fs::path p = temp_file("roundtrip.splb");
    SpfTable t = build_spf_table(100000);
    write_spf_cache(t, p);
    CHECK(fs::file_size(p) == 16 + 4 * (100000 + 1));

    SpfTable back = load_spf_cache(p);
    CHECK(back.limit == t.limit);
    CHECK(back.spf == t.spf);

    CacheCheckResult res = check_spf_cache(p);
    CHECK(res.ok);
    CHECK(res.message.find("sample") != std::string::npos);
    fs::remove(p);
}

TEST_CASE("cache loader rejects structural damage") {
    fs::path p = temp_file("damage.splb");
    SpfTable t = build_spf_table(50000);

    write_spf_cache(t, p);
    corrupt_byte(p, 0); // magic
    CHECK_THROWS_AS(load_spf_cache(p), config_error);
    CacheCheckResult res = check_spf_cache(p);
    CHECK(!res.ok);
    CHECK(res.first_mismatch_offset == 0);

    write_spf_cache(t, p);
    corrupt_byte(p, 4); // version
    CHECK_THROWS_AS(load_spf_cache(p), config_error);
    res = check_spf_cache(p);
    CHECK(!res.ok);
    CHECK(res.first_mismatch_offset == 4);

    // Truncation: drop the last 5 bytes.
    write_spf_cache(t, p);
    fs::resize_file(p, fs::file_size(p) - 5);
    CHECK_THROWS_AS(load_spf_cache(p), config_error);
    res = check_spf_cache(p);
    CHECK(!res.ok);
    CHECK(res.first_mismatch_offset == fs::file_size(p));
    CHECK(res.message.find("size") != std::string::npos);

    CHECK_THROWS_AS(load_spf_cache(temp_file("does_not_exist.splb")), config_error);
    fs::remove(p);
}

TEST_CASE("cache check pinpoints corrupted entries") {
    fs::path p = temp_file("entries.splb");
    SpfTable t = build_spf_table(50000);

    // spf[0] and spf[1] are structural (always zero) and checked first.
    write_spf_cache(t, p);
    corrupt_byte(p, 16);
    CacheCheckResult res = check_spf_cache(p);
    CHECK(!res.ok);
    CHECK(res.first_mismatch_offset == 16);

    // Damage every entry from n = 2 on; whatever the sample hits first, the
    // reported offset must point at a real entry boundary with a wrong value.
    write_spf_cache(t, p);
    {
        std::fstream f(p, std::ios::in | std::ios::out | std::ios::binary);
        std::vector<char> junk(4 * (50000 + 1 - 2), 0x01);
        f.seekp(16 + 4 * 2);
        f.write(junk.data(), static_cast<std::streamsize>(junk.size()));
    }
    res = check_spf_cache(p);
    CHECK(!res.ok);
    CHECK(res.first_mismatch_offset >= 16 + 4 * 2);
    CHECK((res.first_mismatch_offset - 16) % 4 == 0);
    CHECK(res.message.find("spf[") != std::string::npos);
    fs::remove(p);
}

TEST_CASE("loaded cache equals freshly sieved primes") {
    fs::path p = temp_file("primes.splb");
    SpfTable t = build_spf_table(30000);
    write_spf_cache(t, p);
    SpfTable back = load_spf_cache(p);
    CHECK(back.primes() == sieve_primes(30000));
    fs::remove(p);
}
