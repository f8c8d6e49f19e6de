#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct CmdResult {
    int status = -1;
    std::string out; // stdout and stderr interleaved
};

CmdResult run_cmd(const std::string& cmd) {
    CmdResult r;
    FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
    int rc = pclose(pipe);
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

std::string bin() { return std::string("\"") + SIGMA_PHI_BIN + "\""; }

fs::path make_temp_dir() {
    std::string tmpl = (fs::temp_directory_path() / "sigma_phi_cli_XXXXXX").string();
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    REQUIRE(mkdtemp(buf.data()) != nullptr);
    return fs::path(buf.data());
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
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

TEST_CASE("scan writes report files and a manifest") {
    fs::path dir = make_temp_dir();
    auto r = run_cmd(bin() + " scan --x 1000 --sp 3 --out " + dir.string());
    CHECK(r.status == 0);
    CHECK(r.out.find("S_3(x) = 264") != std::string::npos);
    CHECK(r.out.find("wrote ") != std::string::npos);
    CHECK(fs::exists(dir / "report.csv"));
    CHECK(fs::exists(dir / "report.txt"));
    CHECK(fs::exists(dir / "manifest.json"));

    std::string csv = slurp(dir / "report.csv");
    CHECK(csv.rfind("# sigma-phi-lab csv v1\n", 0) == 0);

    auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(j["tool"] == "sigma-phi-lab");
    CHECK(j["config"]["x"] == 1000);
    CHECK(j["config"]["delta_source"] == "auto");
    CHECK(j["cache_hits"] == 0);
    CHECK(j["outputs"].size() == 3);
    fs::remove_all(dir);
}

TEST_CASE("scan --format csv suppresses the text report") {
    fs::path dir = make_temp_dir();
    auto r = run_cmd(bin() + " scan --x 1000 --format csv --out " + dir.string());
    CHECK(r.status == 0);
    CHECK(fs::exists(dir / "report.csv"));
    CHECK(!fs::exists(dir / "report.txt"));
    CHECK(fs::exists(dir / "manifest.json"));
    fs::remove_all(dir);
}

TEST_CASE("csv identical across worker counts") {
    std::vector<std::string> csvs;
    for (unsigned w : {1u, 2u, 8u}) {
        fs::path dir = make_temp_dir();
        auto r = run_cmd(bin() + " scan --x 1e5 --workers " + std::to_string(w) +
                         " --segment-size 8192 --out " + dir.string());
        REQUIRE(r.status == 0);
        csvs.push_back(slurp(dir / "report.csv"));
        fs::remove_all(dir);
    }
    CHECK(csvs[0] == csvs[1]);
    CHECK(csvs[0] == csvs[2]);
}

TEST_CASE("scan rejects bad configuration with exit 1") {
    fs::path dir = make_temp_dir();
    std::string out = " --out " + dir.string();

    // delta > c * ln(y) breaks the inclusion hypothesis
    auto r = run_cmd(bin() + " scan --x 1000 --y 3 --c 1 --delta 2" + out);
    CHECK(r.status == 1);
    CHECK(r.out.find("error:") != std::string::npos);
    CHECK(r.out.find("delta <= c * ln(y)") != std::string::npos);

    r = run_cmd(bin() + " scan --x 0" + out);
    CHECK(r.status == 1);

    r = run_cmd(bin() + " scan --x 2e11" + out);
    CHECK(r.status == 1);

    r = run_cmd(bin() + " scan --x 1.5" + out);
    CHECK(r.status == 1);
    CHECK(r.out.find("integer") != std::string::npos);

    r = run_cmd(bin() + " scan --x 1000 --f log5" + out);
    CHECK(r.status == 1);

    r = run_cmd(bin() + " scan --x 1000 --format yaml" + out);
    CHECK(r.status == 1);

    r = run_cmd(bin() + " scan --bogus-flag 7" + out);
    CHECK(r.status == 1);

    r = run_cmd(bin());
    CHECK(r.status == 1);
    fs::remove_all(dir);
}

TEST_CASE("verify subcommand") {
    auto r = run_cmd(bin() + " verify --oracle-limit 2000 --x 2000");
    CHECK(r.status == 0);
    for (const char* prop : {"oracle", "phi_sigma", "multiplicativity", "sandwich", "inclusion",
                             "markov", "mertens"})
        CHECK(r.out.find(std::string("verify ") + prop + ": ok") != std::string::npos);

    r = run_cmd(bin() + " verify --oracle-limit 2000 --x 2000 --props oracle,sandwich");
    CHECK(r.status == 0);
    CHECK(r.out.find("verify oracle: ok") != std::string::npos);
    CHECK(r.out.find("verify sandwich: ok") != std::string::npos);
    CHECK(r.out.find("markov") == std::string::npos);

    r = run_cmd(bin() + " verify --oracle-limit 0");
    CHECK(r.status == 1);

    r = run_cmd(bin() + " verify --props no_such_prop");
    CHECK(r.status == 1);
    CHECK(r.out.find("unknown prop") != std::string::npos);
}

TEST_CASE("cache build, check, corruption, and reuse") {
    fs::path dir = make_temp_dir();
    fs::path cache = dir / "spf.splb";

    auto r = run_cmd(bin() + " cache build --limit 50000 --file " + cache.string());
    CHECK(r.status == 0);
    CHECK(r.out.find("wrote ") != std::string::npos);
    CHECK(fs::file_size(cache) == 16 + 4 * (50000 + 1));

    r = run_cmd(bin() + " cache check --file " + cache.string());
    CHECK(r.status == 0);
    CHECK(r.out.find("ok:") != std::string::npos);

    // A scan pointed at the cache records the hit in its manifest.
    fs::path outdir = dir / "scan_out";
    r = run_cmd(bin() + " scan --x 1000 --cache-dir " + dir.string() + " --out " +
                outdir.string());
    CHECK(r.status == 0);
    auto j = nlohmann::json::parse(slurp(outdir / "manifest.json"));
    CHECK(j["cache_hits"] == 1);

    // Same via the environment variable.
    fs::path outdir2 = dir / "scan_out_env";
    r = run_cmd("SIGMA_PHI_CACHE_DIR=" + dir.string() + " " + bin() + " scan --x 1000 --out " +
                outdir2.string());
    CHECK(r.status == 0);
    j = nlohmann::json::parse(slurp(outdir2 / "manifest.json"));
    CHECK(j["cache_hits"] == 1);

    // Corrupt a payload byte the checker always examines (spf[0] must be 0):
    // check exits 2 and names the byte offset.
    corrupt_byte(cache, 16);
    r = run_cmd(bin() + " cache check --file " + cache.string());
    CHECK(r.status == 2);
    CHECK(r.out.find("cache corrupt") != std::string::npos);
    CHECK(r.out.find("byte offset") != std::string::npos);

    // Structural damage makes the cache unloadable; a scan falls back to a
    // fresh sieve and says so.
    corrupt_byte(cache, 0);
    fs::path outdir3 = dir / "scan_out_bad";
    r = run_cmd(bin() + " scan --x 1000 --cache-dir " + dir.string() + " --out " +
                outdir3.string());
    CHECK(r.status == 0);
    CHECK(r.out.find("ignoring unusable cache") != std::string::npos);
    j = nlohmann::json::parse(slurp(outdir3 / "manifest.json"));
    CHECK(j["cache_hits"] == 0);

    r = run_cmd(bin() + " cache check --file " + (dir / "missing.splb").string());
    CHECK(r.status == 1);
    fs::remove_all(dir);
}

TEST_CASE("config file values load and flags override them") {
    fs::path dir = make_temp_dir();
    fs::path cfg = dir / "scan.conf";
    {
        std::ofstream out(cfg);
        out << "[scan]\n";
        out << "x=5000\n";
        out << "c=2\n";
        out << "sp=3\n";
    }
    fs::path outdir = dir / "out";
    auto r = run_cmd(bin() + " scan --config " + cfg.string() + " --x 3000 --out " +
                     outdir.string());
    CHECK(r.status == 0);
    auto j = nlohmann::json::parse(slurp(outdir / "manifest.json"));
    CHECK(j["config"]["x"] == 3000);       // flag beats config file
    CHECK(j["config"]["c"] == "2");        // config file beats default
    CHECK(j["config"]["p_list"].size() == 1);

    // Unknown keys are an error, and so is a missing file.
    {
        std::ofstream out(cfg, std::ios::app);
        out << "xx=7\n";
    }
    r = run_cmd(bin() + " scan --config " + cfg.string() + " --out " + outdir.string());
    CHECK(r.status == 1);
    r = run_cmd(bin() + " scan --config " + (dir / "missing.conf").string());
    CHECK(r.status == 1);
    fs::remove_all(dir);
}
