#include "sigmaphi/cache_file.hpp"

#include "sigmaphi/errors.hpp"
#include "sigmaphi/primes.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>

namespace sigmaphi {

namespace {

constexpr char kMagic[4] = {'S', 'P', 'L', 'B'};
constexpr uint64_t kSampleSeed = 0x5eedb00c5eedb00cull;

void put_u32(std::ostream& os, uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& os, uint64_t v) {
    put_u32(os, static_cast<uint32_t>(v));
    put_u32(os, static_cast<uint32_t>(v >> 32));
}

uint32_t get_u32(const unsigned char* b) {
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

uint64_t get_u64(const unsigned char* b) {
    return static_cast<uint64_t>(get_u32(b)) | (static_cast<uint64_t>(get_u32(b + 4)) << 32);
}

uint64_t splitmix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Independent smallest-prime-factor recomputation for spot checks.
uint32_t spf_by_trial_division(uint64_t n) {
    if (n % 2 == 0) return 2;
    if (n % 3 == 0) return 3;
    for (uint64_t d = 5; d * d <= n; d += 6) {
        if (n % d == 0) return static_cast<uint32_t>(d);
        if (n % (d + 2) == 0) return static_cast<uint32_t>(d + 2);
    }
    return static_cast<uint32_t>(n); // prime
}

struct RawCache {
    uint64_t limit = 0;
    std::vector<uint32_t> entries;
};

// Reads and byte-order-fixes the entry block; header must already be
// validated against the actual file size.
RawCache read_entries(std::ifstream& in, uint64_t limit) {
    RawCache raw;
    raw.limit = limit;
    raw.entries.resize(limit + 1);
    in.seekg(static_cast<std::streamoff>(kSpfCacheHeaderBytes));
    in.read(reinterpret_cast<char*>(raw.entries.data()),
            static_cast<std::streamsize>(raw.entries.size() * sizeof(uint32_t)));
    if (!in) throw config_error("spf cache: short read");
    if constexpr (std::endian::native == std::endian::big) {
        for (auto& v : raw.entries) v = __builtin_bswap32(v);
    }
    return raw;
}

} // namespace

void write_spf_cache(const SpfTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw config_error("spf cache: cannot write " + path.string());
    out.write(kMagic, 4);
    put_u32(out, kSpfCacheVersion);
    put_u64(out, table.limit);
    if constexpr (std::endian::native == std::endian::little) {
        out.write(reinterpret_cast<const char*>(table.spf.data()),
                  static_cast<std::streamsize>(table.spf.size() * sizeof(uint32_t)));
    } else {
        for (uint32_t v : table.spf) put_u32(out, v);
    }
    out.flush();
    if (!out) throw config_error("spf cache: write failed for " + path.string());
}

SpfTable load_spf_cache(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("spf cache: cannot open " + path.string());
    unsigned char header[kSpfCacheHeaderBytes];
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (!in) throw config_error("spf cache: file too short for header: " + path.string());
    if (std::memcmp(header, kMagic, 4) != 0)
        throw config_error("spf cache: bad magic in " + path.string());
    uint32_t version = get_u32(header + 4);
    if (version != kSpfCacheVersion)
        throw config_error("spf cache: version " + std::to_string(version) + " unsupported");
    uint64_t limit = get_u64(header + 8);
    uint64_t expected = kSpfCacheHeaderBytes + (limit + 1) * sizeof(uint32_t);
    uint64_t actual = std::filesystem::file_size(path);
    if (actual != expected)
        throw config_error("spf cache: size mismatch (" + std::to_string(actual) + " bytes, " +
                           "expected " + std::to_string(expected) + ")");
    auto raw = read_entries(in, limit);
    SpfTable t;
    t.limit = raw.limit;
    t.spf = std::move(raw.entries);
    if (t.limit < 2 || t.spf[0] != 0 || t.spf[1] != 0)
        throw config_error("spf cache: malformed table in " + path.string());
    return t;
}

CacheCheckResult check_spf_cache(const std::filesystem::path& path) {
    CacheCheckResult res;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("spf cache: cannot open " + path.string());

    uint64_t actual = std::filesystem::file_size(path);
    unsigned char header[kSpfCacheHeaderBytes];
    if (actual < sizeof(header)) {
        res.first_mismatch_offset = actual;
        res.message = "file truncated inside header: " + std::to_string(actual) + " bytes";
        return res;
    }
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (std::memcmp(header, kMagic, 4) != 0) {
        res.first_mismatch_offset = 0;
        res.message = "bad magic";
        return res;
    }
    if (uint32_t version = get_u32(header + 4); version != kSpfCacheVersion) {
        res.first_mismatch_offset = 4;
        res.message = "unsupported version " + std::to_string(version);
        return res;
    }
    uint64_t limit = get_u64(header + 8);
    uint64_t expected = kSpfCacheHeaderBytes + (limit + 1) * sizeof(uint32_t);
    if (actual != expected) {
        res.first_mismatch_offset = std::min(actual, expected);
        res.message = "size mismatch: " + std::to_string(actual) + " bytes, expected " +
                      std::to_string(expected);
        return res;
    }
    if (limit < 2) {
        res.first_mismatch_offset = 8;
        res.message = "limit " + std::to_string(limit) + " below minimum 2";
        return res;
    }

    auto raw = read_entries(in, limit);
    auto entry_offset = [](uint64_t n) { return kSpfCacheHeaderBytes + 4 * n; };
    if (raw.entries[0] != 0 || raw.entries[1] != 0) {
        uint64_t n = raw.entries[0] != 0 ? 0 : 1;
        res.first_mismatch_offset = entry_offset(n);
        res.message = "spf[" + std::to_string(n) + "] must be 0";
        return res;
    }

    // Deterministic 1% sample (at least 64 entries), recomputed independently.
    uint64_t population = limit - 1; // indices 2..limit
    uint64_t samples = std::max<uint64_t>(64, population / 100);
    samples = std::min(samples, population);
    for (uint64_t i = 0; i < samples; ++i) {
        uint64_t n = 2 + splitmix64(kSampleSeed + i) % population;
        uint32_t expect = spf_by_trial_division(n);
        if (raw.entries[n] != expect) {
            res.first_mismatch_offset = entry_offset(n);
            res.message = "spf[" + std::to_string(n) + "] = " + std::to_string(raw.entries[n]) +
                          ", recomputed " + std::to_string(expect) + " (byte offset " +
                          std::to_string(entry_offset(n)) + ")";
            return res;
        }
    }

    res.ok = true;
    res.message = "ok: limit " + std::to_string(limit) + ", " + std::to_string(samples) +
                  " entries sampled";
    return res;
}

} // namespace sigmaphi
