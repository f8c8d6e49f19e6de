#pragma once

#include "sigmaphi/spf_table.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace sigmaphi {

// On-disk smallest-prime-factor table, little endian throughout:
//   bytes 0..3   magic "SPLB"
//   bytes 4..7   format version (uint32, currently 1)
//   bytes 8..15  table limit (uint64)
//   bytes 16..   (limit + 1) uint32 entries, spf[0] onward
inline constexpr uint32_t kSpfCacheVersion = 1;
inline constexpr uint64_t kSpfCacheHeaderBytes = 16;

void write_spf_cache(const SpfTable& table, const std::filesystem::path& path);

// Throws config_error on missing file, bad magic, version or size mismatch.
SpfTable load_spf_cache(const std::filesystem::path& path);

struct CacheCheckResult {
    bool ok = false;
    uint64_t first_mismatch_offset = 0; // byte offset into the file, valid when !ok
    std::string message;
};

// Structural validation plus recomputing a deterministic 1% sample of entries
// by trial division. Never throws for content problems; those come back as
// ok == false with the offending byte offset.
CacheCheckResult check_spf_cache(const std::filesystem::path& path);

} // namespace sigmaphi
