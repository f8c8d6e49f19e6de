#pragma once

#include "sigmaphi/counting.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sigmaphi {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kCsvHeader = "# sigma-phi-lab csv v1";

// Everything about a run that is not part of the mathematical report;
// timestamps live here and never in the CSV, which must be byte-identical
// across reruns of the same configuration.
struct RunMeta {
    std::string started_at;  // ISO 8601 UTC
    std::string finished_at;
    std::string delta_source = "explicit"; // or "auto"
    uint64_t cache_hits = 0;
    std::vector<std::string> outputs;
};

std::string threshold_fn_name(ThresholdFn f);

// Deterministic formatting shared by every emitter: %.12Lg, no locale.
std::string format_real(long double v);

std::string iso8601_utc_now();

// Fixed column set: kind,x,y,c,delta,p,count,bound_shape,ratio,violations.
// Irrelevant cells stay empty. Value-valued rows (sigma_over_n, mertens)
// carry their value in the count column next to the reference quantity in
// bound_shape.
std::string scan_csv(const ScanConfig& cfg, const CountReport& rep);

std::string scan_text(const ScanConfig& cfg, const CountReport& rep);

std::string manifest_json(const ScanConfig& cfg, const RunMeta& meta);

} // namespace sigmaphi
