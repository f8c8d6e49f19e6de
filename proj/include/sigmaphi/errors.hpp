#pragma once

#include <stdexcept>
#include <string>

namespace sigmaphi {

// A requested table or scan would exceed a hard resource limit.
class capacity_error : public std::runtime_error {
public:
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// Inconsistent or out-of-contract configuration (flag values, side conditions).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sigmaphi
