#pragma once

#include <stdexcept>
#include <string>

namespace lrace {

// Configuration file / override problems. CLI maps these to exit code 2.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A model precondition does not hold for the given inputs (e.g. the
// transaction cost lies outside the reachable value range). Exit code 3.
struct precondition_error : std::range_error {
    explicit precondition_error(const std::string& msg) : std::range_error(msg) {}
};

// An iteration budget was exhausted before the computation finished. Exit code 4.
struct budget_error : std::runtime_error {
    explicit budget_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace lrace
