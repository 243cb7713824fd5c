#pragma once

#include <string>
#include <vector>

namespace beliefsim {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string details;
};

// Registered verification suites (one per acceptance criterion).
std::vector<std::string> verify_suite_names();

// Runs one suite; throws std::invalid_argument on an unknown name.
CheckResult run_verify_suite(const std::string& name);

}  // namespace beliefsim
