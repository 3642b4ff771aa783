// Acceptance suites shared by the acceptance binary and `divisikit sweep`.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace suites {

struct Outcome {
    int id = 0;
    std::string name;
    bool correct = false;     // every instance matched its oracle
    double seconds = 0;
    double limit_seconds = 0;
    std::string detail;
    bool pass() const { return correct && seconds < limit_seconds; }
};

struct SuiteConfig {
    std::uint64_t seed = 20240611;
};

constexpr int kCount = 10;

std::string suite_name(int id);
Outcome run_suite(int id, const SuiteConfig& cfg = {});

} // namespace suites
