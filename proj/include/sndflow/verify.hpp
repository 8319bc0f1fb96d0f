#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sndflow {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Names accepted by run_suite.
const std::vector<std::string>& suite_names();

/// Runs one property suite. Throws std::invalid_argument for an unknown name.
std::vector<CheckResult> run_suite(const std::string& suite, std::uint64_t seed);

}  // namespace sndflow
