#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "opjensen/parallel.hpp"

namespace opjensen {

struct SelftestConfig {
  std::uint64_t seed = 7;
  double scale = 1.0;  // multiplies every suite's trial count
  ExecMode mode = ExecMode::parallel;
};

struct SuiteResult {
  std::string name;
  long trials = 0;
  double max_dev = 0.0;
  double bound = 0.0;
  bool pass = true;
  std::string detail;  // failing trial/seed or a short note
};

const std::vector<std::string>& suite_names();

/// Runs one named invariant suite.
SuiteResult run_suite(const std::string& name, const SelftestConfig& config);

/// Runs every suite in registry order.
std::vector<SuiteResult> run_selftest(const SelftestConfig& config);

}  // namespace opjensen
