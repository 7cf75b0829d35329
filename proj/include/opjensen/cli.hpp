#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "opjensen/io.hpp"
#include "opjensen/selftest.hpp"

namespace opjensen {

struct CheckOverrides {
  std::optional<double> atol;
  std::optional<double> rtol;
};

struct GenParams {
  std::uint64_t seed = 1;
  int dim = 4;
  int n = 2;
  int atoms = 2;       // partition size
  int field_size = 2;  // field atom count
  std::string function = "p_norm:2";
};

/// cmd_gen's core: a deterministic instance for the given parameters.
/// Supported ranges: dim <= 64, n <= 4, field_size <= 64, atoms <= dim.
Instance generate_instance(const GenParams& params);

/// cmd_check's core: validate, run the conditional check, render the report.
std::string check_report_string(const Instance& inst, const CheckOverrides& overrides,
                                ExecMode mode = ExecMode::parallel);

/// "lo,hi" or "lo,hi;lo,hi;..."; a single interval broadcasts to arity n.
std::vector<CubeDomain::Interval> parse_cube_arg(const std::string& text, int n);

struct SearchParams {
  std::string function;
  std::string cube = "-2,2";
  std::optional<int> n;  // default: cube segment count
  std::vector<int> dims{2};
  std::int64_t trials = 1000;
  std::uint64_t seed = 1;
  CheckOverrides overrides;
};

// exit codes: 0 pass/found, 1 inequality violated, 2 invalid input,
// 3 search exhausted
int cmd_check(const std::string& path, const CheckOverrides& overrides,
              const std::optional<std::string>& out_path, std::ostream& out, std::ostream& err);
int cmd_gen(const GenParams& params, const std::optional<std::string>& out_path,
            std::ostream& out, std::ostream& err);
int cmd_search(const SearchParams& params, const std::optional<std::string>& out_path,
               std::ostream& out, std::ostream& err);
int cmd_selftest(const SelftestConfig& config, std::ostream& out, std::ostream& err);
int cmd_calc(const std::string& path, std::ostream& out, std::ostream& err);

}  // namespace opjensen
