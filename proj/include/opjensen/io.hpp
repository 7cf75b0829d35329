#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "opjensen/jensen.hpp"

namespace opjensen {

using OrderedJson = nlohmann::ordered_json;

/// How the instance file describes its scalar function.
struct FunctionSpec {
  bool is_catalog = false;
  std::string expr;    // expression text
  std::string name;    // catalog name
  CatalogParams params;

  ScalarFunction build(int arity) const;

  /// CLI shorthand: a catalog name, "name:param", or an expression.
  static FunctionSpec from_cli(const std::string& text);
};

/// In-memory mirror of an instance file. Complex scalars are [re, im] pairs,
/// matrices are row-major nested arrays.
struct Instance {
  int dim = 0;
  int n = 0;
  std::vector<CubeDomain::Interval> cube;
  Matrix rho;
  std::vector<Matrix> partition;
  std::vector<double> field_weights;
  std::vector<Matrix> field_maps;
  std::vector<std::vector<Matrix>> tuple_field;  // [field atom][member]
  FunctionSpec f;
  std::optional<std::uint64_t> seed;
};

Instance instance_from_json_text(const std::string& text);
OrderedJson instance_to_json(const Instance& inst);
std::string instance_to_string(const Instance& inst);

/// Builds the validated domain objects; throws ValidationError on any
/// structural defect, naming the offending field.
JensenInstance assemble_instance(const Instance& inst, const TolerancePolicy& policy = {});

/// FNV-1a 64 over the canonical serialization.
std::string input_hash(const std::string& canonical_text);

OrderedJson report_to_json(const JensenReport& report, const std::string& hash,
                           std::optional<std::uint64_t> seed);
std::string report_to_string(const JensenReport& report, const std::string& hash,
                             std::optional<std::uint64_t> seed);

/// Serializes a search witness as a checkable instance: rho = I, partition
/// {P_xi, 1 - P_xi}, one-atom trivial field, the witness tuple.
Instance witness_to_instance(const SearchWitness& witness, const FunctionSpec& f,
                             const CubeDomain& dom, std::uint64_t seed);

}  // namespace opjensen
