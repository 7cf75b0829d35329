#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "opjensen/cube.hpp"
#include "opjensen/parallel.hpp"
#include "opjensen/types.hpp"

namespace opjensen {

namespace expr {
struct Node;
using NodePtr = std::shared_ptr<const Node>;
}  // namespace expr

enum class CatalogShelf { convex, non_convex };

/// Parameters for catalog entries; unused fields are ignored.
struct CatalogParams {
  RealMatrix quadratic;  // Q of quadratic_form (defaults to identity)
  RealVector linear;     // b of quadratic_form (defaults to zero)
  double constant = 0.0;  // c of quadratic_form
  double p = 2.0;         // p_norm / power_abs exponent
  int index = 1;          // 1-based coordinate for *_coord entries
};

/// A real function of n variables: either an expression in the mini-language
///   expr := term (('+'|'-') term)*
///   term := factor (('*'|'/') factor)*
///   factor := base ('^' INT)?
///   base := NUMBER | VAR | FUNC '(' expr (',' expr)* ')' | '(' expr ')' | '-' base
///   VAR := 'x' INT (1-based), FUNC in {exp, log, abs, sqrt, max, min}
/// or a named catalog entry with a documented convexity shelf.
class ScalarFunction {
 public:
  static ScalarFunction parse(std::string_view text, int arity);
  static ScalarFunction catalog(const std::string& name, const CatalogParams& params, int arity);
  static bool is_catalog_name(const std::string& name);
  static const std::vector<std::string>& catalog_names();
  /// Smallest arity an expression is valid for (1 when it uses no variable).
  static int infer_arity(std::string_view text);

  int arity() const { return arity_; }
  double eval(std::span<const double> point) const;

  /// For expressions: text that re-parses to an equivalent tree.
  /// For catalog entries: a descriptive label.
  std::string to_string() const;

  bool is_catalog() const { return !catalog_name_.empty(); }
  const std::string& catalog_name() const { return catalog_name_; }
  const CatalogParams& catalog_params() const { return params_; }
  std::optional<CatalogShelf> documented_shelf() const { return shelf_; }

 private:
  ScalarFunction() = default;

  int arity_ = 0;
  expr::NodePtr root_;            // expression form
  std::string catalog_name_;      // catalog form
  CatalogParams params_;
  std::optional<CatalogShelf> shelf_;
};

enum class ConvexityStatus { probably_convex, not_convex, indeterminate };

struct ConvexityWitness {
  std::vector<double> a;
  std::vector<double> b;
  double midpoint_gap = 0.0;  // f(mid) - (f(a)+f(b))/2
};

struct ConvexityVerdict {
  ConvexityStatus status = ConvexityStatus::indeterminate;
  std::optional<ConvexityWitness> witness;  // set when not_convex
  std::string diagnostic;                   // set when indeterminate
};

/// Samples pairs (a, b) uniformly in the cube and flags the first pair (by
/// sample index, independent of thread count) whose midpoint value exceeds
/// the chord average by more than the probe slack.
ConvexityVerdict midpoint_convexity_probe(const ScalarFunction& f, const CubeDomain& dom,
                                          std::int64_t samples, std::uint64_t seed,
                                          ExecMode mode = ExecMode::parallel);

const char* to_string(ConvexityStatus status);

}  // namespace opjensen
