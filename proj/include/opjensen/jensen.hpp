#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "opjensen/convexfn.hpp"
#include "opjensen/expectation.hpp"
#include "opjensen/fields.hpp"
#include "opjensen/parallel.hpp"
#include "opjensen/types.hpp"

namespace opjensen {

/// Everything a conditional Jensen check needs, cross-validated.
class JensenInstance {
 public:
  static JensenInstance validate(SubalgebraContext ctx, DiscreteField field, TupleField tuples,
                                 ScalarFunction f);

  const SubalgebraContext& ctx() const { return ctx_; }
  const DiscreteField& field() const { return field_; }
  const TupleField& tuples() const { return tuples_; }
  const ScalarFunction& f() const { return f_; }
  const CubeDomain& dom() const { return tuples_.domain(); }

 private:
  JensenInstance(SubalgebraContext ctx, DiscreteField field, TupleField tuples, ScalarFunction f)
      : ctx_(std::move(ctx)), field_(std::move(field)), tuples_(std::move(tuples)),
        f_(std::move(f)) {}
  SubalgebraContext ctx_;
  DiscreteField field_;
  TupleField tuples_;
  ScalarFunction f_;
};

struct CheckOptions {
  TolerancePolicy policy{};
  std::int64_t probe_samples = 10000;
  std::uint64_t probe_seed = 0;
  bool with_probe = true;  // suites skip the probe and use the catalog shelf
  ExecMode mode = ExecMode::parallel;
};

struct AtomCheck {
  int s = 0;
  double mu = 1.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  /// The probability weights the check induces on the joint eigenvalue
  /// tuples of the field, ordered by (field atom, eigenvalue index).
  std::vector<double> point_masses;
};

struct JensenReport {
  std::vector<AtomCheck> atoms;  // supported atoms only
  bool pass = true;
  double min_margin = 0.0;
  ConvexityVerdict convexity;
  TolerancePolicy tolerances;
  /// check_direct_sum: worst disagreement between the direct sum formula and
  /// the embedded single-tuple route.
  double route_deviation = 0.0;
};

/// Margin acceptance: margin >= -(atol + rtol * max(1, |rhs|)).
bool margin_acceptable(double margin, double rhs, const TolerancePolicy& policy);

/// f(Phi(y_1), ..., Phi(y_n)) <= Phi(sum_t nu_t a_t* f(x_t) a_t) per supported atom.
JensenReport check_conditional(const JensenInstance& inst, const CheckOptions& opts = {});

/// f((y_1 xi|xi), ..., (y_n xi|xi)) <= (sum_t nu_t a_t* f(x_t) a_t xi | xi).
JensenReport check_expectation_values(const DiscreteField& field, const TupleField& tuples,
                                      const ScalarFunction& f, const CubeDomain& dom,
                                      const StateVector& xi, const CheckOptions& opts = {});

/// f((x_1 xi|xi), ..., (x_n xi|xi)) <= (f(x) xi | xi).
JensenReport check_mond_pecaric(const AbelianTuple& tuple, const StateVector& xi,
                                const ScalarFunction& f, const CubeDomain& dom,
                                const CheckOptions& opts = {});

/// f(sum_j (x_1j xi_j|xi_j), ...) <= sum_j (f(x_j) xi_j | xi_j), computed both
/// directly and through direct_sum_embed; the report records the worst
/// disagreement between the two routes.
JensenReport check_direct_sum(const std::vector<AbelianTuple>& tuples,
                              const std::vector<Vector>& vectors, const ScalarFunction& f,
                              const CubeDomain& dom, const CheckOptions& opts = {});

struct SearchConfig {
  std::vector<int> dims{2};
  std::int64_t trials = 1000;
  std::uint64_t seed = 1;
  TolerancePolicy policy{};
  ExecMode mode = ExecMode::parallel;
};

struct SearchWitness {
  AbelianTuple tuple;
  StateVector xi;
  JensenReport report;
  std::int64_t trial = 0;
};

/// Randomized falsification over single-tuple instances (random commuting
/// tuples from a shared eigenbasis, random unit vectors). Returns the witness
/// with the smallest trial index, independent of thread count.
std::optional<SearchWitness> search_counterexample(const ScalarFunction& f, const CubeDomain& dom,
                                                   const SearchConfig& config);

}  // namespace opjensen
