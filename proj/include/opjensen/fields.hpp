#pragma once

#include <utility>
#include <vector>

#include "opjensen/convexfn.hpp"
#include "opjensen/jointspec.hpp"
#include "opjensen/linalg.hpp"
#include "opjensen/parallel.hpp"
#include "opjensen/types.hpp"

namespace opjensen {

/// Unital tolerance for dimension d: kUnitalTolScale * sqrt(d).
double unital_tol(int dim);

/// Residual ||sum_t nu_t a_t* a_t - I||_F of a candidate column field.
double unital_residual(const std::vector<double>& weights, const std::vector<Matrix>& maps);

/// A finite family (nu_t, a_t) with sum_t nu_t a_t* a_t = 1 within tolerance.
class DiscreteField {
 public:
  static DiscreteField validate(std::vector<double> weights, std::vector<Matrix> maps,
                                const TolerancePolicy& policy = {});

  /// The field a_t = I with probability weights; zero-weight atoms are dropped.
  static DiscreteField trivial(const std::vector<double>& probability_weights, int dim,
                               const TolerancePolicy& policy = {});

  int atom_count() const { return static_cast<int>(weights_.size()); }
  int dim() const { return static_cast<int>(maps_.front().rows()); }
  double weight(int t) const { return weights_[static_cast<std::size_t>(t)]; }
  const Matrix& map(int t) const { return maps_[static_cast<std::size_t>(t)]; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<Matrix>& maps() const { return maps_; }
  double residual() const { return residual_; }

 private:
  DiscreteField(std::vector<double> weights, std::vector<Matrix> maps, double residual)
      : weights_(std::move(weights)), maps_(std::move(maps)), residual_(residual) {}
  std::vector<double> weights_;
  std::vector<Matrix> maps_;
  double residual_;
};

/// A field of abelian n-tuples over the same atoms, all inside a shared cube.
class TupleField {
 public:
  static TupleField validate(std::vector<AbelianTuple> tuples, CubeDomain domain,
                             const TolerancePolicy& policy = {});

  int atom_count() const { return static_cast<int>(tuples_.size()); }
  int arity() const { return tuples_.front().arity(); }
  int dim() const { return tuples_.front().dim(); }
  const AbelianTuple& tuple(int t) const { return tuples_[static_cast<std::size_t>(t)]; }
  const CubeDomain& domain() const { return domain_; }

 private:
  TupleField(std::vector<AbelianTuple> tuples, CubeDomain domain)
      : tuples_(std::move(tuples)), domain_(std::move(domain)) {}
  std::vector<AbelianTuple> tuples_;
  CubeDomain domain_;
};

/// y_i = sum_t nu_t a_t* x_{i,t} a_t. The members need not commute.
std::vector<HermitianMatrix> compress(const DiscreteField& field, const TupleField& tuples,
                                      const TolerancePolicy& policy = {},
                                      ExecMode mode = ExecMode::serial);

/// sum_t nu_t a_t* f(x_t) a_t. Per-atom terms are computed independently and
/// summed in atom order, so the result does not depend on the thread count.
HermitianMatrix transform(const DiscreteField& field, const TupleField& tuples,
                          const ScalarFunction& f, const CubeDomain& dom,
                          const TolerancePolicy& policy = {}, ExecMode mode = ExecMode::serial);

/// Block-diagonal direct sum of tuples with the concatenated unit vector.
std::pair<AbelianTuple, StateVector> direct_sum_embed(const std::vector<AbelianTuple>& tuples,
                                                      const std::vector<Vector>& vectors,
                                                      const TolerancePolicy& policy = {});

}  // namespace opjensen
