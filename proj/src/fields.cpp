#include "opjensen/fields.hpp"

#include <cmath>
#include <sstream>

namespace opjensen {

double unital_tol(int dim) { return kUnitalTolScale * std::sqrt(static_cast<double>(dim)); }

double unital_residual(const std::vector<double>& weights, const std::vector<Matrix>& maps) {
  if (weights.empty() || weights.size() != maps.size())
    throw ValidationError("field: weight and map counts differ");
  const Eigen::Index d = maps.front().rows();
  Matrix sum = Matrix::Zero(d, d);
  for (std::size_t t = 0; t < maps.size(); ++t) {
    if (maps[t].rows() != d || maps[t].cols() != d)
      throw ValidationError("field: maps have mixed dimensions");
    sum += weights[t] * (maps[t].adjoint() * maps[t]);
  }
  return (sum - Matrix::Identity(d, d)).norm();
}

DiscreteField DiscreteField::validate(std::vector<double> weights, std::vector<Matrix> maps,
                                      const TolerancePolicy& policy) {
  (void)policy;
  for (std::size_t t = 0; t < weights.size(); ++t) {
    if (!(weights[t] > 0.0) || !std::isfinite(weights[t]))
      throw ValidationError("field: weight " + std::to_string(t + 1) + " must be positive");
  }
  for (const auto& m : maps)
    if (!m.allFinite()) throw ValidationError("field: non-finite map entries");
  const double res = unital_residual(weights, maps);
  const double tol = unital_tol(static_cast<int>(maps.front().rows()));
  if (res > tol) {
    std::ostringstream os;
    os << "field: not a unital column field, ||sum nu a*a - I||_F = " << res
       << " exceeds " << tol;
    throw ValidationError(os.str());
  }
  return DiscreteField(std::move(weights), std::move(maps), res);
}

DiscreteField DiscreteField::trivial(const std::vector<double>& probability_weights, int dim,
                                     const TolerancePolicy& policy) {
  if (probability_weights.empty()) throw ValidationError("trivial field: no weights");
  double sum = 0.0;
  for (double w : probability_weights) {
    if (w < 0.0 || !std::isfinite(w))
      throw ValidationError("trivial field: weights must be nonnegative");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > policy.ineq_atol) {
    std::ostringstream os;
    os << "trivial field: weights sum to " << sum << ", not 1";
    throw ValidationError(os.str());
  }
  std::vector<double> weights;
  std::vector<Matrix> maps;
  for (double w : probability_weights) {
    if (w == 0.0) continue;
    weights.push_back(w);
    maps.push_back(Matrix::Identity(dim, dim));
  }
  return validate(std::move(weights), std::move(maps), policy);
}

TupleField TupleField::validate(std::vector<AbelianTuple> tuples, CubeDomain domain,
                                const TolerancePolicy& policy) {
  if (tuples.empty()) throw ValidationError("tuple field: needs at least one atom");
  const int n = tuples.front().arity();
  const int d = tuples.front().dim();
  if (domain.arity() != n) throw ValidationError("tuple field: cube arity does not match tuples");
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    if (tuples[t].arity() != n || tuples[t].dim() != d)
      throw ValidationError("tuple field: atom " + std::to_string(t + 1) +
                            " has mismatched shape");
    const auto violations = domain_check(tuples[t], domain, policy);
    if (!violations.empty()) {
      const auto& v = violations.front();
      std::ostringstream os;
      os << "tuple field: atom " << t + 1 << " leaves the cube, coordinate " << v.coordinate
         << " eigenvalue " << v.value;
      throw ValidationError(os.str());
    }
  }
  return TupleField(std::move(tuples), std::move(domain));
}

std::vector<HermitianMatrix> compress(const DiscreteField& field, const TupleField& tuples,
                                      const TolerancePolicy& policy, ExecMode mode) {
  if (field.atom_count() != tuples.atom_count())
    throw ValidationError("compress: field and tuple field atom counts differ");
  if (field.dim() != tuples.dim()) throw ValidationError("compress: dimension mismatch");
  const int n = tuples.arity();
  const int T = field.atom_count();
  const Eigen::Index d = field.dim();

  // terms[t] holds all n compressed members for atom t; summed in atom order
  std::vector<std::vector<Matrix>> terms(static_cast<std::size_t>(T));
  for_each_index(T, mode, [&](std::int64_t t) {
    const Matrix& a = field.map(static_cast<int>(t));
    auto& slot = terms[static_cast<std::size_t>(t)];
    slot.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      slot.push_back(field.weight(static_cast<int>(t)) *
                     (a.adjoint() * tuples.tuple(static_cast<int>(t)).member(i).mat() * a));
  });

  std::vector<HermitianMatrix> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Matrix y = Matrix::Zero(d, d);
    for (int t = 0; t < T; ++t) y += terms[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
    out.emplace_back(std::move(y), policy.herm_tol);
  }
  return out;
}

HermitianMatrix transform(const DiscreteField& field, const TupleField& tuples,
                          const ScalarFunction& f, const CubeDomain& dom,
                          const TolerancePolicy& policy, ExecMode mode) {
  if (field.atom_count() != tuples.atom_count())
    throw ValidationError("transform: field and tuple field atom counts differ");
  if (field.dim() != tuples.dim()) throw ValidationError("transform: dimension mismatch");
  if (f.arity() != tuples.arity()) throw ValidationError("transform: function arity mismatch");

  const int T = field.atom_count();
  const Eigen::Index d = field.dim();
  std::vector<Matrix> terms(static_cast<std::size_t>(T));
  for_each_index(T, mode, [&](std::int64_t t) {
    const Matrix& a = field.map(static_cast<int>(t));
    Matrix fx;
    try {
      fx = apply_function(f, tuples.tuple(static_cast<int>(t)), dom, policy).mat();
    } catch (const ValidationError& e) {
      throw ValidationError("transform: atom " + std::to_string(t + 1) + ": " + e.what());
    }
    terms[static_cast<std::size_t>(t)] =
        field.weight(static_cast<int>(t)) * (a.adjoint() * fx * a);
  });

  Matrix sum = Matrix::Zero(d, d);
  for (int t = 0; t < T; ++t) sum += terms[static_cast<std::size_t>(t)];
  return HermitianMatrix(std::move(sum), policy.herm_tol);
}

std::pair<AbelianTuple, StateVector> direct_sum_embed(const std::vector<AbelianTuple>& tuples,
                                                      const std::vector<Vector>& vectors,
                                                      const TolerancePolicy& policy) {
  if (tuples.empty() || tuples.size() != vectors.size())
    throw ValidationError("direct sum: needs matching nonempty tuple and vector lists");
  const int n = tuples.front().arity();
  Eigen::Index total = 0;
  double norm2 = 0.0;
  for (std::size_t j = 0; j < tuples.size(); ++j) {
    if (tuples[j].arity() != n) throw ValidationError("direct sum: arity mismatch between blocks");
    if (vectors[j].size() != tuples[j].dim())
      throw ValidationError("direct sum: vector " + std::to_string(j + 1) +
                            " does not match its block dimension");
    total += tuples[j].dim();
    norm2 += vectors[j].squaredNorm();
  }
  if (std::fabs(norm2 - 1.0) > kNormTol) {
    std::ostringstream os;
    os << "direct sum: squared norms sum to " << norm2 << ", not 1";
    throw ValidationError(os.str());
  }

  std::vector<HermitianMatrix> members;
  members.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Matrix big = Matrix::Zero(total, total);
    Eigen::Index at = 0;
    for (const auto& t : tuples) {
      big.block(at, at, t.dim(), t.dim()) = t.member(i).mat();
      at += t.dim();
    }
    members.emplace_back(std::move(big), policy.herm_tol);
  }
  Vector xi(total);
  Eigen::Index at = 0;
  for (const auto& v : vectors) {
    xi.segment(at, v.size()) = v;
    at += v.size();
  }
  return {AbelianTuple::validate(std::move(members), policy), StateVector(std::move(xi))};
}

}  // namespace opjensen
