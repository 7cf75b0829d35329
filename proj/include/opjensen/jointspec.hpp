#pragma once

#include <vector>

#include "opjensen/convexfn.hpp"
#include "opjensen/cube.hpp"
#include "opjensen/linalg.hpp"
#include "opjensen/types.hpp"

namespace opjensen {

/// A tuple of pairwise-commuting Hermitian matrices of a common dimension.
class AbelianTuple {
 public:
  static AbelianTuple validate(std::vector<HermitianMatrix> members,
                               const TolerancePolicy& policy = {});

  int arity() const { return static_cast<int>(members_.size()); }
  int dim() const { return members_.front().dim(); }
  const HermitianMatrix& member(int i) const { return members_[static_cast<std::size_t>(i)]; }
  const std::vector<HermitianMatrix>& members() const { return members_; }

 private:
  explicit AbelianTuple(std::vector<HermitianMatrix> members) : members_(std::move(members)) {}
  std::vector<HermitianMatrix> members_;
};

/// A common eigenbasis u and the table of joint eigenvalues: row k holds the
/// n-tuple attached to column k of u.
struct JointSpectrum {
  Matrix u;
  RealMatrix table;  // dim x arity
};

/// Simultaneous diagonalization by recursive block refinement: diagonalize
/// the first member, split its spectrum into gap-clusters, refine every later
/// member inside each cluster's eigenspace. Deterministic for fixed input.
JointSpectrum joint_diagonalize(const AbelianTuple& tuple, const TolerancePolicy& policy = {});

struct DomainViolation {
  int coordinate;  // 1-based member index
  int column;      // 0-based eigenvalue index
  double value;
};

/// Empty result means every joint eigenvalue lies in the (tolerance-widened,
/// closed) cube.
std::vector<DomainViolation> domain_check(const AbelianTuple& tuple, const CubeDomain& dom,
                                          const TolerancePolicy& policy = {});

std::vector<DomainViolation> domain_check_table(const RealMatrix& table, const CubeDomain& dom,
                                                const TolerancePolicy& policy);

/// f applied through the joint functional calculus:
/// u diag(f(row_1), ..., f(row_d)) u*.
HermitianMatrix apply_function(const ScalarFunction& f, const AbelianTuple& tuple,
                               const CubeDomain& dom, const TolerancePolicy& policy = {});

}  // namespace opjensen
