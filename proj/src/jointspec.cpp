#include "opjensen/jointspec.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace opjensen {

AbelianTuple AbelianTuple::validate(std::vector<HermitianMatrix> members,
                                    const TolerancePolicy& policy) {
  if (members.empty()) throw ValidationError("abelian tuple: needs at least one member");
  const int d = members.front().dim();
  for (const auto& m : members)
    if (m.dim() != d) throw ValidationError("abelian tuple: members have mixed dimensions");

  double worst = 0.0;
  int worst_i = 0, worst_j = 0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      const double c = commutator_norm(members[i].mat(), members[j].mat());
      const double bound =
          policy.commute_tol * std::max(1.0, members[i].fnorm() * members[j].fnorm());
      if (c > bound && c > worst) {
        worst = c;
        worst_i = static_cast<int>(i) + 1;
        worst_j = static_cast<int>(j) + 1;
      }
    }
  }
  if (worst > 0.0) {
    std::ostringstream os;
    os << "abelian tuple: members " << worst_i << " and " << worst_j
       << " do not commute, ||[x_i, x_j]||_F = " << worst;
    throw ValidationError(os.str());
  }
  return AbelianTuple(std::move(members));
}

namespace {

// Column ranges of u whose joint eigenvalues agree for all processed members.
struct Segment {
  int lo;
  int len;
};

}  // namespace

JointSpectrum joint_diagonalize(const AbelianTuple& tuple, const TolerancePolicy& policy) {
  const int d = tuple.dim();
  const int n = tuple.arity();

  Matrix u = Matrix::Identity(d, d);
  RealMatrix table(d, n);
  std::vector<Segment> segments{{0, d}};

  for (int i = 0; i < n; ++i) {
    const Matrix& x = tuple.member(i).mat();

    // diagonalize the restriction of x to every segment
    std::vector<RealVector> seg_eigs(segments.size());
    double radius = 0.0;
    for (std::size_t s = 0; s < segments.size(); ++s) {
      const Segment seg = segments[s];
      if (seg.len == 1) {
        const Vector col = u.col(seg.lo);
        seg_eigs[s] = RealVector::Constant(1, (col.adjoint() * x * col)(0, 0).real());
      } else {
        auto block = u.middleCols(seg.lo, seg.len);
        const Matrix restricted = block.adjoint() * x * block;
        const EigResult e = eig_hermitian(HermitianMatrix(restricted, policy.herm_tol), policy);
        block = (block * e.u).eval();
        seg_eigs[s] = e.eigenvalues;
      }
      radius = std::max(radius, seg_eigs[s].cwiseAbs().maxCoeff());
    }

    // record eigenvalues and split segments at spectral gaps
    const double gap_tol = policy.cluster_tol * std::max(1.0, radius);
    std::vector<Segment> refined;
    for (std::size_t s = 0; s < segments.size(); ++s) {
      const Segment seg = segments[s];
      const RealVector& lam = seg_eigs[s];
      int start = 0;
      for (int k = 0; k < seg.len; ++k) {
        table(seg.lo + k, i) = lam(k);
        const bool last = k == seg.len - 1;
        if (last || lam(k + 1) - lam(k) > gap_tol) {
          refined.push_back({seg.lo + start, k - start + 1});
          start = k + 1;
        }
      }
    }
    segments = std::move(refined);
  }

  // verify the common eigenbasis
  for (int i = 0; i < n; ++i) {
    const Matrix& x = tuple.member(i).mat();
    const Matrix lam = table.col(i).asDiagonal().toDenseMatrix().cast<Complex>();
    const double residual = (x * u - u * lam).norm();
    const double bound = policy.eig_residual_tol * std::max(1.0, tuple.member(i).fnorm());
    if (residual > bound) {
      std::ostringstream os;
      os << "joint_diagonalize: member " << i + 1 << " residual " << residual
         << " above tolerance " << bound << " after refinement";
      throw NumericalError(os.str());
    }
  }
  const double unitary_defect = (u.adjoint() * u - Matrix::Identity(d, d)).norm();
  if (unitary_defect > policy.eig_residual_tol)
    throw NumericalError("joint_diagonalize: eigenbasis lost orthonormality");

  return {std::move(u), std::move(table)};
}

std::vector<DomainViolation> domain_check_table(const RealMatrix& table, const CubeDomain& dom,
                                                const TolerancePolicy& policy) {
  std::vector<DomainViolation> out;
  for (int i = 0; i < static_cast<int>(table.cols()); ++i) {
    const auto& iv = dom.interval(i);
    const double eps = dom.membership_tol(i, policy.ineq_atol);
    for (int k = 0; k < static_cast<int>(table.rows()); ++k) {
      const double v = table(k, i);
      if (v < iv.lo - eps || v > iv.hi + eps) out.push_back({i + 1, k, v});
    }
  }
  return out;
}

std::vector<DomainViolation> domain_check(const AbelianTuple& tuple, const CubeDomain& dom,
                                          const TolerancePolicy& policy) {
  if (dom.arity() != tuple.arity())
    throw ValidationError("domain_check: cube arity does not match tuple");
  const JointSpectrum js = joint_diagonalize(tuple, policy);
  return domain_check_table(js.table, dom, policy);
}

HermitianMatrix apply_function(const ScalarFunction& f, const AbelianTuple& tuple,
                               const CubeDomain& dom, const TolerancePolicy& policy) {
  if (f.arity() != tuple.arity())
    throw ValidationError("apply_function: function arity does not match tuple");
  if (dom.arity() != tuple.arity())
    throw ValidationError("apply_function: cube arity does not match tuple");

  const JointSpectrum js = joint_diagonalize(tuple, policy);
  const auto violations = domain_check_table(js.table, dom, policy);
  if (!violations.empty()) {
    const auto& v = violations.front();
    std::ostringstream os;
    os << "apply_function: joint eigenvalue outside domain, coordinate " << v.coordinate
       << " column " << v.column << " value " << v.value << " (" << violations.size()
       << " violation(s))";
    throw ValidationError(os.str());
  }

  const int d = tuple.dim();
  RealVector values(d);
  std::vector<double> point(static_cast<std::size_t>(tuple.arity()));
  for (int k = 0; k < d; ++k) {
    for (int i = 0; i < tuple.arity(); ++i) point[static_cast<std::size_t>(i)] = js.table(k, i);
    values(k) = f.eval(point);
  }
  const Matrix result = js.u * values.asDiagonal().toDenseMatrix().cast<Complex>() * js.u.adjoint();
  return HermitianMatrix(result, policy.herm_tol);
}

}  // namespace opjensen
