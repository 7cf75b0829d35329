#pragma once

#include <utility>

#include "opjensen/types.hpp"

namespace opjensen {

/// A matrix certified Hermitian: construction checks the defect against
/// herm_tol and stores the symmetrized form (m + m*)/2.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(Matrix m, double herm_tol = TolerancePolicy{}.herm_tol);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Matrix& mat() const { return mat_; }
  double fnorm() const;

 private:
  Matrix mat_;
};

/// A unit vector (within kNormTol).
class StateVector {
 public:
  explicit StateVector(Vector v);

  int dim() const { return static_cast<int>(v_.size()); }
  const Vector& vec() const { return v_; }

 private:
  Vector v_;
};

struct EigResult {
  RealVector eigenvalues;  // ascending
  Matrix u;                // unitary, columns are eigenvectors
};

/// Hermitian eigendecomposition with verified residuals:
/// ||h u - u diag(lambda)||_F <= eig_residual_tol * max(1, ||h||_F) and
/// ||u* u - I||_F <= eig_residual_tol.
EigResult eig_hermitian(const HermitianMatrix& h, const TolerancePolicy& policy = {});

/// ||ab - ba||_F.
double commutator_norm(const Matrix& a, const Matrix& b);

/// True iff the smallest eigenvalue is >= -tol * max(1, ||h||_F).
bool is_psd(const HermitianMatrix& h, double tol);

double frobenius_norm(const Matrix& m);

/// (x xi | xi) = xi* x xi.
Complex operator_inner(const Matrix& x, const StateVector& xi);

/// Real part of operator_inner; throws if the imaginary part is not tiny
/// relative to the value scale.
double real_inner(const Matrix& x, const StateVector& xi);

/// h^(-1/2) for Hermitian positive definite h.
Matrix inv_sqrt_hpd(const HermitianMatrix& h, const TolerancePolicy& policy = {});

}  // namespace opjensen
