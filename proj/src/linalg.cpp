#include "opjensen/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace opjensen {

namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw ValidationError(std::string(what) + ": non-finite entries");
}

}  // namespace

HermitianMatrix::HermitianMatrix(Matrix m, double herm_tol) {
  if (m.rows() != m.cols()) throw ValidationError("hermitian: matrix not square");
  if (m.rows() == 0) throw ValidationError("hermitian: empty matrix");
  require_finite(m, "hermitian");
  const double defect = (m - m.adjoint()).norm();
  const double scale = std::max(1.0, m.norm());
  if (defect > herm_tol * scale) {
    std::ostringstream os;
    os << "hermitian: defect ||m - m*|| = " << defect << " exceeds " << herm_tol * scale;
    throw ValidationError(os.str());
  }
  mat_ = 0.5 * (m + m.adjoint());
}

double HermitianMatrix::fnorm() const { return mat_.norm(); }

StateVector::StateVector(Vector v) {
  if (v.size() == 0) throw ValidationError("state vector: empty");
  if (!v.allFinite()) throw ValidationError("state vector: non-finite entries");
  const double nrm = v.norm();
  if (std::fabs(nrm - 1.0) > kNormTol) {
    std::ostringstream os;
    os << "state vector: norm " << nrm << " is not 1 within " << kNormTol;
    throw ValidationError(os.str());
  }
  v_ = std::move(v);
}

EigResult eig_hermitian(const HermitianMatrix& h, const TolerancePolicy& policy) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h.mat());
  if (solver.info() != Eigen::Success)
    throw NumericalError("eig_hermitian: iteration failed to converge");
  EigResult r{solver.eigenvalues(), solver.eigenvectors()};

  const int d = h.dim();
  const double scale = std::max(1.0, h.fnorm());
  const double residual =
      (h.mat() * r.u - r.u * r.eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>()).norm();
  const double unitary_defect = (r.u.adjoint() * r.u - Matrix::Identity(d, d)).norm();
  if (residual > policy.eig_residual_tol * scale || unitary_defect > policy.eig_residual_tol) {
    std::ostringstream os;
    os << "eig_hermitian: residual " << residual << " (unitary defect " << unitary_defect
       << ") above tolerance " << policy.eig_residual_tol * scale;
    throw NumericalError(os.str());
  }
  return r;
}

double commutator_norm(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw ValidationError("commutator_norm: dimension mismatch");
  return (a * b - b * a).norm();
}

bool is_psd(const HermitianMatrix& h, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h.mat(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalError("is_psd: eigenvalue iteration failed to converge");
  return solver.eigenvalues().minCoeff() >= -tol * std::max(1.0, h.fnorm());
}

double frobenius_norm(const Matrix& m) { return m.norm(); }

Complex operator_inner(const Matrix& x, const StateVector& xi) {
  if (x.rows() != x.cols() || x.rows() != xi.dim())
    throw ValidationError("operator_inner: dimension mismatch");
  return (xi.vec().adjoint() * x * xi.vec())(0, 0);
}

double real_inner(const Matrix& x, const StateVector& xi) {
  const Complex v = operator_inner(x, xi);
  const double scale = std::max(1.0, std::fabs(v.real()));
  if (std::fabs(v.imag()) > 1e-10 * scale) {
    std::ostringstream os;
    os << "real_inner: imaginary part " << v.imag() << " is not negligible";
    throw NumericalError(os.str());
  }
  return v.real();
}

Matrix inv_sqrt_hpd(const HermitianMatrix& h, const TolerancePolicy& policy) {
  const EigResult e = eig_hermitian(h, policy);
  const double scale = std::max(1.0, h.fnorm());
  RealVector inv_sqrt(e.eigenvalues.size());
  for (Eigen::Index i = 0; i < e.eigenvalues.size(); ++i) {
    if (e.eigenvalues(i) <= kPsdTol * scale)
      throw ValidationError("inv_sqrt_hpd: matrix is not positive definite");
    inv_sqrt(i) = 1.0 / std::sqrt(e.eigenvalues(i));
  }
  return e.u * inv_sqrt.asDiagonal() * e.u.adjoint();
}

}  // namespace opjensen
