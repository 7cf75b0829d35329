#include <doctest.h>

#include <cmath>

#include "opjensen/linalg.hpp"
#include "opjensen/randomgen.hpp"
#include "opjensen/rng.hpp"

using namespace opjensen;

namespace {

Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("eig of a diagonal matrix sorts ascending") {
  const HermitianMatrix h(mat2(3, 0, 0, 1));
  const EigResult e = eig_hermitian(h);
  CHECK(e.eigenvalues(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e.eigenvalues(1) == doctest::Approx(3.0).epsilon(1e-14));
  const Matrix back = e.u * e.eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>() *
                      e.u.adjoint();
  CHECK((back - h.mat()).norm() < 1e-12);
}

TEST_CASE("eig of the symmetric flip") {
  const HermitianMatrix h(mat2(0, 1, 1, 0));
  const EigResult e = eig_hermitian(h);
  CHECK(e.eigenvalues(0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(e.eigenvalues(1) == doctest::Approx(1.0).epsilon(1e-14));
  // eigenvectors are (1, -1)/sqrt(2) and (1, 1)/sqrt(2) up to phase
  CHECK(std::abs(e.u(0, 0)) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(std::abs(e.u(0, 1)) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("eig of the identity") {
  const HermitianMatrix h(Matrix::Identity(5, 5));
  const EigResult e = eig_hermitian(h);
  for (int i = 0; i < 5; ++i) CHECK(e.eigenvalues(i) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((h.mat() * e.u - e.u).norm() < 1e-12);
}

TEST_CASE("hermitian wrapper rejects a non-hermitian matrix") {
  CHECK_THROWS_AS(HermitianMatrix(mat2(0, 1, 0, 0)), ValidationError);
  CHECK_THROWS_AS(HermitianMatrix(Matrix::Zero(2, 3)), ValidationError);
}

TEST_CASE("commutator norms") {
  CHECK(commutator_norm(mat2(1, 0, 0, 2), mat2(3, 0, 0, 4)) == 0.0);
  CHECK(commutator_norm(mat2(0, 1, 1, 0), mat2(1, 0, 0, -1)) ==
        doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-14));
  Rng rng(3);
  const Matrix x = random_hermitian(6, rng).mat();
  CHECK(commutator_norm(x, x * x) < 1e-13 * std::max(1.0, x.norm() * x.norm() * x.norm()));
  CHECK_THROWS_AS(commutator_norm(Matrix::Identity(2, 2), Matrix::Identity(3, 3)),
                  ValidationError);
}

TEST_CASE("psd tests") {
  CHECK(is_psd(HermitianMatrix(Matrix::Identity(3, 3)), 1e-9));
  CHECK_FALSE(is_psd(HermitianMatrix(mat2(1, 0, 0, -0.5)), 1e-9));
  Rng rng(7);
  const StateVector xi = random_state(4, rng);
  CHECK(is_psd(HermitianMatrix(xi.vec() * xi.vec().adjoint()), 1e-9));
}

TEST_CASE("operator inner products") {
  Vector e1(2);
  e1 << 1, 0;
  CHECK(operator_inner(mat2(5, 0, 0, 7), StateVector(e1)).real() == doctest::Approx(5.0));
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  CHECK(real_inner(mat2(0, 1, 1, 0), StateVector(plus)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(real_inner(Matrix::Identity(2, 2), StateVector(plus)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(operator_inner(Matrix::Identity(3, 3), StateVector(e1)), ValidationError);
}

TEST_CASE("state vector must be a unit vector") {
  Vector v(2);
  v << 1, 1;
  CHECK_THROWS_AS(StateVector(v), ValidationError);
}

TEST_CASE("eig reconstruction and spectral invariants over random input") {
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    Rng rng = Rng::substream(99, trial);
    const int d = rng.uniform_int(1, 32);
    const HermitianMatrix h = random_hermitian(d, rng);
    const EigResult e = eig_hermitian(h);
    const double scale = std::max(1.0, h.fnorm());
    const Matrix back =
        e.u * e.eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>() * e.u.adjoint();
    CHECK((back - h.mat()).norm() <= 1e-10 * scale);
    const double tr = h.mat().trace().real();
    CHECK(std::fabs(e.eigenvalues.sum() - tr) <= 1e-9 * std::max(1.0, std::fabs(tr)));
    const Matrix v = haar_unitary(d, rng);
    const EigResult e2 = eig_hermitian(HermitianMatrix(v * h.mat() * v.adjoint()));
    CHECK((e.eigenvalues - e2.eigenvalues).cwiseAbs().maxCoeff() <= 1e-9 * scale);
  }
}

TEST_CASE("inverse square root of a positive matrix") {
  Rng rng(13);
  const Matrix g = random_gaussian(5, rng);
  const HermitianMatrix h(g * g.adjoint() + Matrix::Identity(5, 5));
  const Matrix r = inv_sqrt_hpd(h);
  CHECK((r * h.mat() * r - Matrix::Identity(5, 5)).norm() < 1e-11);
  CHECK_THROWS_AS(inv_sqrt_hpd(HermitianMatrix(Matrix::Zero(3, 3))), ValidationError);
}
