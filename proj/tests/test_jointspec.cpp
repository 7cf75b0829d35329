#include <doctest.h>

#include <cmath>

#include "opjensen/jointspec.hpp"
#include "opjensen/randomgen.hpp"
#include "opjensen/rng.hpp"

using namespace opjensen;

namespace {

Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

AbelianTuple diag_pair() {
  return AbelianTuple::validate(
      {HermitianMatrix(mat2(1, 0, 0, 2)), HermitianMatrix(mat2(3, 0, 0, 4))});
}

}  // namespace

TEST_CASE("abelian validation") {
  CHECK_NOTHROW(diag_pair());
  CHECK_NOTHROW(AbelianTuple::validate({HermitianMatrix(mat2(0, 1, 1, 0))}));
  CHECK_THROWS_WITH_AS(
      AbelianTuple::validate(
          {HermitianMatrix(mat2(0, 1, 1, 0)), HermitianMatrix(mat2(1, 0, 0, -1))}),
      doctest::Contains("do not commute"), ValidationError);
  CHECK_THROWS_AS(AbelianTuple::validate({}), ValidationError);
  CHECK_THROWS_AS(AbelianTuple::validate({HermitianMatrix(mat2(1, 0, 0, 1)),
                                          HermitianMatrix(Matrix::Identity(3, 3))}),
                  ValidationError);
}

TEST_CASE("joint diagonalization of diagonal tuples is the identity") {
  const JointSpectrum js = joint_diagonalize(diag_pair());
  CHECK((js.u - Matrix::Identity(2, 2)).norm() < 1e-12);
  CHECK(js.table(0, 0) == doctest::Approx(1.0));
  CHECK(js.table(0, 1) == doctest::Approx(3.0));
  CHECK(js.table(1, 0) == doctest::Approx(2.0));
  CHECK(js.table(1, 1) == doctest::Approx(4.0));
}

TEST_CASE("joint diagonalization with a scalar second member") {
  const AbelianTuple t = AbelianTuple::validate(
      {HermitianMatrix(mat2(1, 1, 1, 1)), HermitianMatrix(3.0 * Matrix::Identity(2, 2))});
  const JointSpectrum js = joint_diagonalize(t);
  CHECK(js.table(0, 0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(js.table(0, 1) == doctest::Approx(3.0));
  CHECK(js.table(1, 0) == doctest::Approx(2.0));
  CHECK(js.table(1, 1) == doctest::Approx(3.0));
  CHECK(std::abs(js.u(0, 0)) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("duplicated member gets equal coordinates") {
  Rng rng(5);
  const CubeDomain dom({{-2, 2}});
  const AbelianTuple base = random_abelian_tuple(6, dom, rng);
  const AbelianTuple dup = AbelianTuple::validate({base.member(0), base.member(0)});
  const JointSpectrum js = joint_diagonalize(dup);
  CHECK((js.table.col(0) - js.table.col(1)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("degenerate block case refines in the second member") {
  Matrix x1 = Matrix::Zero(3, 3);
  x1.diagonal() << 1, 1, 2;
  Matrix x2 = Matrix::Zero(3, 3);
  x2(0, 1) = x2(1, 0) = 1;
  x2(2, 2) = 5;
  const AbelianTuple t =
      AbelianTuple::validate({HermitianMatrix(x1), HermitianMatrix(x2)});
  const JointSpectrum js = joint_diagonalize(t);
  // rows sorted by the first member, then the second within its cluster
  CHECK(js.table(0, 0) == doctest::Approx(1.0));
  CHECK(js.table(0, 1) == doctest::Approx(-1.0));
  CHECK(js.table(1, 0) == doctest::Approx(1.0));
  CHECK(js.table(1, 1) == doctest::Approx(1.0));
  CHECK(js.table(2, 0) == doctest::Approx(2.0));
  CHECK(js.table(2, 1) == doctest::Approx(5.0));
  for (int i = 0; i < 2; ++i) {
    const Matrix lam = js.table.col(i).asDiagonal().toDenseMatrix().cast<Complex>();
    CHECK((t.member(i).mat() * js.u - js.u * lam).norm() < 1e-10);
  }
}

TEST_CASE("apply_function on a diagonal pair") {
  const HermitianMatrix r = apply_function(ScalarFunction::parse("x1*x2", 2), diag_pair(),
                                           CubeDomain({{0, 3}, {0, 5}}));
  CHECK(r.mat()(0, 0).real() == doctest::Approx(3.0));
  CHECK(r.mat()(1, 1).real() == doctest::Approx(8.0));
  CHECK(std::abs(r.mat()(0, 1)) < 1e-13);
}

TEST_CASE("coordinate functions reproduce the members") {
  Rng rng(11);
  const CubeDomain dom({{-2, 2}, {-2, 2}, {-2, 2}});
  const AbelianTuple t = random_abelian_tuple(8, dom, rng);
  for (int i = 0; i < 3; ++i) {
    const ScalarFunction gi = ScalarFunction::parse("x" + std::to_string(i + 1), 3);
    const HermitianMatrix r = apply_function(gi, t, dom);
    CHECK((r.mat() - t.member(i).mat()).norm() < 1e-11);
  }
}

TEST_CASE("square of the flip is the identity") {
  const AbelianTuple t = AbelianTuple::validate({HermitianMatrix(mat2(0, 1, 1, 0))});
  const HermitianMatrix r =
      apply_function(ScalarFunction::parse("x1^2", 1), t, CubeDomain({{-2, 2}}));
  // direct oracle: square the matrix
  const Matrix oracle = mat2(0, 1, 1, 0) * mat2(0, 1, 1, 0);
  CHECK((r.mat() - oracle).norm() < 1e-12);
}

TEST_CASE("domain check verdicts") {
  const AbelianTuple ok = AbelianTuple::validate({HermitianMatrix(mat2(1, 0, 0, 2))});
  CHECK(domain_check(ok, CubeDomain({{0, 3}})).empty());

  const AbelianTuple bad = AbelianTuple::validate({HermitianMatrix(mat2(1, 0, 0, 5))});
  const auto violations = domain_check(bad, CubeDomain({{0, 3}}));
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].coordinate == 1);
  CHECK(violations[0].value == doctest::Approx(5.0));

  // closed intervals: the boundary belongs to the cube
  const AbelianTuple edge = AbelianTuple::validate({HermitianMatrix(mat2(0, 0, 0, 3))});
  CHECK(domain_check(edge, CubeDomain({{0, 3}})).empty());

  CHECK_THROWS_AS(apply_function(ScalarFunction::parse("x1", 1), bad, CubeDomain({{0, 3}})),
                  ValidationError);
}

TEST_CASE("functional calculus is a homomorphism on random tuples") {
  for (std::uint64_t trial = 0; trial < 25; ++trial) {
    Rng rng = Rng::substream(17, trial);
    const int d = rng.uniform_int(2, 12);
    const CubeDomain dom({{-2, 2}, {-2, 2}});
    const AbelianTuple t = random_abelian_tuple(d, dom, rng);
    const ScalarFunction f = ScalarFunction::parse("x1^2 - x2", 2);
    const ScalarFunction g = ScalarFunction::parse("x2^2 + 0.5*x1", 2);
    const ScalarFunction fg = ScalarFunction::parse("(x1^2 - x2)*(x2^2 + 0.5*x1)", 2);
    const Matrix mf = apply_function(f, t, dom).mat();
    const Matrix mg = apply_function(g, t, dom).mat();
    const Matrix mfg = apply_function(fg, t, dom).mat();
    CHECK((mfg - mf * mg).norm() <= 1e-8 * std::max(1.0, (mf * mg).norm()));
  }
}

TEST_CASE("unitary covariance and spectral containment") {
  Rng rng(23);
  const int d = 9;
  const CubeDomain dom({{-2, 2}, {-2, 2}});
  const AbelianTuple t = random_abelian_tuple(d, dom, rng);
  const ScalarFunction f = ScalarFunction::parse("max(x1, x2)", 2);

  const Matrix v = haar_unitary(d, rng);
  std::vector<HermitianMatrix> conj;
  for (int i = 0; i < 2; ++i) conj.emplace_back(v * t.member(i).mat() * v.adjoint());
  const Matrix lhs = apply_function(f, AbelianTuple::validate(conj), dom).mat();
  const Matrix rhs = v * apply_function(f, t, dom).mat() * v.adjoint();
  CHECK((lhs - rhs).norm() < 1e-9 * std::max(1.0, rhs.norm()));

  const JointSpectrum js = joint_diagonalize(t);
  double fmin = 1e300, fmax = -1e300;
  for (int k = 0; k < d; ++k) {
    const double val = f.eval(std::vector<double>{js.table(k, 0), js.table(k, 1)});
    fmin = std::min(fmin, val);
    fmax = std::max(fmax, val);
  }
  const EigResult e = eig_hermitian(apply_function(f, t, dom));
  CHECK(e.eigenvalues.minCoeff() >= fmin - 1e-9 * std::max(1.0, std::fabs(fmin)));
  CHECK(e.eigenvalues.maxCoeff() <= fmax + 1e-9 * std::max(1.0, std::fabs(fmax)));
}
