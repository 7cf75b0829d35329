#include "opjensen/randomgen.hpp"

#include <Eigen/QR>
#include <cmath>

namespace opjensen {

Matrix random_gaussian(int d, Rng& rng) {
  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.cnormal();
  return g;
}

HermitianMatrix random_hermitian(int d, Rng& rng) {
  const Matrix g = random_gaussian(d, rng);
  return HermitianMatrix(0.5 * (g + g.adjoint()));
}

Matrix haar_unitary(int d, Rng& rng) {
  const Matrix g = random_gaussian(d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const Complex rj = r(j, j);
    const double mag = std::abs(rj);
    q.col(j) *= mag > 0.0 ? rj / mag : Complex{1.0, 0.0};
  }
  return q;
}

StateVector random_state(int d, Rng& rng) {
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.cnormal();
  v /= v.norm();
  return StateVector(std::move(v));
}

AbelianTuple random_abelian_tuple(int d, const CubeDomain& dom, Rng& rng,
                                  const TolerancePolicy& policy) {
  const Matrix u = haar_unitary(d, rng);
  std::vector<HermitianMatrix> members;
  members.reserve(static_cast<std::size_t>(dom.arity()));
  for (int i = 0; i < dom.arity(); ++i) {
    RealVector lam(d);
    for (int k = 0; k < d; ++k) lam(k) = rng.uniform(dom.interval(i).lo, dom.interval(i).hi);
    const Matrix x = u * lam.asDiagonal().toDenseMatrix().cast<Complex>() * u.adjoint();
    members.emplace_back(x, policy.herm_tol);
  }
  return AbelianTuple::validate(std::move(members), policy);
}

namespace {

std::vector<int> random_composition(int d, int k, Rng& rng) {
  std::vector<int> sizes(static_cast<std::size_t>(k), 1);
  for (int extra = 0; extra < d - k; ++extra)
    ++sizes[static_cast<std::size_t>(rng.uniform_int(0, k - 1))];
  return sizes;
}

}  // namespace

PartitionOfUnity random_partition(int d, int k, Rng& rng, const TolerancePolicy& policy) {
  if (k < 1 || k > d) throw ValidationError("random_partition: need 1 <= k <= d");
  const std::vector<int> sizes = random_composition(d, k, rng);
  const Matrix v = haar_unitary(d, rng);
  std::vector<HermitianMatrix> atoms;
  atoms.reserve(static_cast<std::size_t>(k));
  int at = 0;
  for (int j = 0; j < k; ++j) {
    const auto cols = v.middleCols(at, sizes[static_cast<std::size_t>(j)]);
    atoms.emplace_back(cols * cols.adjoint(), policy.herm_tol);
    at += sizes[static_cast<std::size_t>(j)];
  }
  return PartitionOfUnity::validate(std::move(atoms), policy);
}

SubalgebraContext random_context(int d, int k, Rng& rng, const TolerancePolicy& policy) {
  if (k < 1 || k > d) throw ValidationError("random_context: need 1 <= k <= d");
  const std::vector<int> sizes = random_composition(d, k, rng);
  const Matrix v = haar_unitary(d, rng);

  std::vector<HermitianMatrix> atoms;
  Matrix rho = Matrix::Zero(d, d);
  int at = 0;
  for (int j = 0; j < k; ++j) {
    const int s = sizes[static_cast<std::size_t>(j)];
    const auto cols = v.middleCols(at, s);
    atoms.emplace_back(cols * cols.adjoint(), policy.herm_tol);
    const Matrix g = random_gaussian(s, rng);
    rho += cols * (g * g.adjoint() / static_cast<double>(s)) * cols.adjoint();
    at += s;
  }
  auto partition = PartitionOfUnity::validate(std::move(atoms), policy);
  auto functional = DensityFunctional::validate(HermitianMatrix(std::move(rho), policy.herm_tol),
                                                policy);
  return SubalgebraContext::build(std::move(partition), std::move(functional), policy);
}

DiscreteField random_unital_field(int d, int atoms, Rng& rng, const TolerancePolicy& policy) {
  if (atoms < 1) throw ValidationError("random_unital_field: need at least one atom");
  std::vector<double> weights(static_cast<std::size_t>(atoms));
  std::vector<Matrix> g(static_cast<std::size_t>(atoms));
  Matrix m = Matrix::Zero(d, d);
  for (int t = 0; t < atoms; ++t) {
    weights[static_cast<std::size_t>(t)] = rng.uniform(0.5, 1.5);
    g[static_cast<std::size_t>(t)] = random_gaussian(d, rng) / std::sqrt(static_cast<double>(d));
    m += weights[static_cast<std::size_t>(t)] *
         (g[static_cast<std::size_t>(t)].adjoint() * g[static_cast<std::size_t>(t)]);
  }
  const Matrix root = inv_sqrt_hpd(HermitianMatrix(m, policy.herm_tol), policy);
  std::vector<Matrix> maps(static_cast<std::size_t>(atoms));
  for (int t = 0; t < atoms; ++t)
    maps[static_cast<std::size_t>(t)] = g[static_cast<std::size_t>(t)] * root;
  return DiscreteField::validate(std::move(weights), std::move(maps), policy);
}

TupleField random_tuple_field(int d, int n, int atoms, const CubeDomain& dom, Rng& rng,
                              const TolerancePolicy& policy) {
  if (dom.arity() != n) throw ValidationError("random_tuple_field: cube arity mismatch");
  std::vector<AbelianTuple> tuples;
  tuples.reserve(static_cast<std::size_t>(atoms));
  for (int t = 0; t < atoms; ++t) tuples.push_back(random_abelian_tuple(d, dom, rng, policy));
  return TupleField::validate(std::move(tuples), dom, policy);
}

}  // namespace opjensen
