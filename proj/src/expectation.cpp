#include "opjensen/expectation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace opjensen {

PartitionOfUnity PartitionOfUnity::validate(std::vector<HermitianMatrix> atoms,
                                            const TolerancePolicy& policy) {
  if (atoms.empty()) throw ValidationError("partition: needs at least one projection");
  const int d = atoms.front().dim();
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if (atoms[j].dim() != d) throw ValidationError("partition: mixed dimensions");
    const Matrix& p = atoms[j].mat();
    const double idem = (p * p - p).norm();
    if (idem > policy.herm_tol * std::max(1.0, p.norm())) {
      std::ostringstream os;
      os << "partition: atom " << j + 1 << " is not a projection, ||p^2 - p|| = " << idem;
      throw ValidationError(os.str());
    }
  }
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      const double overlap = (atoms[i].mat() * atoms[j].mat()).norm();
      if (overlap > policy.herm_tol * std::max(1.0, atoms[i].fnorm() * atoms[j].fnorm())) {
        std::ostringstream os;
        os << "partition: atoms " << i + 1 << " and " << j + 1
           << " are not orthogonal, ||p_i p_j|| = " << overlap;
        throw ValidationError(os.str());
      }
    }
  }
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& a : atoms) sum += a.mat();
  const double defect = (sum - Matrix::Identity(d, d)).norm();
  if (defect > policy.herm_tol * std::sqrt(static_cast<double>(d))) {
    std::ostringstream os;
    os << "partition: projections do not sum to the identity, defect " << defect;
    throw ValidationError(os.str());
  }
  return PartitionOfUnity(std::move(atoms));
}

DensityFunctional DensityFunctional::validate(HermitianMatrix rho, const TolerancePolicy& policy) {
  (void)policy;
  if (!is_psd(rho, kPsdTol)) throw ValidationError("density: rho is not positive semidefinite");
  const double tr = rho.mat().trace().real();
  if (!(tr > 0.0)) throw ValidationError("density: tr(rho) must be positive");
  return DensityFunctional(std::move(rho), tr);
}

double CondExpValue::real_at(int j) const {
  if (j < 0 || j >= static_cast<int>(values.size()))
    throw ValidationError("cond_expect: atom index out of range");
  if (!supported[static_cast<std::size_t>(j)])
    throw ValidationError("cond_expect: value requested at a null atom");
  const Complex v = values[static_cast<std::size_t>(j)];
  if (std::fabs(v.imag()) > 1e-9 * std::max(1.0, std::fabs(v.real()))) {
    std::ostringstream os;
    os << "cond_expect: value at atom " << j << " has imaginary part " << v.imag();
    throw NumericalError(os.str());
  }
  return v.real();
}

SubalgebraContext::SubalgebraContext(PartitionOfUnity partition, DensityFunctional functional)
    : partition_(std::move(partition)), functional_(std::move(functional)) {}

SubalgebraContext SubalgebraContext::build(PartitionOfUnity partition,
                                           DensityFunctional functional,
                                           const TolerancePolicy& policy) {
  if (partition.dim() != functional.dim())
    throw ValidationError("context: partition and density dimensions differ");

  const Matrix& rho = functional.rho();
  const double rho_scale = std::max(1.0, rho.norm());
  double worst = 0.0;
  int worst_j = -1;
  for (int j = 0; j < partition.atom_count(); ++j) {
    const double c = commutator_norm(rho, partition.atom(j));
    if (c > worst) {
      worst = c;
      worst_j = j;
    }
  }
  if (worst > policy.commute_tol * rho_scale) {
    std::ostringstream os;
    os << "context: rho is not in the centralizer, ||[rho, p_" << worst_j + 1
       << "]|| = " << worst;
    throw ValidationError(os.str());
  }

  SubalgebraContext ctx(std::move(partition), std::move(functional));
  const int k = ctx.partition_.atom_count();
  ctx.rho_atoms_.reserve(static_cast<std::size_t>(k));
  ctx.measure_.weights.resize(static_cast<std::size_t>(k));
  ctx.measure_.supported.resize(static_cast<std::size_t>(k));
  ctx.measure_.total = ctx.functional_.trace();
  const double null_cut = kNullAtomRel * ctx.functional_.trace();
  for (int j = 0; j < k; ++j) {
    ctx.rho_atoms_.push_back(ctx.functional_.rho() * ctx.partition_.atom(j));
    const double mu = ctx.rho_atoms_.back().trace().real();
    ctx.measure_.weights[static_cast<std::size_t>(j)] = mu;
    ctx.measure_.supported[static_cast<std::size_t>(j)] = mu > null_cut;
  }
  return ctx;
}

Complex SubalgebraContext::functional_apply(const Matrix& x) const {
  if (x.rows() != dim() || x.cols() != dim())
    throw ValidationError("functional_apply: dimension mismatch");
  return (functional_.rho() * x).trace();
}

CondExpValue SubalgebraContext::cond_expect(const Matrix& x) const {
  if (x.rows() != dim() || x.cols() != dim())
    throw ValidationError("cond_expect: dimension mismatch");
  const int k = atom_count();
  CondExpValue out;
  out.values.assign(static_cast<std::size_t>(k), Complex{0.0, 0.0});
  out.supported = measure_.supported;
  for (int j = 0; j < k; ++j) {
    if (!out.supported[static_cast<std::size_t>(j)]) continue;
    const Complex t = (weighted_atom(j) * x).trace();
    out.values[static_cast<std::size_t>(j)] = t / measure_.weights[static_cast<std::size_t>(j)];
  }
  return out;
}

double SubalgebraContext::module_property_check(const Matrix& x,
                                                std::span<const Complex> y_coeffs) const {
  if (static_cast<int>(y_coeffs.size()) != atom_count())
    throw ValidationError("module_property_check: coefficient count mismatch");
  Matrix y = Matrix::Zero(dim(), dim());
  for (int j = 0; j < atom_count(); ++j) y += y_coeffs[static_cast<std::size_t>(j)] * partition_.atom(j);

  const CondExpValue xy = cond_expect(x * y);
  const CondExpValue yx = cond_expect(y * x);
  const CondExpValue px = cond_expect(x);
  double dev = 0.0;
  for (int j = 0; j < atom_count(); ++j) {
    if (!measure_.supported[static_cast<std::size_t>(j)]) continue;
    const Complex a = xy.values[static_cast<std::size_t>(j)];
    const Complex b = yx.values[static_cast<std::size_t>(j)];
    const Complex c = px.values[static_cast<std::size_t>(j)] * y_coeffs[static_cast<std::size_t>(j)];
    dev = std::max({dev, std::abs(a - c), std::abs(b - c), std::abs(a - b)});
  }
  return dev;
}

SubalgebraContext vector_state_subalgebra(const StateVector& xi, const TolerancePolicy& policy) {
  const int d = xi.dim();
  const Matrix p = xi.vec() * xi.vec().adjoint();
  std::vector<HermitianMatrix> atoms;
  atoms.emplace_back(p, policy.herm_tol);
  if (d > 1) atoms.emplace_back(Matrix::Identity(d, d) - p, policy.herm_tol);
  auto partition = PartitionOfUnity::validate(std::move(atoms), policy);
  auto functional = DensityFunctional::validate(
      HermitianMatrix(Matrix::Identity(d, d), policy.herm_tol), policy);
  return SubalgebraContext::build(std::move(partition), std::move(functional), policy);
}

}  // namespace opjensen
