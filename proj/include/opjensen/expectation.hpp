#pragma once

#include <span>
#include <vector>

#include "opjensen/linalg.hpp"
#include "opjensen/types.hpp"

namespace opjensen {

/// Mutually orthogonal projections p_1..p_k summing to the identity.
class PartitionOfUnity {
 public:
  static PartitionOfUnity validate(std::vector<HermitianMatrix> atoms,
                                   const TolerancePolicy& policy = {});

  int dim() const { return atoms_.front().dim(); }
  int atom_count() const { return static_cast<int>(atoms_.size()); }
  const Matrix& atom(int j) const { return atoms_[static_cast<std::size_t>(j)].mat(); }

 private:
  explicit PartitionOfUnity(std::vector<HermitianMatrix> atoms) : atoms_(std::move(atoms)) {}
  std::vector<HermitianMatrix> atoms_;
};

/// The positive functional x -> tr(rho x) given by a PSD density rho
/// (any positive trace, not necessarily one).
class DensityFunctional {
 public:
  static DensityFunctional validate(HermitianMatrix rho, const TolerancePolicy& policy = {});

  int dim() const { return rho_.dim(); }
  const Matrix& rho() const { return rho_.mat(); }
  double trace() const { return trace_; }

 private:
  DensityFunctional(HermitianMatrix rho, double trace) : rho_(std::move(rho)), trace_(trace) {}
  HermitianMatrix rho_;
  double trace_;
};

/// Weights mu(j) = tr(rho p_j). Atoms with mu(j) below the null cut carry no
/// conditional-expectation value.
struct AtomicMeasure {
  std::vector<double> weights;
  std::vector<bool> supported;
  double total = 0.0;

  int atom_count() const { return static_cast<int>(weights.size()); }
};

/// Values of the conditional expectation on the partition atoms; entries at
/// unsupported atoms are masked and must not be read.
struct CondExpValue {
  std::vector<Complex> values;
  std::vector<bool> supported;

  /// Real part at a supported atom; throws if the imaginary part is not tiny.
  double real_at(int j) const;
};

/// The partition, the density, and the induced measure, with the centralizer
/// condition rho p_j = p_j rho verified. Immutable after build.
class SubalgebraContext {
 public:
  static SubalgebraContext build(PartitionOfUnity partition, DensityFunctional functional,
                                 const TolerancePolicy& policy = {});

  int dim() const { return partition_.dim(); }
  int atom_count() const { return partition_.atom_count(); }
  const PartitionOfUnity& partition() const { return partition_; }
  const DensityFunctional& functional() const { return functional_; }
  const AtomicMeasure& measure() const { return measure_; }
  /// rho * p_j, cached for the trace formulas.
  const Matrix& weighted_atom(int j) const { return rho_atoms_[static_cast<std::size_t>(j)]; }

  /// phi(x) = tr(rho x).
  Complex functional_apply(const Matrix& x) const;

  /// Phi(x)(j) = tr(rho p_j x) / mu(j) on supported atoms.
  CondExpValue cond_expect(const Matrix& x) const;

  /// Max over supported atoms of the three-way deviation between Phi(xy),
  /// Phi(yx) and Phi(x) y_j for y = sum_j y_j p_j.
  double module_property_check(const Matrix& x, std::span<const Complex> y_coeffs) const;

 private:
  SubalgebraContext(PartitionOfUnity partition, DensityFunctional functional);
  PartitionOfUnity partition_;
  DensityFunctional functional_;
  AtomicMeasure measure_;
  std::vector<Matrix> rho_atoms_;
};

/// The two-point context of a vector state: rho = I, partition {P, 1 - P}
/// with P the projection onto xi ({P} alone when dim = 1). Phi(x)(0) = (x xi | xi).
SubalgebraContext vector_state_subalgebra(const StateVector& xi,
                                          const TolerancePolicy& policy = {});

}  // namespace opjensen
