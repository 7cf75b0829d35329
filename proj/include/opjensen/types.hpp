#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace opjensen {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Bad input: wrong shapes, violated structural invariants, malformed files.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to reach its required residual.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A scalar function was evaluated outside its natural domain.
struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Tolerances shared by every module. All bounds are relative to
/// max(1, relevant norm) unless stated otherwise.
struct TolerancePolicy {
  double herm_tol = 1e-10;
  double commute_tol = 1e-10;
  double eig_residual_tol = 1e-10;
  double ineq_atol = 1e-9;
  double ineq_rtol = 1e-9;
  double cluster_tol = 1e-8;
};

// fixed constants, not per-run knobs
inline constexpr double kNormTol = 1e-10;        // unit-vector check
inline constexpr double kPsdTol = 1e-10;         // density positivity check
inline constexpr double kUnitalTolScale = 1e-9;  // unital residual bound is this * sqrt(dim)
inline constexpr double kNullAtomRel = 1e-12;    // null atom cut is this * tr(rho)
inline constexpr double kProbeTolRel = 1e-9;     // midpoint probe slack per unit of local scale
inline constexpr double kEvalGuard = 1e-300;     // smallest legal divisor magnitude

inline constexpr const char* kToolVersion = "opjensen 0.1.0";

}  // namespace opjensen
