#pragma once

#include "opjensen/expectation.hpp"
#include "opjensen/fields.hpp"
#include "opjensen/jointspec.hpp"
#include "opjensen/linalg.hpp"
#include "opjensen/rng.hpp"

namespace opjensen {

/// d x d matrix with independent complex-Gaussian entries.
Matrix random_gaussian(int d, Rng& rng);

/// Random Hermitian matrix (symmetrized Gaussian, entries O(1)).
HermitianMatrix random_hermitian(int d, Rng& rng);

/// QR of a complex Gaussian with column phases normalized.
Matrix haar_unitary(int d, Rng& rng);

StateVector random_state(int d, Rng& rng);

/// Commuting tuple from a shared random eigenbasis: x_i = u diag(lambda_i) u*
/// with lambda_i sampled uniformly in the i-th cube interval.
AbelianTuple random_abelian_tuple(int d, const CubeDomain& dom, Rng& rng,
                                  const TolerancePolicy& policy = {});

/// Partition into k projections whose ranks are a random composition of d.
PartitionOfUnity random_partition(int d, int k, Rng& rng, const TolerancePolicy& policy = {});

/// Context with a random partition and a random PSD density that is
/// block-diagonal across the partition, hence in its centralizer.
SubalgebraContext random_context(int d, int k, Rng& rng, const TolerancePolicy& policy = {});

/// Unital column field a_t = g_t (sum nu_t g_t* g_t)^(-1/2) for Gaussian g_t.
DiscreteField random_unital_field(int d, int atoms, Rng& rng,
                                  const TolerancePolicy& policy = {});

TupleField random_tuple_field(int d, int n, int atoms, const CubeDomain& dom, Rng& rng,
                              const TolerancePolicy& policy = {});

}  // namespace opjensen
