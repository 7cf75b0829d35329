#include "opjensen/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "opjensen/cli.hpp"
#include "opjensen/convexfn.hpp"
#include "opjensen/expectation.hpp"
#include "opjensen/fields.hpp"
#include "opjensen/io.hpp"
#include "opjensen/jensen.hpp"
#include "opjensen/jointspec.hpp"
#include "opjensen/linalg.hpp"
#include "opjensen/randomgen.hpp"
#include "opjensen/rng.hpp"

namespace opjensen {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t salt(const std::string& name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

long scaled(long base, const SelftestConfig& cfg) {
  return std::max(1L, std::lround(static_cast<double>(base) * cfg.scale));
}

/// Common harness: per-trial deviation, pass iff max deviation <= bound.
template <typename Fn>
SuiteResult bounded_suite(const std::string& name, long base_trials, double bound,
                          const SelftestConfig& cfg, Fn&& trial) {
  const long trials = scaled(base_trials, cfg);
  std::vector<double> devs(static_cast<std::size_t>(trials), 0.0);
  std::vector<std::string> errors(static_cast<std::size_t>(trials));
  for_each_index(trials, cfg.mode, [&](std::int64_t i) {
    Rng rng = Rng::substream(cfg.seed ^ salt(name), static_cast<std::uint64_t>(i));
    try {
      devs[static_cast<std::size_t>(i)] = trial(rng, i);
    } catch (const std::exception& e) {
      devs[static_cast<std::size_t>(i)] = kInf;
      errors[static_cast<std::size_t>(i)] = e.what();
    }
  });
  SuiteResult r{name, trials, 0.0, bound, true, ""};
  for (long i = 0; i < trials; ++i) {
    const double d = devs[static_cast<std::size_t>(i)];
    if (d > r.max_dev || (std::isinf(d) && r.pass)) r.max_dev = std::max(r.max_dev, d);
    if (d > bound && r.pass) {
      r.pass = false;
      std::ostringstream os;
      os << "trial " << i << " (seed " << cfg.seed << ")";
      if (!errors[static_cast<std::size_t>(i)].empty())
        os << ": " << errors[static_cast<std::size_t>(i)];
      r.detail = os.str();
    }
  }
  return r;
}

// ---- shared generators ----

std::string format_coeff(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", std::fabs(v));
  return buf;
}

/// Random polynomial in the expression grammar, total degree <= max_deg.
std::string random_poly_text(int n, int max_terms, int max_deg, Rng& rng) {
  const int terms = rng.uniform_int(1, max_terms);
  std::ostringstream os;
  for (int t = 0; t < terms; ++t) {
    const double c = rng.uniform(-2.0, 2.0);
    std::vector<int> deg(static_cast<std::size_t>(n));
    int total;
    do {
      total = 0;
      for (int i = 0; i < n; ++i) {
        deg[static_cast<std::size_t>(i)] = rng.uniform_int(0, max_deg);
        total += deg[static_cast<std::size_t>(i)];
      }
    } while (total > max_deg);
    if (t == 0)
      os << (c < 0 ? "-" : "");
    else
      os << (c < 0 ? " - " : " + ");
    os << format_coeff(c);
    for (int i = 0; i < n; ++i)
      if (deg[static_cast<std::size_t>(i)] > 0)
        os << "*x" << i + 1 << "^" << deg[static_cast<std::size_t>(i)];
  }
  return os.str();
}

Matrix matrix_power(const Matrix& x, int k) {
  Matrix acc = Matrix::Identity(x.rows(), x.cols());
  for (int i = 0; i < k; ++i) acc = acc * x;
  return acc;
}

CubeDomain square_cube(int n, double lo, double hi) {
  std::vector<CubeDomain::Interval> iv(static_cast<std::size_t>(n), {lo, hi});
  return CubeDomain(iv);
}

const std::vector<std::string>& convex_entries() {
  static const std::vector<std::string> entries = {
      "quadratic_form", "log_sum_exp", "max_coord", "p_norm",
      "exp_coord",      "neg_entropy", "power_abs"};
  return entries;
}

CubeDomain entry_cube(const std::string& name, int n) {
  if (name == "neg_entropy") return square_cube(n, 0.05, 4.0);
  return square_cube(n, -2.0, 2.0);
}

ScalarFunction pick_catalog(const std::string& name, int n, Rng& rng) {
  CatalogParams params;
  if (name == "p_norm" || name == "power_abs") params.p = 1.0 + rng.uniform(0.0, 2.0);
  if (name == "exp_coord" || name == "cube_coord" || name == "sin_coord")
    params.index = rng.uniform_int(1, n);
  if (name == "quadratic_form") {
    RealMatrix g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
    params.quadratic = g.transpose() * g / static_cast<double>(n);
    params.linear = RealVector(n);
    for (int i = 0; i < n; ++i) params.linear(i) = rng.uniform(-1.0, 1.0);
    params.constant = rng.uniform(-1.0, 1.0);
  }
  return ScalarFunction::catalog(name, params, n);
}

struct RandomInstance {
  JensenInstance inst;
  CubeDomain dom;
};

RandomInstance random_catalog_instance(const std::string& name, Rng& rng) {
  const int d = rng.uniform_int(2, 8);
  const int n = rng.uniform_int(1, 3);
  const int atoms = rng.uniform_int(1, 5);
  const int k = rng.uniform_int(1, d);
  CubeDomain dom = entry_cube(name, n);
  auto ctx = random_context(d, k, rng);
  auto field = random_unital_field(d, atoms, rng);
  auto tuples = random_tuple_field(d, n, atoms, dom, rng);
  ScalarFunction f = pick_catalog(name, n, rng);
  return {JensenInstance::validate(std::move(ctx), std::move(field), std::move(tuples),
                                   std::move(f)),
          dom};
}

CheckOptions quiet_opts() {
  CheckOptions opts;
  opts.with_probe = false;
  opts.mode = ExecMode::serial;
  return opts;
}

/// Normalized violation of a report: how far past tolerance any atom went
/// (0 when the verdict passes with slack).
double report_violation(const JensenReport& rep, const TolerancePolicy& policy) {
  double v = 0.0;
  for (const auto& a : rep.atoms) {
    const double budget = policy.ineq_atol + policy.ineq_rtol * std::max(1.0, std::fabs(a.rhs));
    v = std::max(v, -a.margin / budget);
  }
  return v;
}

double mass_violation(const JensenReport& rep) {
  double v = 0.0;
  for (const auto& a : rep.atoms) {
    double sum = 0.0;
    double mn = 0.0;
    for (double w : a.point_masses) {
      sum += w;
      mn = std::min(mn, w);
    }
    v = std::max(v, std::fabs(sum - 1.0) / 1e-9);
    v = std::max(v, -mn / 1e-10);
  }
  return v;
}

// ---- the suites ----

SuiteResult linalg_eig_reconstruction(const SelftestConfig& cfg) {
  return bounded_suite("linalg.eig_reconstruction", 1000, 1e-10, cfg,
                       [](Rng& rng, std::int64_t) {
    const int d = rng.uniform_int(1, 32);
    const HermitianMatrix h = random_hermitian(d, rng);
    const EigResult e = eig_hermitian(h);
    const Matrix back =
        e.u * e.eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>() * e.u.adjoint();
    return (back - h.mat()).norm() / std::max(1.0, h.fnorm());
  });
}

SuiteResult linalg_spectral_invariants(const SelftestConfig& cfg) {
  return bounded_suite("linalg.spectral_invariants", 500, 1.0, cfg, [](Rng& rng, std::int64_t) {
    const int d = rng.uniform_int(1, 24);
    const HermitianMatrix h = random_hermitian(d, rng);
    const EigResult e = eig_hermitian(h);
    const double tr = h.mat().trace().real();
    const double sum_dev =
        std::fabs(e.eigenvalues.sum() - tr) / (1e-9 * std::max(1.0, std::fabs(tr)));
    const Matrix v = haar_unitary(d, rng);
    const EigResult e2 = eig_hermitian(HermitianMatrix(v * h.mat() * v.adjoint()));
    const double conj_dev = (e.eigenvalues - e2.eigenvalues).cwiseAbs().maxCoeff() /
                            (1e-9 * std::max(1.0, h.fnorm()));
    return std::max(sum_dev, conj_dev);
  });
}

SuiteResult linalg_inner_real(const SelftestConfig& cfg) {
  return bounded_suite("linalg.inner_real", 500, 1e-12, cfg, [](Rng& rng, std::int64_t) {
    const int d = rng.uniform_int(1, 24);
    const HermitianMatrix h = random_hermitian(d, rng);
    const StateVector xi = random_state(d, rng);
    const Complex v = operator_inner(h.mat(), xi);
    return std::fabs(v.imag()) / std::max(1.0, std::fabs(v.real()));
  });
}

SuiteResult jointspec_monomial_oracle(const SelftestConfig& cfg) {
  return bounded_suite("jointspec.monomial_oracle", 200, 1e-8, cfg, [](Rng& rng, std::int64_t) {
    const int d = rng.uniform_int(2, 16);
    const int n = rng.uniform_int(1, 3);
    const CubeDomain dom = square_cube(n, -2.0, 2.0);
    const AbelianTuple tuple = random_abelian_tuple(d, dom, rng);
    std::vector<int> e(static_cast<std::size_t>(n));
    int total;
    do {
      total = 0;
      for (int i = 0; i < n; ++i) {
        e[static_cast<std::size_t>(i)] = rng.uniform_int(0, 4);
        total += e[static_cast<std::size_t>(i)];
      }
    } while (total > 4);
    std::ostringstream text;
    for (int i = 0; i < n; ++i) {
      if (i) text << "*";
      text << "x" << i + 1 << "^" << e[static_cast<std::size_t>(i)];
    }
    const ScalarFunction f = ScalarFunction::parse(text.str(), n);
    const Matrix lhs = apply_function(f, tuple, dom).mat();
    Matrix oracle = Matrix::Identity(d, d);
    for (int i = 0; i < n; ++i)
      oracle = oracle * matrix_power(tuple.member(i).mat(), e[static_cast<std::size_t>(i)]);
    return (lhs - oracle).norm() / std::max(1.0, oracle.norm());
  });
}

SuiteResult jointspec_homomorphism(const SelftestConfig& cfg) {
  return bounded_suite("jointspec.homomorphism", 300, 1.0, cfg, [](Rng& rng, std::int64_t) {
    const int d = rng.uniform_int(2, 16);
    const int n = rng.uniform_int(1, 3);
    const CubeDomain dom = square_cube(n, -2.0, 2.0);
    const AbelianTuple tuple = random_abelian_tuple(d, dom, rng);
    const std::string ftext = random_poly_text(n, 3, 3, rng);
    const std::string gtext = random_poly_text(n, 3, 3, rng);
    const ScalarFunction f = ScalarFunction::parse(ftext, n);
    const ScalarFunction g = ScalarFunction::parse(gtext, n);
    const ScalarFunction fg = ScalarFunction::parse("(" + ftext + ")*(" + gtext + ")", n);
    const ScalarFunction fplusg = ScalarFunction::parse("(" + ftext + ")+(" + gtext + ")", n);
    const Matrix mf = apply_function(f, tuple, dom).mat();
    const Matrix mg = apply_function(g, tuple, dom).mat();
    const Matrix mfg = apply_function(fg, tuple, dom).mat();
    const Matrix msum = apply_function(fplusg, tuple, dom).mat();
    const double prod_dev =
        (mfg - mf * mg).norm() / (1e-8 * std::max(1.0, (mf * mg).norm()));
    const double sum_dev =
        (msum - (mf + mg)).norm() / (1e-9 * std::max(1.0, (mf + mg).norm()));
    return std::max(prod_dev, sum_dev);
  });
}

SuiteResult jointspec_unitary_covariance(const SelftestConfig& cfg) {
  return bounded_suite("jointspec.unitary_covariance", 200, 1e-9, cfg,
                       [](Rng& rng, std::int64_t) {
    const int d = rng.uniform_int(2, 12);
    const int n = rng.uniform_int(1, 3);
    const CubeDomain dom = square_cube(n, -2.0, 2.0);
    const AbelianTuple tuple = random_abelian_tuple(d, dom, rng);
    const ScalarFunction f = ScalarFunction::parse(random_poly_text(n, 3, 3, rng), n);
    const Matrix v = haar_unitary(d, rng);
    std::vector<HermitianMatrix> conj;
    for (int i = 0; i < n; ++i) conj.emplace_back(v * tuple.member(i).mat() * v.adjoint());
    const AbelianTuple conj_tuple = AbelianTuple::validate(std::move(conj));
    const Matrix lhs = apply_function(f, conj_tuple, dom).mat();
    const Matrix rhs = v * apply_function(f, tuple, dom).mat() * v.adjoint();
    return (lhs - rhs).norm() / std::max(1.0, rhs.norm());
  });
}

SuiteResult jointspec_spectral_containment(const SelftestConfig& cfg) {
  return bounded_suite("jointspec.spectral_containment", 200, 1e-9, cfg,
                       [](Rng& rng, std::int64_t) {
    const int d = rng.uniform_int(2, 12);
    const int n = rng.uniform_int(1, 3);
    const CubeDomain dom = square_cube(n, -2.0, 2.0);
    const AbelianTuple tuple = random_abelian_tuple(d, dom, rng);
    const ScalarFunction f = ScalarFunction::parse(random_poly_text(n, 3, 3, rng), n);
    const JointSpectrum js = joint_diagonalize(tuple);
    double fmin = kInf, fmax = -kInf;
    std::vector<double> pt(static_cast<std::size_t>(n));
    for (int k = 0; k < d; ++k) {
      for (int i = 0; i < n; ++i) pt[static_cast<std::size_t>(i)] = js.table(k, i);
      const double v = f.eval(pt);
      fmin = std::min(fmin, v);
      fmax = std::max(fmax, v);
    }
    const EigResult e = eig_hermitian(apply_function(f, tuple, dom));
    const double scale = std::max({1.0, std::fabs(fmin), std::fabs(fmax)});
    const double below = (fmin - e.eigenvalues.minCoeff()) / scale;
    const double above = (e.eigenvalues.maxCoeff() - fmax) / scale;
    return std::max({0.0, below, above});
  });
}

SuiteResult jointspec_degenerate_residual(const SelftestConfig& cfg) {
  return bounded_suite("jointspec.degenerate_residual", 200, 1e-10, cfg,
                       [](Rng& rng, std::int64_t) {
    const int d = rng.uniform_int(4, 12);
    const Matrix u = haar_unitary(d, rng);
    // exactly repeated eigenvalues across two members plus a duplicate member
    const double vals1[2] = {rng.uniform(-2.0, 0.0), rng.uniform(0.5, 2.0)};
    const double vals2[3] = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0),
                             rng.uniform(-2.0, 2.0)};
    RealVector l1(d), l2(d);
    for (int k = 0; k < d; ++k) {
      l1(k) = vals1[rng.uniform_int(0, 1)];
      l2(k) = vals2[rng.uniform_int(0, 2)];
    }
    std::vector<HermitianMatrix> members;
    members.emplace_back(u * l1.asDiagonal().toDenseMatrix().cast<Complex>() * u.adjoint());
    members.emplace_back(u * l2.asDiagonal().toDenseMatrix().cast<Complex>() * u.adjoint());
    members.push_back(members.back());  // duplicated member
    const AbelianTuple tuple = AbelianTuple::validate(members);
    const JointSpectrum js = joint_diagonalize(tuple);
    double dev = 0.0;
    for (int i = 0; i < tuple.arity(); ++i) {
      const Matrix& x = tuple.member(i).mat();
      const Matrix lam = js.table.col(i).asDiagonal().toDenseMatrix().cast<Complex>();
      dev = std::max(dev, (x * js.u - js.u * lam).norm() /
                              std::max(1.0, tuple.member(i).fnorm()));
    }
    // duplicated member must get identical joint coordinates
    dev = std::max(dev, (js.table.col(1) - js.table.col(2)).cwiseAbs().maxCoeff());
    return dev;
  });
}

SuiteResult expectation_adjointness(const SelftestConfig& cfg) {
  return bounded_suite("expectation.adjointness", 1000, 1e-10, cfg, [](Rng& rng, std::int64_t) {
    const int d = rng.uniform_int(1, 16);
    const int k = rng.uniform_int(1, d);
    const SubalgebraContext ctx = random_context(d, k, rng);
    const Matrix x = random_gaussian(d, rng);
    const CondExpValue phi = ctx.cond_expect(x);
    const double rho_norm = ctx.functional().rho().norm();
    double dev = 0.0;
    // z ranging over every partition atom
    for (int m = 0; m < k; ++m) {
      const Complex lhs = ctx.measure().supported[static_cast<std::size_t>(m)]
                              ? phi.values[static_cast<std::size_t>(m)] *
                                    ctx.measure().weights[static_cast<std::size_t>(m)]
                              : Complex{0.0, 0.0};
      const Complex rhs = (ctx.weighted_atom(m) * x).trace();
      const double scale =
          std::max(1.0, x.norm() * ctx.partition().atom(m).norm() * rho_norm);
      dev = std::max(dev, std::abs(lhs - rhs) / scale);
    }
    // and one random z in the subalgebra
    Matrix z = Matrix::Zero(d, d);
    Complex lhs_sum{0.0, 0.0};
    double znorm_sq = 0.0;
    for (int m = 0; m < k; ++m) {
      const Complex c = rng.cnormal();
      z += c * ctx.partition().atom(m);
      if (ctx.measure().supported[static_cast<std::size_t>(m)])
        lhs_sum += c * phi.values[static_cast<std::size_t>(m)] *
                   ctx.measure().weights[static_cast<std::size_t>(m)];
      znorm_sq += std::norm(c);
    }
    const Complex rhs_sum = ctx.functional_apply(z * x);
    const double scale = std::max(1.0, x.norm() * std::sqrt(znorm_sq) * rho_norm);
    return std::max(dev, std::abs(lhs_sum - rhs_sum) / scale);
  });
}

SuiteResult expectation_positivity(const SelftestConfig& cfg) {
  return bounded_suite("expectation.positivity", 500, 1e-10, cfg, [](Rng& rng, std::int64_t) {
    const int d = rng.uniform_int(1, 16);
    const int k = rng.uniform_int(1, d);
    const SubalgebraContext ctx = random_context(d, k, rng);
    const Matrix g = random_gaussian(d, rng);
    const Matrix x = g * g.adjoint();
    const CondExpValue phi = ctx.cond_expect(x);
    double dev = 0.0;
    for (int m = 0; m < k; ++m) {
      if (!phi.supported[static_cast<std::size_t>(m)]) continue;
      dev = std::max(dev, -phi.values[static_cast<std::size_t>(m)].real() / x.norm());
    }
    return dev;
  });
}

SuiteResult expectation_unit_restriction(const SelftestConfig& cfg) {
  return bounded_suite("expectation.unit_restriction", 500, 1e-10, cfg,
                       [](Rng& rng, std::int64_t) {
    const int d = rng.uniform_int(1, 16);
    const int k = rng.uniform_int(1, d);
    const SubalgebraContext ctx = random_context(d, k, rng);
    const CondExpValue one = ctx.cond_expect(Matrix::Identity(d, d));
    std::vector<Complex> coeffs(static_cast<std::size_t>(k));
    Matrix z = Matrix::Zero(d, d);
    for (int m = 0; m < k; ++m) {
      coeffs[static_cast<std::size_t>(m)] = rng.cnormal();
      z += coeffs[static_cast<std::size_t>(m)] * ctx.partition().atom(m);
    }
    const CondExpValue phi_z = ctx.cond_expect(z);
    double dev = 0.0;
    for (int m = 0; m < k; ++m) {
      if (!one.supported[static_cast<std::size_t>(m)]) continue;
      dev = std::max(dev, std::abs(one.values[static_cast<std::size_t>(m)] - Complex{1.0, 0.0}));
      dev = std::max(dev, std::abs(phi_z.values[static_cast<std::size_t>(m)] -
                                   coeffs[static_cast<std::size_t>(m)]) /
                              std::max(1.0, std::abs(coeffs[static_cast<std::size_t>(m)])));
    }
    return dev;
  });
}

SuiteResult expectation_bimodule(const SelftestConfig& cfg) {
  return bounded_suite("expectation.bimodule", 500, 1e-10, cfg, [](Rng& rng, std::int64_t) {
    const int d = rng.uniform_int(1, 16);
    const int k = rng.uniform_int(1, d);
    const SubalgebraContext ctx = random_context(d, k, rng);
    const Matrix x = random_gaussian(d, rng);
    std::vector<Complex> coeffs(static_cast<std::size_t>(k));
    double cmax = 0.0;
    for (int m = 0; m < k; ++m) {
      coeffs[static_cast<std::size_t>(m)] = rng.cnormal();
      cmax = std::max(cmax, std::abs(coeffs[static_cast<std::size_t>(m)]));
    }
    const double dev = ctx.module_property_check(x, coeffs);
    return dev / std::max(1.0, x.norm() * cmax);
  });
}

SuiteResult expectation_centralizer_rejection(const SelftestConfig& cfg) {
  return bounded_suite("expectation.centralizer_rejection", 50, 0.0, cfg,
                       [](Rng& rng, std::int64_t) {
    const int d = rng.uniform_int(2, 10);
    const int k = rng.uniform_int(2, d);
    auto partition = random_partition(d, k, rng);
    const Matrix g = random_gaussian(d, rng);
    auto rho = DensityFunctional::validate(HermitianMatrix(g * g.adjoint()));
    try {
      SubalgebraContext::build(std::move(partition), std::move(rho));
    } catch (const ValidationError&) {
      return 0.0;  // expected: generic rho is not in the centralizer
    }
    return kInf;
  });
}

SuiteResult expectation_linearity(const SelftestConfig& cfg) {
  return bounded_suite("expectation.linearity", 500, 1e-12, cfg, [](Rng& rng, std::int64_t) {
    const int d = rng.uniform_int(1, 16);
    const int k = rng.uniform_int(1, d);
    const SubalgebraContext ctx = random_context(d, k, rng);
    const Matrix x = random_gaussian(d, rng);
    const Matrix y = random_gaussian(d, rng);
    const Complex a = rng.cnormal();
    const Complex b = rng.cnormal();
    const CondExpValue lhs = ctx.cond_expect(a * x + b * y);
    const CondExpValue px = ctx.cond_expect(x);
    const CondExpValue py = ctx.cond_expect(y);
    double dev = 0.0;
    const double scale = std::max(1.0, std::abs(a) * x.norm() + std::abs(b) * y.norm());
    for (int m = 0; m < k; ++m) {
      if (!lhs.supported[static_cast<std::size_t>(m)]) continue;
      dev = std::max(dev, std::abs(lhs.values[static_cast<std::size_t>(m)] -
                                   a * px.values[static_cast<std::size_t>(m)] -
                                   b * py.values[static_cast<std::size_t>(m)]) /
                              scale);
    }
    return dev;
  });
}

SuiteResult fields_transform_linearity(const SelftestConfig& cfg) {
  return bounded_suite("fields.transform_linearity", 200, 1e-10, cfg, [](Rng& rng, std::int64_t) {
    const int d = rng.uniform_int(2, 8);
    const int n = rng.uniform_int(1, 3);
    const int atoms = rng.uniform_int(1, 5);
    const CubeDomain dom = square_cube(n, -2.0, 2.0);
    const DiscreteField field = random_unital_field(d, atoms, rng);
    const TupleField tuples = random_tuple_field(d, n, atoms, dom, rng);
    const std::string ftext = random_poly_text(n, 3, 3, rng);
    const std::string gtext = random_poly_text(n, 3, 3, rng);
    const double a = rng.uniform(-2.0, 2.0);
    const double b = rng.uniform(-2.0, 2.0);
    std::ostringstream combo;
    combo << (a < 0 ? "-" : "") << format_coeff(a) << "*(" << ftext << ") "
          << (b < 0 ? "-" : "+") << " " << format_coeff(b) << "*(" << gtext << ")";
    const Matrix tf = transform(field, tuples, ScalarFunction::parse(ftext, n), dom).mat();
    const Matrix tg = transform(field, tuples, ScalarFunction::parse(gtext, n), dom).mat();
    const Matrix tc = transform(field, tuples, ScalarFunction::parse(combo.str(), n), dom).mat();
    const Matrix expect = a * tf + b * tg;
    return (tc - expect).norm() / std::max(1.0, expect.norm());
  });
}

SuiteResult fields_affine_reproduction(const SelftestConfig& cfg) {
  return bounded_suite("fields.affine_reproduction", 200, 1e-10, cfg, [](Rng& rng, std::int64_t) {
    const int d = rng.uniform_int(2, 8);
    const int n = rng.uniform_int(1, 3);
    const int atoms = rng.uniform_int(1, 5);
    const CubeDomain dom = square_cube(n, -2.0, 2.0);
    const DiscreteField field = random_unital_field(d, atoms, rng);
    const TupleField tuples = random_tuple_field(d, n, atoms, dom, rng);
    const double c0 = rng.uniform(-2.0, 2.0);
    std::vector<double> ci(static_cast<std::size_t>(n));
    std::ostringstream text;
    text << (c0 < 0 ? "-" : "") << format_coeff(c0);
    for (int i = 0; i < n; ++i) {
      ci[static_cast<std::size_t>(i)] = rng.uniform(-2.0, 2.0);
      text << (ci[static_cast<std::size_t>(i)] < 0 ? " - " : " + ")
           << format_coeff(ci[static_cast<std::size_t>(i)]) << "*x" << i + 1;
    }
    const Matrix lhs = transform(field, tuples, ScalarFunction::parse(text.str(), n), dom).mat();
    const std::vector<HermitianMatrix> y = compress(field, tuples);
    Matrix rhs = c0 * Matrix::Identity(d, d);
    for (int i = 0; i < n; ++i)
      rhs += ci[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)].mat();
    return (lhs - rhs).norm() / std::max(1.0, rhs.norm());
  });
}

SuiteResult fields_norm_bound(const SelftestConfig& cfg) {
  return bounded_suite("fields.norm_bound", 200, 1e-9, cfg, [](Rng& rng, std::int64_t) {
    const int d = rng.uniform_int(2, 8);
    const int n = rng.uniform_int(1, 3);
    const int atoms = rng.uniform_int(1, 5);
    const CubeDomain dom = square_cube(n, -2.0, 2.0);
    const DiscreteField field = random_unital_field(d, atoms, rng);
    const TupleField tuples = random_tuple_field(d, n, atoms, dom, rng);
    const ScalarFunction f = ScalarFunction::parse(random_poly_text(n, 3, 3, rng), n);
    double fmax = 0.0;
    std::vector<double> pt(static_cast<std::size_t>(n));
    for (int t = 0; t < atoms; ++t) {
      const JointSpectrum js = joint_diagonalize(tuples.tuple(t));
      for (int k = 0; k < d; ++k) {
        for (int i = 0; i < n; ++i) pt[static_cast<std::size_t>(i)] = js.table(k, i);
        fmax = std::max(fmax, std::fabs(f.eval(pt)));
      }
    }
    const EigResult e = eig_hermitian(transform(field, tuples, f, dom));
    const double opnorm = e.eigenvalues.cwiseAbs().maxCoeff();
    return std::max(0.0, (opnorm - fmax) / std::max(1.0, fmax));
  });
}

SuiteResult fields_constants_reproduction(const SelftestConfig& cfg) {
  return bounded_suite("fields.constants_reproduction", 200, 1.0, cfg, [](Rng& rng, std::int64_t) {
    const int d = rng.uniform_int(2, 8);
    const int n = rng.uniform_int(1, 3);
    const int atoms = rng.uniform_int(1, 5);
    const CubeDomain dom = square_cube(n, -2.0, 2.0);
    const DiscreteField field = random_unital_field(d, atoms, rng);
    std::vector<double> c(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] = rng.uniform(-2.0, 2.0);
    std::vector<AbelianTuple> constant_tuples;
    for (int t = 0; t < atoms; ++t) {
      std::vector<HermitianMatrix> members;
      for (int i = 0; i < n; ++i)
        members.emplace_back(Matrix::Identity(d, d) * c[static_cast<std::size_t>(i)]);
      constant_tuples.push_back(AbelianTuple::validate(std::move(members)));
    }
    const TupleField tuples = TupleField::validate(std::move(constant_tuples), dom);
    const std::vector<HermitianMatrix> y = compress(field, tuples);
    double dev = 0.0;
    const double budget = unital_tol(d);
    for (int i = 0; i < n; ++i) {
      const Matrix expect = c[static_cast<std::size_t>(i)] * Matrix::Identity(d, d);
      dev = std::max(dev, (y[static_cast<std::size_t>(i)].mat() - expect).norm() /
                              (budget * std::max(1.0, std::fabs(c[static_cast<std::size_t>(i)]))));
    }
    return dev;
  });
}

SuiteResult fields_random_unitality(const SelftestConfig& cfg) {
  return bounded_suite("fields.random_unitality", 300, 1.0, cfg, [](Rng& rng, std::int64_t) {
    const int d = rng.uniform_int(2, 16);
    const int atoms = rng.uniform_int(1, 8);
    const DiscreteField field = random_unital_field(d, atoms, rng);
    return field.residual() / unital_tol(d);
  });
}

// random expression generator for the round-trip suite
std::string random_expr_text(int n, int depth, Rng& rng) {
  const int choice = depth <= 0 ? rng.uniform_int(0, 1) : rng.uniform_int(0, 7);
  switch (choice) {
    case 0: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.6g", rng.uniform(0.0, 4.0));
      return buf;
    }
    case 1: return "x" + std::to_string(rng.uniform_int(1, n));
    case 2: return "-" + random_expr_text(n, depth - 1, rng);
    case 3: {
      static const char* ops[] = {" + ", " - ", "*", "/"};
      return "(" + random_expr_text(n, depth - 1, rng) + ops[rng.uniform_int(0, 3)] +
             random_expr_text(n, depth - 1, rng) + ")";
    }
    case 4: {
      static const char* fns[] = {"exp", "abs", "sqrt", "log"};
      const char* fn = fns[rng.uniform_int(0, 3)];
      return std::string(fn) + "(" + random_expr_text(n, depth - 1, rng) + ")";
    }
    case 5: {
      const char* fn = rng.uniform_int(0, 1) ? "max" : "min";
      const int args = rng.uniform_int(2, 3);
      std::string s = std::string(fn) + "(";
      for (int i = 0; i < args; ++i) {
        if (i) s += ", ";
        s += random_expr_text(n, depth - 1, rng);
      }
      return s + ")";
    }
    case 6: return "(" + random_expr_text(n, depth - 1, rng) + ")^" +
                   std::to_string(rng.uniform_int(0, 4));
    default: return "x" + std::to_string(rng.uniform_int(1, n));
  }
}

SuiteResult convexfn_roundtrip(const SelftestConfig& cfg) {
  return bounded_suite("convexfn.roundtrip", 50, 0.0, cfg, [](Rng& rng, std::int64_t) {
    const int n = rng.uniform_int(1, 3);
    const std::string text = random_expr_text(n, 3, rng);
    const ScalarFunction f1 = ScalarFunction::parse(text, n);
    const ScalarFunction f2 = ScalarFunction::parse(f1.to_string(), n);
    std::vector<double> pt(static_cast<std::size_t>(n));
    for (int trial = 0; trial < 100; ++trial) {
      for (int i = 0; i < n; ++i) pt[static_cast<std::size_t>(i)] = rng.uniform(-3.0, 3.0);
      double v1 = 0.0, v2 = 0.0;
      bool e1 = false, e2 = false;
      try {
        v1 = f1.eval(pt);
      } catch (const EvalError&) {
        e1 = true;
      }
      try {
        v2 = f2.eval(pt);
      } catch (const EvalError&) {
        e2 = true;
      }
      if (e1 != e2) return kInf;
      if (!e1 && v1 != v2) return std::fabs(v1 - v2);
    }
    return 0.0;
  });
}

SuiteResult convexfn_probe_soundness(const SelftestConfig& cfg) {
  struct Case {
    const char* ftext;
    const char* catalog;
    int n;
    double lo, hi;
  };
  static const Case cases[] = {
      {"x1*x2", nullptr, 2, -1.0, 1.0},      {"x1^3", nullptr, 1, -2.0, 2.0},
      {nullptr, "sin_coord", 1, -4.0, 4.0},  {nullptr, "cube_coord", 1, -2.0, 2.0},
      {nullptr, "product_coords", 2, -1.0, 1.0},
  };
  const long samples = std::max(100L, scaled(10000, cfg));
  return bounded_suite("convexfn.probe_soundness", 5, 0.0, cfg, [&](Rng&, std::int64_t i) {
    const Case& c = cases[i];
    const CubeDomain dom = square_cube(c.n, c.lo, c.hi);
    const ScalarFunction f = c.ftext ? ScalarFunction::parse(c.ftext, c.n)
                                     : ScalarFunction::catalog(c.catalog, {}, c.n);
    const ConvexityVerdict v =
        midpoint_convexity_probe(f, dom, samples, 11, ExecMode::serial);
    if (v.status != ConvexityStatus::not_convex || !v.witness) return kInf;
    // witness must re-validate with margin above half the probe slack
    const auto& w = *v.witness;
    std::vector<double> mid(w.a.size());
    for (std::size_t j = 0; j < w.a.size(); ++j) mid[j] = 0.5 * (w.a[j] + w.b[j]);
    const double fa = f.eval(w.a);
    const double fb = f.eval(w.b);
    const double fm = f.eval(mid);
    const double tol = kProbeTolRel * (1.0 + std::max({std::fabs(fa), std::fabs(fb), std::fabs(fm)}));
    const double gap = fm - 0.5 * (fa + fb);
    return gap > tol / 2.0 ? 0.0 : kInf;
  });
}

SuiteResult convexfn_catalog_convex(const SelftestConfig& cfg) {
  const long samples = std::max(100L, scaled(10000, cfg));
  const long cases = static_cast<long>(convex_entries().size()) * 3;
  return bounded_suite("convexfn.catalog_convex", cases, 0.0, cfg, [&](Rng& rng, std::int64_t i) {
    const std::string& name = convex_entries()[static_cast<std::size_t>(i) / 3];
    const int n = static_cast<int>(i % 3) + 1;
    const ScalarFunction f = pick_catalog(name, n, rng);
    const CubeDomain dom = entry_cube(name, n);
    const ConvexityVerdict v = midpoint_convexity_probe(
        f, dom, samples, 1000 + static_cast<std::uint64_t>(i), ExecMode::serial);
    return v.status == ConvexityStatus::probably_convex ? 0.0 : kInf;
  });
}

SuiteResult jensen_convex_suite(const SelftestConfig& cfg) {
  const long per_entry = scaled(500, cfg);
  const long entries = static_cast<long>(convex_entries().size());
  return bounded_suite("jensen.convex_suite", per_entry * entries, 1.0, cfg,
                       [&](Rng& rng, std::int64_t i) {
    const std::string& name = convex_entries()[static_cast<std::size_t>(i / per_entry)];
    const RandomInstance ri = random_catalog_instance(name, rng);
    const JensenReport rep = check_conditional(ri.inst, quiet_opts());
    return std::max(report_violation(rep, quiet_opts().policy), mass_violation(rep));
  });
}

SuiteResult jensen_corollary_consistency(const SelftestConfig& cfg) {
  return bounded_suite("jensen.corollary_consistency", 200, 1e-10, cfg,
                       [](Rng& rng, std::int64_t i) {
    const std::string& name =
        convex_entries()[static_cast<std::size_t>(i) % convex_entries().size()];
    const int d = rng.uniform_int(2, 8);
    const int n = rng.uniform_int(1, 3);
    const int atoms = rng.uniform_int(1, 5);
    const CubeDomain dom = entry_cube(name, n);
    const DiscreteField field = random_unital_field(d, atoms, rng);
    const TupleField tuples = random_tuple_field(d, n, atoms, dom, rng);
    const ScalarFunction f = pick_catalog(name, n, rng);
    const StateVector xi = random_state(d, rng);

    const JensenReport ev = check_expectation_values(field, tuples, f, dom, xi, quiet_opts());
    const SubalgebraContext ctx = vector_state_subalgebra(xi);
    const JensenInstance inst = JensenInstance::validate(ctx, field, tuples, f);
    const JensenReport cond = check_conditional(inst, quiet_opts());

    const AtomCheck& at0 = cond.atoms.front();
    const AtomCheck& ev0 = ev.atoms.front();
    const double scale = std::max({1.0, std::fabs(ev0.lhs), std::fabs(ev0.rhs)});
    return std::max(std::fabs(at0.lhs - ev0.lhs), std::fabs(at0.rhs - ev0.rhs)) / scale;
  });
}

SuiteResult jensen_mond_pecaric_identity(const SelftestConfig& cfg) {
  return bounded_suite("jensen.mond_pecaric_identity", 200, 0.0, cfg,
                       [](Rng& rng, std::int64_t i) {
    const std::string& name =
        convex_entries()[static_cast<std::size_t>(i) % convex_entries().size()];
    const int d = rng.uniform_int(2, 8);
    const int n = rng.uniform_int(1, 3);
    const CubeDomain dom = entry_cube(name, n);
    const AbelianTuple tuple = random_abelian_tuple(d, dom, rng);
    const ScalarFunction f = pick_catalog(name, n, rng);
    const StateVector xi = random_state(d, rng);

    const JensenReport mp = check_mond_pecaric(tuple, xi, f, dom, quiet_opts());
    const DiscreteField trivial = DiscreteField::trivial({1.0}, d);
    const TupleField tuples = TupleField::validate({tuple}, dom);
    const JensenReport ev = check_expectation_values(trivial, tuples, f, dom, xi, quiet_opts());

    const AtomCheck& a = mp.atoms.front();
    const AtomCheck& b = ev.atoms.front();
    if (a.lhs != b.lhs || a.rhs != b.rhs || a.margin != b.margin) return kInf;
    if (a.point_masses.size() != b.point_masses.size()) return kInf;
    for (std::size_t j = 0; j < a.point_masses.size(); ++j)
      if (a.point_masses[j] != b.point_masses[j]) return kInf;
    return 0.0;
  });
}

SuiteResult jensen_direct_sum_routes(const SelftestConfig& cfg) {
  return bounded_suite("jensen.direct_sum_routes", 100, 1e-10, cfg, [](Rng& rng, std::int64_t i) {
    const std::string& name =
        convex_entries()[static_cast<std::size_t>(i) % convex_entries().size()];
    const int blocks = rng.uniform_int(1, 3);
    const int n = rng.uniform_int(1, 3);
    const CubeDomain dom = entry_cube(name, n);
    const ScalarFunction f = pick_catalog(name, n, rng);

    std::vector<AbelianTuple> tuples;
    std::vector<Vector> vectors;
    double norm2 = 0.0;
    for (int j = 0; j < blocks; ++j) {
      const int d = rng.uniform_int(2, 4);
      tuples.push_back(random_abelian_tuple(d, dom, rng));
      Vector v(d);
      for (int t = 0; t < d; ++t) v(t) = rng.cnormal();
      vectors.push_back(v);
      norm2 += v.squaredNorm();
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& v : vectors) v *= inv;

    const JensenReport rep = check_direct_sum(tuples, vectors, f, dom, quiet_opts());
    const AtomCheck& a = rep.atoms.front();
    const double scale = std::max({1.0, std::fabs(a.lhs), std::fabs(a.rhs)});
    return rep.route_deviation / scale;
  });
}

ScalarFunction random_affine(int n, Rng& rng) {
  CatalogParams params;
  params.quadratic = RealMatrix::Zero(n, n);
  params.linear = RealVector(n);
  for (int i = 0; i < n; ++i) params.linear(i) = rng.uniform(-2.0, 2.0);
  params.constant = rng.uniform(-2.0, 2.0);
  return ScalarFunction::catalog("quadratic_form", params, n);
}

SuiteResult jensen_affine_equality(const SelftestConfig& cfg) {
  return bounded_suite("jensen.affine_equality", 100, 1e-9, cfg, [](Rng& rng, std::int64_t) {
    const int d = rng.uniform_int(2, 8);
    const int n = rng.uniform_int(1, 3);
    const int atoms = rng.uniform_int(1, 5);
    const CubeDomain dom = square_cube(n, -2.0, 2.0);
    const ScalarFunction f = random_affine(n, rng);
    const SubalgebraContext ctx = random_context(d, rng.uniform_int(1, d), rng);
    const DiscreteField field = random_unital_field(d, atoms, rng);
    const TupleField tuples = random_tuple_field(d, n, atoms, dom, rng);
    const StateVector xi = random_state(d, rng);

    double dev = 0.0;
    const JensenReport cond =
        check_conditional(JensenInstance::validate(ctx, field, tuples, f), quiet_opts());
    for (const auto& a : cond.atoms)
      dev = std::max(dev, std::fabs(a.margin) / std::max(1.0, std::fabs(a.rhs)));
    const JensenReport ev = check_expectation_values(field, tuples, f, dom, xi, quiet_opts());
    dev = std::max(dev, std::fabs(ev.atoms.front().margin) /
                            std::max(1.0, std::fabs(ev.atoms.front().rhs)));
    const JensenReport mp =
        check_mond_pecaric(tuples.tuple(0), xi, f, dom, quiet_opts());
    dev = std::max(dev, std::fabs(mp.atoms.front().margin) /
                            std::max(1.0, std::fabs(mp.atoms.front().rhs)));
    return dev;
  });
}

SuiteResult jensen_scale_covariance(const SelftestConfig& cfg) {
  return bounded_suite("jensen.scale_covariance", 100, 1e-12, cfg, [](Rng& rng, std::int64_t i) {
    const std::string& name =
        convex_entries()[static_cast<std::size_t>(i) % convex_entries().size()];
    const RandomInstance ri = random_catalog_instance(name, rng);
    const JensenReport base = check_conditional(ri.inst, quiet_opts());

    double dev = 0.0;
    for (const double c : {1e-3, 1e3}) {
      auto scaled_rho = DensityFunctional::validate(
          HermitianMatrix(c * ri.inst.ctx().functional().rho()));
      const SubalgebraContext ctx2 =
          SubalgebraContext::build(ri.inst.ctx().partition(), std::move(scaled_rho));
      const JensenInstance inst2 =
          JensenInstance::validate(ctx2, ri.inst.field(), ri.inst.tuples(), ri.inst.f());
      const JensenReport rep = check_conditional(inst2, quiet_opts());
      if (rep.atoms.size() != base.atoms.size()) return kInf;
      for (std::size_t a = 0; a < rep.atoms.size(); ++a) {
        dev = std::max(dev, std::fabs(rep.atoms[a].lhs - base.atoms[a].lhs) /
                                std::max(1.0, std::fabs(base.atoms[a].lhs)));
        dev = std::max(dev, std::fabs(rep.atoms[a].rhs - base.atoms[a].rhs) /
                                std::max(1.0, std::fabs(base.atoms[a].rhs)));
        if (rep.pass != base.pass) return kInf;
      }
    }
    return dev;
  });
}

SuiteResult jensen_search_convex_none(const SelftestConfig& cfg) {
  return bounded_suite("jensen.search_convex_none", 1, 0.0, cfg, [&](Rng&, std::int64_t) {
    SearchConfig sc;
    sc.trials = scaled(300, cfg);
    sc.seed = 5;
    sc.mode = cfg.mode;
    const auto witness = search_counterexample(ScalarFunction::parse("x1^2", 1),
                                               square_cube(1, -2.0, 2.0), sc);
    return witness ? kInf : 0.0;
  });
}

SuiteResult jensen_search_cube_witness(const SelftestConfig& cfg) {
  return bounded_suite("jensen.search_cube_witness", 1, 0.0, cfg, [&](Rng&, std::int64_t) {
    SearchConfig sc;
    sc.trials = 1000;
    sc.seed = 1;
    sc.mode = cfg.mode;
    const auto witness = search_counterexample(ScalarFunction::parse("x1^3", 1),
                                               square_cube(1, -2.0, 2.0), sc);
    if (!witness || witness->report.pass) return kInf;
    return 0.0;
  });
}

SuiteResult jensen_search_product_witness(const SelftestConfig& cfg) {
  return bounded_suite("jensen.search_product_witness", 1, 0.0, cfg, [&](Rng&, std::int64_t) {
    SearchConfig sc;
    sc.trials = 1000;
    sc.seed = 1;
    sc.mode = cfg.mode;
    const auto witness = search_counterexample(ScalarFunction::parse("x1*x2", 2),
                                               square_cube(2, -1.0, 1.0), sc);
    if (!witness || witness->report.pass) return kInf;
    return 0.0;
  });
}

SuiteResult cli_witness_roundtrip(const SelftestConfig& cfg) {
  return bounded_suite("cli.witness_roundtrip", 1, 0.0, cfg, [&](Rng&, std::int64_t) {
    SearchConfig sc;
    sc.trials = 1000;
    sc.seed = 1;
    sc.mode = cfg.mode;
    const CubeDomain dom = square_cube(1, -2.0, 2.0);
    const auto witness =
        search_counterexample(ScalarFunction::parse("x1^3", 1), dom, sc);
    if (!witness) return kInf;
    FunctionSpec spec = FunctionSpec::from_cli("x1^3");
    const Instance inst = witness_to_instance(*witness, spec, dom, sc.seed);
    const Instance reloaded = instance_from_json_text(instance_to_string(inst));
    const JensenReport rep = check_conditional(assemble_instance(reloaded), quiet_opts());
    return rep.pass ? kInf : 0.0;
  });
}

SuiteResult cli_gen_determinism(const SelftestConfig& cfg) {
  return bounded_suite("cli.gen_determinism", 5, 0.0, cfg, [&](Rng&, std::int64_t i) {
    GenParams params;
    params.seed = cfg.seed + static_cast<std::uint64_t>(i);
    params.dim = 4 + static_cast<int>(i);
    params.n = 1 + static_cast<int>(i % 3);
    params.atoms = 2;
    params.field_size = 1 + static_cast<int>(i % 4);
    params.function = i % 2 ? "p_norm:2" : "log_sum_exp";
    const std::string one = instance_to_string(generate_instance(params));
    const std::string two = instance_to_string(generate_instance(params));
    if (one != two) return kInf;
    // canonical form is stable across a reload as well
    const std::string three = instance_to_string(instance_from_json_text(one));
    return one == three ? 0.0 : kInf;
  });
}

SuiteResult cli_check_determinism(const SelftestConfig& cfg) {
  return bounded_suite("cli.check_determinism", 3, 0.0, cfg, [&](Rng&, std::int64_t i) {
    GenParams params;
    params.seed = cfg.seed + 100 + static_cast<std::uint64_t>(i);
    params.dim = 5;
    params.n = 2;
    params.atoms = 3;
    params.field_size = 2;
    params.function = "max_coord";
    const Instance inst = generate_instance(params);
    const std::string one = check_report_string(inst, {}, cfg.mode);
    const std::string two = check_report_string(inst, {}, cfg.mode);
    return one == two ? 0.0 : kInf;
  });
}

SuiteResult parallel_determinism(const SelftestConfig& cfg) {
  return bounded_suite("parallel.determinism", 1, 0.0, cfg, [&](Rng&, std::int64_t) {
    // probe: serial and parallel agree on the exact witness
    const ScalarFunction f = ScalarFunction::parse("x1*x2", 2);
    const CubeDomain dom = square_cube(2, -1.0, 1.0);
    const ConvexityVerdict vs = midpoint_convexity_probe(f, dom, 5000, 3, ExecMode::serial);
    const ConvexityVerdict vp = midpoint_convexity_probe(f, dom, 5000, 3, ExecMode::parallel);
    if (vs.status != vp.status) return kInf;
    if (vs.witness) {
      if (!vp.witness) return kInf;
      if (vs.witness->a != vp.witness->a || vs.witness->b != vp.witness->b ||
          vs.witness->midpoint_gap != vp.witness->midpoint_gap)
        return kInf;
    }
    // search: identical first-hit trial
    SearchConfig sc;
    sc.trials = 400;
    sc.seed = 9;
    sc.mode = ExecMode::serial;
    const auto ws = search_counterexample(ScalarFunction::parse("x1^3", 1),
                                          square_cube(1, -2.0, 2.0), sc);
    sc.mode = ExecMode::parallel;
    const auto wp = search_counterexample(ScalarFunction::parse("x1^3", 1),
                                          square_cube(1, -2.0, 2.0), sc);
    if (static_cast<bool>(ws) != static_cast<bool>(wp)) return kInf;
    if (ws && (ws->trial != wp->trial ||
               ws->report.atoms.front().margin != wp->report.atoms.front().margin))
      return kInf;
    return 0.0;
  });
}

using SuiteFn = SuiteResult (*)(const SelftestConfig&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> suites = {
      {"linalg.eig_reconstruction", linalg_eig_reconstruction},
      {"linalg.spectral_invariants", linalg_spectral_invariants},
      {"linalg.inner_real", linalg_inner_real},
      {"jointspec.monomial_oracle", jointspec_monomial_oracle},
      {"jointspec.homomorphism", jointspec_homomorphism},
      {"jointspec.unitary_covariance", jointspec_unitary_covariance},
      {"jointspec.spectral_containment", jointspec_spectral_containment},
      {"jointspec.degenerate_residual", jointspec_degenerate_residual},
      {"expectation.adjointness", expectation_adjointness},
      {"expectation.positivity", expectation_positivity},
      {"expectation.unit_restriction", expectation_unit_restriction},
      {"expectation.bimodule", expectation_bimodule},
      {"expectation.centralizer_rejection", expectation_centralizer_rejection},
      {"expectation.linearity", expectation_linearity},
      {"fields.transform_linearity", fields_transform_linearity},
      {"fields.affine_reproduction", fields_affine_reproduction},
      {"fields.norm_bound", fields_norm_bound},
      {"fields.constants_reproduction", fields_constants_reproduction},
      {"fields.random_unitality", fields_random_unitality},
      {"convexfn.roundtrip", convexfn_roundtrip},
      {"convexfn.probe_soundness", convexfn_probe_soundness},
      {"convexfn.catalog_convex", convexfn_catalog_convex},
      {"jensen.convex_suite", jensen_convex_suite},
      {"jensen.corollary_consistency", jensen_corollary_consistency},
      {"jensen.mond_pecaric_identity", jensen_mond_pecaric_identity},
      {"jensen.direct_sum_routes", jensen_direct_sum_routes},
      {"jensen.affine_equality", jensen_affine_equality},
      {"jensen.scale_covariance", jensen_scale_covariance},
      {"jensen.search_convex_none", jensen_search_convex_none},
      {"jensen.search_cube_witness", jensen_search_cube_witness},
      {"jensen.search_product_witness", jensen_search_product_witness},
      {"cli.witness_roundtrip", cli_witness_roundtrip},
      {"cli.gen_determinism", cli_gen_determinism},
      {"cli.check_determinism", cli_check_determinism},
      {"parallel.determinism", parallel_determinism},
  };
  return suites;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : registry()) v.push_back(name);
    return v;
  }();
  return names;
}

SuiteResult run_suite(const std::string& name, const SelftestConfig& config) {
  for (const auto& [n, fn] : registry())
    if (n == name) return fn(config);
  throw ValidationError("unknown suite '" + name + "'");
}

std::vector<SuiteResult> run_selftest(const SelftestConfig& config) {
  std::vector<SuiteResult> results;
  results.reserve(registry().size());
  for (const auto& [name, fn] : registry()) results.push_back(fn(config));
  return results;
}

}  // namespace opjensen
