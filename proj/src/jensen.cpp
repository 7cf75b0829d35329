#include "opjensen/jensen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "opjensen/randomgen.hpp"
#include "opjensen/rng.hpp"

namespace opjensen {

namespace {

ConvexityVerdict screen_convexity(const ScalarFunction& f, const CubeDomain& dom,
                                  const CheckOptions& opts) {
  if (opts.with_probe && opts.probe_samples > 0)
    return midpoint_convexity_probe(f, dom, opts.probe_samples, opts.probe_seed, opts.mode);
  ConvexityVerdict v;
  if (f.documented_shelf() == CatalogShelf::convex) {
    v.status = ConvexityStatus::probably_convex;
  } else {
    v.status = ConvexityStatus::indeterminate;
    v.diagnostic = "probe skipped";
  }
  return v;
}

std::vector<double> clamp_mean_point(const CubeDomain& dom, const std::vector<double>& point,
                                     const TolerancePolicy& policy, const char* who) {
  try {
    return dom.clamp(point, policy.ineq_atol);
  } catch (const NumericalError& e) {
    std::ostringstream os;
    os << who << ": averaged spectrum left the cube, which convexity of the cube rules out; "
       << e.what();
    throw NumericalError(os.str());
  }
}

void finalize(JensenReport& report, const TolerancePolicy& policy) {
  report.tolerances = policy;
  report.min_margin = std::numeric_limits<double>::infinity();
  report.pass = true;
  for (const auto& a : report.atoms) {
    report.min_margin = std::min(report.min_margin, a.margin);
    if (!margin_acceptable(a.margin, a.rhs, policy)) report.pass = false;
  }
  if (report.atoms.empty()) report.min_margin = 0.0;
}

double raw_inner_real(const Matrix& x, const Vector& v) {
  return (v.adjoint() * x * v)(0, 0).real();
}

}  // namespace

bool margin_acceptable(double margin, double rhs, const TolerancePolicy& policy) {
  return margin >= -(policy.ineq_atol + policy.ineq_rtol * std::max(1.0, std::fabs(rhs)));
}

JensenInstance JensenInstance::validate(SubalgebraContext ctx, DiscreteField field,
                                        TupleField tuples, ScalarFunction f) {
  if (ctx.dim() != field.dim() || ctx.dim() != tuples.dim())
    throw ValidationError("jensen instance: dimensions of context, field and tuples differ");
  if (field.atom_count() != tuples.atom_count())
    throw ValidationError("jensen instance: field and tuple field atom counts differ");
  if (f.arity() != tuples.arity())
    throw ValidationError("jensen instance: function arity does not match tuples");
  return JensenInstance(std::move(ctx), std::move(field), std::move(tuples), std::move(f));
}

JensenReport check_conditional(const JensenInstance& inst, const CheckOptions& opts) {
  const auto& ctx = inst.ctx();
  const auto& field = inst.field();
  const auto& tuples = inst.tuples();
  const auto& f = inst.f();
  const auto& dom = inst.dom();
  const TolerancePolicy& policy = opts.policy;
  const int n = tuples.arity();
  const int T = field.atom_count();

  const std::vector<HermitianMatrix> y = compress(field, tuples, policy, opts.mode);
  std::vector<CondExpValue> phi_y;
  phi_y.reserve(static_cast<std::size_t>(n));
  for (const auto& yi : y) phi_y.push_back(ctx.cond_expect(yi.mat()));

  const HermitianMatrix g = transform(field, tuples, f, dom, policy, opts.mode);
  const CondExpValue phi_g = ctx.cond_expect(g.mat());

  std::vector<JointSpectrum> spectra;
  spectra.reserve(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) spectra.push_back(joint_diagonalize(tuples.tuple(t), policy));

  JensenReport report;
  report.convexity = screen_convexity(f, dom, opts);
  for (int s = 0; s < ctx.atom_count(); ++s) {
    if (!ctx.measure().supported[static_cast<std::size_t>(s)]) continue;
    AtomCheck atom;
    atom.s = s;
    atom.mu = ctx.measure().weights[static_cast<std::size_t>(s)];

    std::vector<double> point(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) point[static_cast<std::size_t>(i)] = phi_y[static_cast<std::size_t>(i)].real_at(s);
    atom.lhs = f.eval(clamp_mean_point(dom, point, policy, "check_conditional"));
    atom.rhs = phi_g.real_at(s);
    atom.margin = atom.rhs - atom.lhs;

    // the proof's per-atom probability measure on joint eigenvalue tuples
    for (int t = 0; t < T; ++t) {
      const Matrix m = field.map(t) * ctx.weighted_atom(s) * field.map(t).adjoint();
      const Matrix& u = spectra[static_cast<std::size_t>(t)].u;
      for (int k = 0; k < tuples.dim(); ++k) {
        const Complex q = (u.col(k).adjoint() * m * u.col(k))(0, 0);
        atom.point_masses.push_back(field.weight(t) * q.real() / atom.mu);
      }
    }
    report.atoms.push_back(std::move(atom));
  }
  finalize(report, policy);
  return report;
}

JensenReport check_expectation_values(const DiscreteField& field, const TupleField& tuples,
                                      const ScalarFunction& f, const CubeDomain& dom,
                                      const StateVector& xi, const CheckOptions& opts) {
  if (xi.dim() != field.dim()) throw ValidationError("check_expectation_values: vector dimension");
  const TolerancePolicy& policy = opts.policy;
  const int n = tuples.arity();

  const std::vector<HermitianMatrix> y = compress(field, tuples, policy, opts.mode);
  std::vector<double> point(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    point[static_cast<std::size_t>(i)] = real_inner(y[static_cast<std::size_t>(i)].mat(), xi);

  const HermitianMatrix g = transform(field, tuples, f, dom, policy, opts.mode);

  JensenReport report;
  report.convexity = screen_convexity(f, dom, opts);
  AtomCheck atom;
  atom.s = 0;
  atom.mu = 1.0;
  atom.lhs = f.eval(clamp_mean_point(dom, point, policy, "check_expectation_values"));
  atom.rhs = real_inner(g.mat(), xi);
  atom.margin = atom.rhs - atom.lhs;
  for (int t = 0; t < field.atom_count(); ++t) {
    const JointSpectrum js = joint_diagonalize(tuples.tuple(t), policy);
    const Vector axi = field.map(t) * xi.vec();
    for (int k = 0; k < tuples.dim(); ++k) {
      const Complex c = (js.u.col(k).adjoint() * axi)(0, 0);
      atom.point_masses.push_back(field.weight(t) * std::norm(c));
    }
  }
  report.atoms.push_back(std::move(atom));
  finalize(report, policy);
  return report;
}

JensenReport check_mond_pecaric(const AbelianTuple& tuple, const StateVector& xi,
                                const ScalarFunction& f, const CubeDomain& dom,
                                const CheckOptions& opts) {
  if (xi.dim() != tuple.dim()) throw ValidationError("check_mond_pecaric: vector dimension");
  const TolerancePolicy& policy = opts.policy;
  const int n = tuple.arity();

  std::vector<double> point(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    point[static_cast<std::size_t>(i)] = real_inner(tuple.member(i).mat(), xi);

  const HermitianMatrix fx = apply_function(f, tuple, dom, policy);

  JensenReport report;
  report.convexity = screen_convexity(f, dom, opts);
  AtomCheck atom;
  atom.s = 0;
  atom.mu = 1.0;
  atom.lhs = f.eval(clamp_mean_point(dom, point, policy, "check_mond_pecaric"));
  atom.rhs = real_inner(fx.mat(), xi);
  atom.margin = atom.rhs - atom.lhs;
  const JointSpectrum js = joint_diagonalize(tuple, policy);
  for (int k = 0; k < tuple.dim(); ++k) {
    const Complex c = (js.u.col(k).adjoint() * xi.vec())(0, 0);
    atom.point_masses.push_back(std::norm(c));
  }
  report.atoms.push_back(std::move(atom));
  finalize(report, policy);
  return report;
}

JensenReport check_direct_sum(const std::vector<AbelianTuple>& tuples,
                              const std::vector<Vector>& vectors, const ScalarFunction& f,
                              const CubeDomain& dom, const CheckOptions& opts) {
  if (tuples.empty() || tuples.size() != vectors.size())
    throw ValidationError("check_direct_sum: needs matching tuple and vector lists");
  const TolerancePolicy& policy = opts.policy;
  const int n = tuples.front().arity();

  // direct route
  std::vector<double> point(static_cast<std::size_t>(n), 0.0);
  for (std::size_t j = 0; j < tuples.size(); ++j)
    for (int i = 0; i < n; ++i)
      point[static_cast<std::size_t>(i)] += raw_inner_real(tuples[j].member(i).mat(), vectors[j]);
  double rhs = 0.0;
  for (std::size_t j = 0; j < tuples.size(); ++j)
    rhs += raw_inner_real(apply_function(f, tuples[j], dom, policy).mat(), vectors[j]);
  const double lhs = f.eval(clamp_mean_point(dom, point, policy, "check_direct_sum"));

  // embedded route
  auto [big, xi] = direct_sum_embed(tuples, vectors, policy);
  CheckOptions inner = opts;
  inner.with_probe = false;
  const JensenReport embedded = check_mond_pecaric(big, xi, f, dom, inner);

  JensenReport report;
  report.convexity = screen_convexity(f, dom, opts);
  AtomCheck atom;
  atom.s = 0;
  atom.mu = 1.0;
  atom.lhs = lhs;
  atom.rhs = rhs;
  atom.margin = rhs - lhs;
  atom.point_masses = embedded.atoms.front().point_masses;
  report.atoms.push_back(std::move(atom));
  report.route_deviation = std::max(std::fabs(lhs - embedded.atoms.front().lhs),
                                    std::fabs(rhs - embedded.atoms.front().rhs));
  finalize(report, policy);
  return report;
}

std::optional<SearchWitness> search_counterexample(const ScalarFunction& f, const CubeDomain& dom,
                                                   const SearchConfig& config) {
  if (f.arity() != dom.arity())
    throw ValidationError("search: function arity does not match cube");
  if (config.dims.empty()) throw ValidationError("search: no dimensions given");
  for (int d : config.dims)
    if (d < 1 || d > 256) throw ValidationError("search: dimension out of range");

  CheckOptions opts;
  opts.policy = config.policy;
  opts.with_probe = false;
  opts.mode = ExecMode::serial;  // each trial is one unit of parallel work

  auto run_trial = [&](std::int64_t i) {
    Rng rng = Rng::substream(config.seed, static_cast<std::uint64_t>(i));
    const int d = config.dims[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<int>(config.dims.size()) - 1))];
    AbelianTuple tuple = random_abelian_tuple(d, dom, rng, config.policy);
    StateVector xi = random_state(d, rng);
    JensenReport rep = check_mond_pecaric(tuple, xi, f, dom, opts);
    return std::make_tuple(std::move(tuple), std::move(xi), std::move(rep));
  };

  const std::int64_t hit = first_index_where(config.trials, config.mode, [&](std::int64_t i) {
    return !std::get<2>(run_trial(i)).pass;
  });
  if (hit < 0) return std::nullopt;
  auto [tuple, xi, rep] = run_trial(hit);
  return SearchWitness{std::move(tuple), std::move(xi), std::move(rep), hit};
}

}  // namespace opjensen
