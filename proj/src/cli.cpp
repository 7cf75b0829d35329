#include "opjensen/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "opjensen/randomgen.hpp"
#include "opjensen/rng.hpp"

namespace opjensen {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fmt_complex(const Complex& z) {
  if (z.imag() == 0.0) return fmt(z.real());
  std::string s = fmt(z.real());
  s += z.imag() < 0 ? " - " : " + ";
  s += fmt(std::fabs(z.imag()));
  s += "i";
  return s;
}

void print_matrix(std::ostream& out, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out << "  [";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ", ";
      out << fmt_complex(m(r, c));
    }
    out << "]\n";
  }
}

TolerancePolicy apply_overrides(const CheckOverrides& overrides) {
  TolerancePolicy policy;
  if (overrides.atol) policy.ineq_atol = *overrides.atol;
  if (overrides.rtol) policy.ineq_rtol = *overrides.rtol;
  return policy;
}

int write_output(const std::string& text, const std::optional<std::string>& out_path,
                 std::ostream& out, std::ostream& err) {
  if (!out_path) {
    out << text;
    return 0;
  }
  std::ofstream f(*out_path, std::ios::binary);
  if (!f) {
    err << "cannot open output file " << *out_path << "\n";
    return 2;
  }
  f << text;
  return 0;
}

std::string json_error(const std::string& message) {
  OrderedJson j = OrderedJson::object();
  j["error"] = message;
  return j.dump(2) + "\n";
}

std::pair<JensenReport, std::string> run_check(const Instance& inst,
                                               const CheckOverrides& overrides, ExecMode mode) {
  const TolerancePolicy policy = apply_overrides(overrides);
  const JensenInstance ji = assemble_instance(inst, policy);
  CheckOptions opts;
  opts.policy = policy;
  opts.probe_seed = inst.seed.value_or(0);
  opts.mode = mode;
  JensenReport report = check_conditional(ji, opts);
  const std::string hash = input_hash(instance_to_string(inst));
  std::string text = report_to_string(report, hash, inst.seed);
  return {std::move(report), std::move(text)};
}

}  // namespace

Instance generate_instance(const GenParams& params) {
  if (params.dim < 1 || params.dim > 64)
    throw ValidationError("gen: dim must be in [1, 64]");
  if (params.n < 1 || params.n > 4) throw ValidationError("gen: n must be in [1, 4]");
  if (params.atoms < 1 || params.atoms > params.dim)
    throw ValidationError("gen: atoms must be in [1, dim]");
  if (params.field_size < 1 || params.field_size > 64)
    throw ValidationError("gen: field-size must be in [1, 64]");

  const FunctionSpec spec = FunctionSpec::from_cli(params.function);
  spec.build(params.n);  // surface parameter problems before generating

  Instance inst;
  inst.dim = params.dim;
  inst.n = params.n;
  inst.seed = params.seed;
  inst.f = spec;
  const bool positive_domain = spec.is_catalog && spec.name == "neg_entropy";
  for (int i = 0; i < params.n; ++i)
    inst.cube.push_back(positive_domain ? CubeDomain::Interval{0.05, 4.0}
                                        : CubeDomain::Interval{-2.0, 2.0});
  const CubeDomain dom(inst.cube);

  Rng rng(params.seed);
  const SubalgebraContext ctx = random_context(params.dim, params.atoms, rng);
  inst.rho = ctx.functional().rho();
  for (int j = 0; j < ctx.atom_count(); ++j) inst.partition.push_back(ctx.partition().atom(j));

  const DiscreteField field = random_unital_field(params.dim, params.field_size, rng);
  inst.field_weights = field.weights();
  inst.field_maps = field.maps();

  const TupleField tuples = random_tuple_field(params.dim, params.n, params.field_size, dom, rng);
  for (int t = 0; t < tuples.atom_count(); ++t) {
    std::vector<Matrix> members;
    for (int i = 0; i < params.n; ++i) members.push_back(tuples.tuple(t).member(i).mat());
    inst.tuple_field.push_back(std::move(members));
  }

  assemble_instance(inst);  // generated instances always validate
  return inst;
}

std::string check_report_string(const Instance& inst, const CheckOverrides& overrides,
                                ExecMode mode) {
  return run_check(inst, overrides, mode).second;
}

std::vector<CubeDomain::Interval> parse_cube_arg(const std::string& text, int n) {
  std::vector<CubeDomain::Interval> intervals;
  std::stringstream ss(text);
  std::string segment;
  while (std::getline(ss, segment, ';')) {
    const auto comma = segment.find(',');
    if (comma == std::string::npos)
      throw ValidationError("cube: expected 'lo,hi' but got '" + segment + "'");
    try {
      intervals.push_back(
          {std::stod(segment.substr(0, comma)), std::stod(segment.substr(comma + 1))});
    } catch (const std::exception&) {
      throw ValidationError("cube: malformed interval '" + segment + "'");
    }
  }
  if (intervals.empty()) throw ValidationError("cube: empty specification");
  if (static_cast<int>(intervals.size()) == 1 && n > 1)
    intervals.assign(static_cast<std::size_t>(n), intervals.front());
  if (static_cast<int>(intervals.size()) != n)
    throw ValidationError("cube: expected " + std::to_string(n) + " intervals, got " +
                          std::to_string(intervals.size()));
  return intervals;
}

int cmd_check(const std::string& path, const CheckOverrides& overrides,
              const std::optional<std::string>& out_path, std::ostream& out, std::ostream& err) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    out << json_error("cannot open instance file " + path);
    return 2;
  }
  std::stringstream buffer;
  buffer << f.rdbuf();
  try {
    const Instance inst = instance_from_json_text(buffer.str());
    auto [report, text] = run_check(inst, overrides, ExecMode::parallel);
    const int rc = write_output(text, out_path, out, err);
    if (rc != 0) return rc;
    return report.pass ? 0 : 1;
  } catch (const ValidationError& e) {
    out << json_error(e.what());
    return 2;
  } catch (const std::exception& e) {
    err << "check failed: " << e.what() << "\n";
    return 2;
  }
}

int cmd_gen(const GenParams& params, const std::optional<std::string>& out_path,
            std::ostream& out, std::ostream& err) {
  try {
    const Instance inst = generate_instance(params);
    return write_output(instance_to_string(inst), out_path, out, err);
  } catch (const ValidationError& e) {
    err << e.what() << "\n";
    return 2;
  }
}

int cmd_search(const SearchParams& params, const std::optional<std::string>& out_path,
               std::ostream& out, std::ostream& err) {
  try {
    const FunctionSpec spec = FunctionSpec::from_cli(params.function);
    int n;
    if (params.n) {
      n = *params.n;
    } else if (!spec.is_catalog) {
      n = ScalarFunction::infer_arity(spec.expr);
    } else {
      n = 1;
      for (char c : params.cube)
        if (c == ';') ++n;
    }
    const CubeDomain dom(parse_cube_arg(params.cube, n));
    const ScalarFunction f = spec.build(n);

    SearchConfig config;
    config.dims = params.dims;
    config.trials = params.trials;
    config.seed = params.seed;
    config.policy = apply_overrides(params.overrides);

    const auto witness = search_counterexample(f, dom, config);
    if (!witness) {
      out << "none\n";
      return 3;
    }
    err << "violation at trial " << witness->trial << ", margin "
        << fmt(witness->report.atoms.front().margin) << "\n";
    const Instance inst = witness_to_instance(*witness, spec, dom, params.seed);
    const int rc = write_output(instance_to_string(inst), out_path, out, err);
    return rc != 0 ? rc : 0;
  } catch (const ValidationError& e) {
    err << e.what() << "\n";
    return 2;
  }
}

int cmd_selftest(const SelftestConfig& config, std::ostream& out, std::ostream& err) {
  const std::vector<SuiteResult> results = run_selftest(config);
  out << std::left << std::setw(36) << "suite" << std::right << std::setw(8) << "trials"
      << std::setw(13) << "max_dev" << std::setw(13) << "bound"
      << "  status\n";
  bool all_pass = true;
  for (const auto& r : results) {
    out << std::left << std::setw(36) << r.name << std::right << std::setw(8) << r.trials
        << std::setw(13) << fmt(r.max_dev) << std::setw(13) << fmt(r.bound) << "  "
        << (r.pass ? "pass" : "FAIL");
    if (!r.pass && !r.detail.empty()) out << "  " << r.detail;
    out << "\n";
    all_pass = all_pass && r.pass;
  }
  if (!all_pass) {
    err << "selftest failed (seed " << config.seed << ")\n";
    return 1;
  }
  out << "all " << results.size() << " suites passed\n";
  return 0;
}

int cmd_calc(const std::string& path, std::ostream& out, std::ostream& err) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    err << "cannot open instance file " << path << "\n";
    return 2;
  }
  std::stringstream buffer;
  buffer << f.rdbuf();
  try {
    const Instance raw = instance_from_json_text(buffer.str());
    const JensenInstance inst = assemble_instance(raw);
    const auto& ctx = inst.ctx();
    const auto& dom = inst.dom();

    out << "dim = " << raw.dim << ", n = " << raw.n << ", partition atoms = "
        << ctx.atom_count() << ", field atoms = " << inst.field().atom_count() << "\n";
    out << "f: " << inst.f().to_string() << "\n";
    out << "cube:";
    for (const auto& iv : dom.intervals()) out << " [" << fmt(iv.lo) << ", " << fmt(iv.hi) << "]";
    out << "\n";
    out << "mu = (";
    for (int j = 0; j < ctx.atom_count(); ++j)
      out << (j ? ", " : "") << fmt(ctx.measure().weights[static_cast<std::size_t>(j)]);
    out << "), supported = (";
    for (int j = 0; j < ctx.atom_count(); ++j)
      out << (j ? ", " : "") << (ctx.measure().supported[static_cast<std::size_t>(j)] ? 1 : 0);
    out << ")\n";
    out << "unital residual = " << fmt(inst.field().residual()) << "\n";

    for (int t = 0; t < inst.tuples().atom_count(); ++t) {
      const JointSpectrum js = joint_diagonalize(inst.tuples().tuple(t));
      out << "tuple t=" << t << " joint eigenvalue rows:";
      for (int k = 0; k < inst.tuples().dim(); ++k) {
        out << " (";
        for (int i = 0; i < inst.tuples().arity(); ++i)
          out << (i ? ", " : "") << fmt(js.table(k, i));
        out << ")";
      }
      out << "\n";
    }

    const std::vector<HermitianMatrix> y = compress(inst.field(), inst.tuples());
    for (int i = 0; i < inst.tuples().arity(); ++i) {
      out << "y" << i + 1 << " =\n";
      print_matrix(out, y[static_cast<std::size_t>(i)].mat());
      const CondExpValue phi = ctx.cond_expect(y[static_cast<std::size_t>(i)].mat());
      out << "Phi(y" << i + 1 << ") = (";
      for (int j = 0; j < ctx.atom_count(); ++j) {
        out << (j ? ", " : "");
        if (phi.supported[static_cast<std::size_t>(j)])
          out << fmt(phi.real_at(j));
        else
          out << "masked";
      }
      out << ")\n";
    }

    const HermitianMatrix g = transform(inst.field(), inst.tuples(), inst.f(), dom);
    out << "F = sum_t nu_t a_t* f(x_t) a_t =\n";
    print_matrix(out, g.mat());
    const CondExpValue phi_g = ctx.cond_expect(g.mat());
    out << "Phi(F) = (";
    for (int j = 0; j < ctx.atom_count(); ++j) {
      out << (j ? ", " : "");
      if (phi_g.supported[static_cast<std::size_t>(j)])
        out << fmt(phi_g.real_at(j));
      else
        out << "masked";
    }
    out << ")\n";

    CheckOptions opts;
    opts.with_probe = false;
    const JensenReport report = check_conditional(inst, opts);
    for (const auto& a : report.atoms)
      out << "atom s=" << a.s << ": mu=" << fmt(a.mu) << " lhs=" << fmt(a.lhs)
          << " rhs=" << fmt(a.rhs) << " margin=" << fmt(a.margin) << "\n";
    out << "verdict: " << (report.pass ? "pass" : "fail") << "\n";
    return 0;
  } catch (const ValidationError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "calc failed: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace opjensen
