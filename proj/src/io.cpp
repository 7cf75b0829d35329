#include "opjensen/io.hpp"

#include <cmath>
#include <sstream>

namespace opjensen {

namespace {

using Json = OrderedJson;

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw ValidationError("instance" + path + ": " + what);
}

const Json& need(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) bad(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) bad(path, std::string("missing field '") + key + "'");
  return *it;
}

double need_number(const Json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  return j.get<double>();
}

int need_int(const Json& j, const std::string& path, int lo, int hi) {
  if (!j.is_number_integer()) bad(path, "expected an integer");
  const long long v = j.get<long long>();
  if (v < lo || v > hi)
    bad(path, "value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                  std::to_string(hi) + "]");
  return static_cast<int>(v);
}

Complex parse_complex(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    bad(path, "complex scalar must be a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

Matrix parse_matrix(const Json& j, int dim, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    bad(path, "expected a matrix with " + std::to_string(dim) + " rows");
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      bad(path + "/" + std::to_string(r), "expected a row of " + std::to_string(dim) + " entries");
    for (int c = 0; c < dim; ++c)
      m(r, c) = parse_complex(row[static_cast<std::size_t>(c)],
                              path + "/" + std::to_string(r) + "/" + std::to_string(c));
  }
  if (!m.allFinite()) bad(path, "non-finite entries");
  return m;
}

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

RealMatrix parse_real_matrix(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) bad(path, "expected a real matrix");
  const int rows = static_cast<int>(j.size());
  const int cols = j[0].is_array() ? static_cast<int>(j[0].size()) : -1;
  if (cols <= 0) bad(path, "expected nested arrays of numbers");
  RealMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) bad(path, "ragged rows");
    for (int c = 0; c < cols; ++c)
      m(r, c) = need_number(row[static_cast<std::size_t>(c)],
                            path + "/" + std::to_string(r) + "/" + std::to_string(c));
  }
  return m;
}

FunctionSpec parse_function(const Json& j, const std::string& path) {
  FunctionSpec spec;
  if (!j.is_object()) bad(path, "expected an object with 'expr' or 'catalog'");
  if (j.contains("expr")) {
    if (!j["expr"].is_string()) bad(path + "/expr", "expected a string");
    spec.expr = j["expr"].get<std::string>();
    return spec;
  }
  if (!j.contains("catalog")) bad(path, "needs either 'expr' or 'catalog'");
  if (!j["catalog"].is_string()) bad(path + "/catalog", "expected a string");
  spec.is_catalog = true;
  spec.name = j["catalog"].get<std::string>();
  if (!ScalarFunction::is_catalog_name(spec.name))
    bad(path + "/catalog", "unknown catalog function '" + spec.name + "'");
  if (j.contains("params")) {
    const Json& p = j["params"];
    if (!p.is_object()) bad(path + "/params", "expected an object");
    if (p.contains("p")) spec.params.p = need_number(p["p"], path + "/params/p");
    if (p.contains("index"))
      spec.params.index = need_int(p["index"], path + "/params/index", 1, 1 << 20);
    if (p.contains("c")) spec.params.constant = need_number(p["c"], path + "/params/c");
    if (p.contains("Q")) spec.params.quadratic = parse_real_matrix(p["Q"], path + "/params/Q");
    if (p.contains("b")) {
      const Json& b = p["b"];
      if (!b.is_array()) bad(path + "/params/b", "expected an array of numbers");
      spec.params.linear = RealVector(static_cast<Eigen::Index>(b.size()));
      for (std::size_t i = 0; i < b.size(); ++i)
        spec.params.linear(static_cast<Eigen::Index>(i)) =
            need_number(b[i], path + "/params/b/" + std::to_string(i));
    }
  }
  return spec;
}

Json function_to_json(const FunctionSpec& spec) {
  Json j = Json::object();
  if (!spec.is_catalog) {
    j["expr"] = spec.expr;
    return j;
  }
  j["catalog"] = spec.name;
  Json params = Json::object();
  if (spec.name == "p_norm" || spec.name == "power_abs") params["p"] = spec.params.p;
  if (spec.name == "exp_coord" || spec.name == "cube_coord" || spec.name == "sin_coord")
    params["index"] = spec.params.index;
  if (spec.name == "quadratic_form") {
    Json q = Json::array();
    for (Eigen::Index r = 0; r < spec.params.quadratic.rows(); ++r) {
      Json row = Json::array();
      for (Eigen::Index c = 0; c < spec.params.quadratic.cols(); ++c)
        row.push_back(spec.params.quadratic(r, c));
      q.push_back(std::move(row));
    }
    params["Q"] = std::move(q);
    Json b = Json::array();
    for (Eigen::Index i = 0; i < spec.params.linear.size(); ++i) b.push_back(spec.params.linear(i));
    params["b"] = std::move(b);
    params["c"] = spec.params.constant;
  }
  if (!params.empty()) j["params"] = std::move(params);
  return j;
}

}  // namespace

ScalarFunction FunctionSpec::build(int arity) const {
  if (is_catalog) return ScalarFunction::catalog(name, params, arity);
  return ScalarFunction::parse(expr, arity);
}

FunctionSpec FunctionSpec::from_cli(const std::string& text) {
  FunctionSpec spec;
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  if (ScalarFunction::is_catalog_name(head)) {
    spec.is_catalog = true;
    spec.name = head;
    if (colon != std::string::npos) {
      const std::string arg = text.substr(colon + 1);
      try {
        if (head == "p_norm" || head == "power_abs")
          spec.params.p = std::stod(arg);
        else if (head == "exp_coord" || head == "cube_coord" || head == "sin_coord")
          spec.params.index = std::stoi(arg);
        else
          throw ValidationError("catalog function '" + head + "' takes no parameter");
      } catch (const ValidationError&) {
        throw;
      } catch (const std::exception&) {
        throw ValidationError("bad parameter '" + arg + "' for catalog function '" + head + "'");
      }
    }
    return spec;
  }
  spec.expr = text;
  return spec;
}

Instance instance_from_json_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("instance: ") + e.what());
  }

  Instance inst;
  inst.dim = need_int(need(j, "dim", ""), "/dim", 1, 256);
  inst.n = need_int(need(j, "n", ""), "/n", 1, 64);

  const Json& cube = need(j, "cube", "");
  if (!cube.is_array() || static_cast<int>(cube.size()) != inst.n)
    bad("/cube", "expected " + std::to_string(inst.n) + " intervals");
  for (std::size_t i = 0; i < cube.size(); ++i) {
    const Json& iv = cube[i];
    const std::string path = "/cube/" + std::to_string(i);
    if (!iv.is_array() || iv.size() != 2) bad(path, "expected [lo, hi]");
    inst.cube.push_back({need_number(iv[0], path + "/0"), need_number(iv[1], path + "/1")});
  }

  inst.rho = parse_matrix(need(j, "rho", ""), inst.dim, "/rho");

  const Json& partition = need(j, "partition", "");
  if (!partition.is_array() || partition.empty()) bad("/partition", "expected a nonempty array");
  for (std::size_t p = 0; p < partition.size(); ++p)
    inst.partition.push_back(
        parse_matrix(partition[p], inst.dim, "/partition/" + std::to_string(p)));

  const Json& field = need(j, "field", "");
  const Json& weights = need(field, "weights", "/field");
  const Json& maps = need(field, "maps", "/field");
  if (!weights.is_array() || weights.empty()) bad("/field/weights", "expected a nonempty array");
  if (!maps.is_array() || maps.size() != weights.size())
    bad("/field/maps", "expected as many maps as weights");
  for (std::size_t t = 0; t < weights.size(); ++t)
    inst.field_weights.push_back(need_number(weights[t], "/field/weights/" + std::to_string(t)));
  for (std::size_t t = 0; t < maps.size(); ++t)
    inst.field_maps.push_back(parse_matrix(maps[t], inst.dim, "/field/maps/" + std::to_string(t)));

  const Json& tf = need(j, "tuple_field", "");
  if (!tf.is_array() || tf.size() != inst.field_weights.size())
    bad("/tuple_field", "expected one tuple per field atom");
  for (std::size_t t = 0; t < tf.size(); ++t) {
    const Json& tup = tf[t];
    const std::string path = "/tuple_field/" + std::to_string(t);
    if (!tup.is_array() || static_cast<int>(tup.size()) != inst.n)
      bad(path, "expected " + std::to_string(inst.n) + " matrices");
    std::vector<Matrix> members;
    for (std::size_t i = 0; i < tup.size(); ++i)
      members.push_back(parse_matrix(tup[i], inst.dim, path + "/" + std::to_string(i)));
    inst.tuple_field.push_back(std::move(members));
  }

  inst.f = parse_function(need(j, "f", ""), "/f");

  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
      bad("/seed", "expected an integer");
    inst.seed = j["seed"].get<std::uint64_t>();
  }
  return inst;
}

OrderedJson instance_to_json(const Instance& inst) {
  Json j = Json::object();
  j["dim"] = inst.dim;
  j["n"] = inst.n;
  Json cube = Json::array();
  for (const auto& iv : inst.cube) cube.push_back(Json::array({iv.lo, iv.hi}));
  j["cube"] = std::move(cube);
  j["rho"] = matrix_to_json(inst.rho);
  Json partition = Json::array();
  for (const auto& p : inst.partition) partition.push_back(matrix_to_json(p));
  j["partition"] = std::move(partition);
  Json field = Json::object();
  field["weights"] = inst.field_weights;
  Json maps = Json::array();
  for (const auto& a : inst.field_maps) maps.push_back(matrix_to_json(a));
  field["maps"] = std::move(maps);
  j["field"] = std::move(field);
  Json tf = Json::array();
  for (const auto& tup : inst.tuple_field) {
    Json members = Json::array();
    for (const auto& m : tup) members.push_back(matrix_to_json(m));
    tf.push_back(std::move(members));
  }
  j["tuple_field"] = std::move(tf);
  j["f"] = function_to_json(inst.f);
  if (inst.seed) j["seed"] = *inst.seed;
  return j;
}

std::string instance_to_string(const Instance& inst) { return instance_to_json(inst).dump(2) + "\n"; }

JensenInstance assemble_instance(const Instance& inst, const TolerancePolicy& policy) {
  CubeDomain dom(inst.cube);

  std::vector<HermitianMatrix> atoms;
  for (std::size_t p = 0; p < inst.partition.size(); ++p) {
    try {
      atoms.emplace_back(inst.partition[p], policy.herm_tol);
    } catch (const ValidationError& e) {
      throw ValidationError("partition atom " + std::to_string(p + 1) + ": " + e.what());
    }
  }
  auto partition = PartitionOfUnity::validate(std::move(atoms), policy);
  auto functional = DensityFunctional::validate(HermitianMatrix(inst.rho, policy.herm_tol), policy);
  auto ctx = SubalgebraContext::build(std::move(partition), std::move(functional), policy);

  auto field = DiscreteField::validate(inst.field_weights, inst.field_maps, policy);

  std::vector<AbelianTuple> tuples;
  for (std::size_t t = 0; t < inst.tuple_field.size(); ++t) {
    std::vector<HermitianMatrix> members;
    for (std::size_t i = 0; i < inst.tuple_field[t].size(); ++i) {
      try {
        members.emplace_back(inst.tuple_field[t][i], policy.herm_tol);
      } catch (const ValidationError& e) {
        throw ValidationError("tuple_field atom " + std::to_string(t + 1) + " member " +
                              std::to_string(i + 1) + ": " + e.what());
      }
    }
    tuples.push_back(AbelianTuple::validate(std::move(members), policy));
  }
  auto tfield = TupleField::validate(std::move(tuples), dom, policy);

  ScalarFunction f = inst.f.build(inst.n);
  return JensenInstance::validate(std::move(ctx), std::move(field), std::move(tfield),
                                  std::move(f));
}

std::string input_hash(const std::string& canonical_text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << "fnv1a:" << std::hex << h;
  return os.str();
}

OrderedJson report_to_json(const JensenReport& report, const std::string& hash,
                           std::optional<std::uint64_t> seed) {
  Json j = Json::object();
  j["verdict"] = report.pass ? "pass" : "fail";
  Json atoms = Json::array();
  for (const auto& a : report.atoms) {
    Json atom = Json::object();
    atom["s"] = a.s;
    atom["mu"] = a.mu;
    atom["lhs"] = a.lhs;
    atom["rhs"] = a.rhs;
    atom["margin"] = a.margin;
    atoms.push_back(std::move(atom));
  }
  j["atoms"] = std::move(atoms);
  j["convexity"] = to_string(report.convexity.status);
  Json tol = Json::object();
  tol["herm_tol"] = report.tolerances.herm_tol;
  tol["commute_tol"] = report.tolerances.commute_tol;
  tol["eig_residual_tol"] = report.tolerances.eig_residual_tol;
  tol["ineq_atol"] = report.tolerances.ineq_atol;
  tol["ineq_rtol"] = report.tolerances.ineq_rtol;
  tol["cluster_tol"] = report.tolerances.cluster_tol;
  j["tolerances"] = std::move(tol);
  j["input_hash"] = hash;
  if (seed)
    j["seed"] = *seed;
  else
    j["seed"] = nullptr;
  j["tool_version"] = kToolVersion;
  return j;
}

std::string report_to_string(const JensenReport& report, const std::string& hash,
                             std::optional<std::uint64_t> seed) {
  return report_to_json(report, hash, seed).dump(2) + "\n";
}

Instance witness_to_instance(const SearchWitness& witness, const FunctionSpec& f,
                             const CubeDomain& dom, std::uint64_t seed) {
  const int d = witness.tuple.dim();
  Instance inst;
  inst.dim = d;
  inst.n = witness.tuple.arity();
  inst.cube = dom.intervals();
  inst.rho = Matrix::Identity(d, d);
  const Matrix p = witness.xi.vec() * witness.xi.vec().adjoint();
  inst.partition.push_back(p);
  if (d > 1) inst.partition.push_back(Matrix::Identity(d, d) - p);
  inst.field_weights = {1.0};
  inst.field_maps = {Matrix::Identity(d, d)};
  std::vector<Matrix> members;
  for (int i = 0; i < witness.tuple.arity(); ++i) members.push_back(witness.tuple.member(i).mat());
  inst.tuple_field.push_back(std::move(members));
  inst.f = f;
  inst.seed = seed;
  return inst;
}

}  // namespace opjensen
