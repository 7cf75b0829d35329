#include "opjensen/convexfn.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "opjensen/rng.hpp"

namespace opjensen {

namespace expr {

enum class Kind { number, variable, neg, add, sub, mul, div, pow, call };
enum class Fn { exp_fn, log_fn, abs_fn, sqrt_fn, max_fn, min_fn };

struct Node {
  Kind kind;
  int pos = 0;  // 1-based position in the source text
  double value = 0.0;
  int var = 0;  // 0-based
  int exponent = 0;
  Fn fn = Fn::exp_fn;
  NodePtr a;
  NodePtr b;
  std::vector<NodePtr> args;
};

namespace {

std::shared_ptr<Node> make(Kind kind, int pos) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->pos = pos;
  return n;
}

// ---- lexer ----

struct Token {
  enum Type { number, ident, plus, minus, star, slash, caret, lparen, rparen, comma, end };
  Type type;
  int pos;  // 1-based
  double num = 0.0;
  std::string text;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    const int pos = static_cast<int>(i) + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i;
      while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.'))
        ++j;
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          ++k;
          while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
          j = k;
        }
      }
      const std::string text(src.substr(i, j - i));
      char* endp = nullptr;
      const double v = std::strtod(text.c_str(), &endp);
      if (endp != text.c_str() + text.size() || !std::isfinite(v))
        throw ValidationError("parse error at position " + std::to_string(pos) +
                              ": malformed number '" + text + "'");
      out.push_back({Token::number, pos, v, text});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      out.push_back({Token::ident, pos, 0.0, std::string(src.substr(i, j - i))});
      i = j;
      continue;
    }
    Token::Type t;
    switch (c) {
      case '+': t = Token::plus; break;
      case '-': t = Token::minus; break;
      case '*': t = Token::star; break;
      case '/': t = Token::slash; break;
      case '^': t = Token::caret; break;
      case '(': t = Token::lparen; break;
      case ')': t = Token::rparen; break;
      case ',': t = Token::comma; break;
      default:
        throw ValidationError("parse error at position " + std::to_string(pos) +
                              ": unexpected character '" + std::string(1, c) + "'");
    }
    out.push_back({t, pos, 0.0, std::string(1, c)});
    ++i;
  }
  out.push_back({Token::end, static_cast<int>(src.size()) + 1, 0.0, ""});
  return out;
}

// ---- recursive descent over
// expr := term (('+'|'-') term)*
// term := factor (('*'|'/') factor)*
// factor := base ('^' INT)?
// base := NUMBER | VAR | FUNC '(' expr (',' expr)* ')' | '(' expr ')' | '-' base

struct Parser {
  const std::vector<Token>& toks;
  std::size_t at = 0;
  int arity;

  const Token& peek() const { return toks[at]; }
  const Token& take() { return toks[at++]; }

  [[noreturn]] void fail(const std::string& msg, int pos) const {
    throw ValidationError("parse error at position " + std::to_string(pos) + ": " + msg);
  }

  void expect(Token::Type t, const char* what) {
    if (peek().type != t) fail(std::string("expected ") + what, peek().pos);
    take();
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    while (peek().type == Token::plus || peek().type == Token::minus) {
      const Token op = take();
      NodePtr rhs = parse_term();
      auto n = make(op.type == Token::plus ? Kind::add : Kind::sub, op.pos);
      n->a = lhs;
      n->b = rhs;
      lhs = n;
    }
    return lhs;
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    while (peek().type == Token::star || peek().type == Token::slash) {
      const Token op = take();
      NodePtr rhs = parse_factor();
      auto n = make(op.type == Token::star ? Kind::mul : Kind::div, op.pos);
      n->a = lhs;
      n->b = rhs;
      lhs = n;
    }
    return lhs;
  }

  NodePtr parse_factor() {
    NodePtr b = parse_base();
    if (peek().type == Token::caret) {
      const Token op = take();
      if (peek().type != Token::number ||
          peek().text.find_first_not_of("0123456789") != std::string::npos)
        fail("integer exponent expected after '^'", peek().pos);
      const Token e = take();
      if (e.num > 1e6) fail("exponent too large", e.pos);
      auto n = make(Kind::pow, op.pos);
      n->a = b;
      n->exponent = static_cast<int>(e.num);
      return n;
    }
    return b;
  }

  NodePtr parse_base() {
    const Token t = take();
    switch (t.type) {
      case Token::number: {
        auto n = make(Kind::number, t.pos);
        n->value = t.num;
        return n;
      }
      case Token::minus: {
        auto n = make(Kind::neg, t.pos);
        n->a = parse_base();
        return n;
      }
      case Token::lparen: {
        NodePtr inner = parse_expr();
        expect(Token::rparen, "')'");
        return inner;
      }
      case Token::ident:
        return parse_ident(t);
      default:
        fail("expected number, variable, function or '('", t.pos);
    }
  }

  NodePtr parse_ident(const Token& t) {
    static const std::pair<const char*, Fn> fns[] = {
        {"exp", Fn::exp_fn}, {"log", Fn::log_fn}, {"abs", Fn::abs_fn},
        {"sqrt", Fn::sqrt_fn}, {"max", Fn::max_fn}, {"min", Fn::min_fn}};
    for (const auto& [name, fn] : fns) {
      if (t.text == name) {
        expect(Token::lparen, "'(' after function name");
        auto n = make(Kind::call, t.pos);
        n->fn = fn;
        n->args.push_back(parse_expr());
        while (peek().type == Token::comma) {
          take();
          n->args.push_back(parse_expr());
        }
        expect(Token::rparen, "')'");
        const bool unary = fn != Fn::max_fn && fn != Fn::min_fn;
        if (unary && n->args.size() != 1)
          fail(std::string(t.text) + " expects exactly one argument", t.pos);
        return n;
      }
    }
    if (t.text.size() >= 2 && t.text[0] == 'x' &&
        t.text.find_first_not_of("0123456789", 1) == std::string::npos) {
      const long idx = std::strtol(t.text.c_str() + 1, nullptr, 10);
      if (idx < 1 || idx > arity)
        fail("variable index out of range: " + t.text + " (arity " + std::to_string(arity) + ")",
             t.pos);
      auto n = make(Kind::variable, t.pos);
      n->var = static_cast<int>(idx) - 1;
      return n;
    }
    fail("unknown identifier '" + t.text + "'", t.pos);
  }
};

// ---- evaluation ----

double ipow(double x, int k) {
  double result = 1.0;
  double base = x;
  while (k > 0) {
    if (k & 1) result *= base;
    base *= base;
    k >>= 1;
  }
  return result;
}

[[noreturn]] void eval_fail(const std::string& what, int pos) {
  throw EvalError(what + " at position " + std::to_string(pos));
}

double eval_node(const Node& n, std::span<const double> pt) {
  switch (n.kind) {
    case Kind::number: return n.value;
    case Kind::variable: return pt[static_cast<std::size_t>(n.var)];
    case Kind::neg: return -eval_node(*n.a, pt);
    case Kind::add: return eval_node(*n.a, pt) + eval_node(*n.b, pt);
    case Kind::sub: return eval_node(*n.a, pt) - eval_node(*n.b, pt);
    case Kind::mul: return eval_node(*n.a, pt) * eval_node(*n.b, pt);
    case Kind::div: {
      const double num = eval_node(*n.a, pt);
      const double den = eval_node(*n.b, pt);
      if (std::fabs(den) < kEvalGuard) eval_fail("division by near-zero", n.pos);
      return num / den;
    }
    case Kind::pow: return ipow(eval_node(*n.a, pt), n.exponent);
    case Kind::call: {
      switch (n.fn) {
        case Fn::exp_fn: return std::exp(eval_node(*n.args[0], pt));
        case Fn::log_fn: {
          const double v = eval_node(*n.args[0], pt);
          if (v <= 0.0) eval_fail("log of non-positive argument", n.pos);
          return std::log(v);
        }
        case Fn::abs_fn: return std::fabs(eval_node(*n.args[0], pt));
        case Fn::sqrt_fn: {
          const double v = eval_node(*n.args[0], pt);
          if (v < 0.0) eval_fail("sqrt of negative argument", n.pos);
          return std::sqrt(v);
        }
        case Fn::max_fn:
        case Fn::min_fn: {
          double acc = eval_node(*n.args[0], pt);
          for (std::size_t i = 1; i < n.args.size(); ++i) {
            const double v = eval_node(*n.args[i], pt);
            acc = n.fn == Fn::max_fn ? std::max(acc, v) : std::min(acc, v);
          }
          return acc;
        }
      }
      eval_fail("bad function node", n.pos);
    }
  }
  eval_fail("bad expression node", n.pos);
}

// ---- printing; output re-parses to an equivalent tree ----

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string print_expr(const Node& n);

const char* fn_name(Fn fn) {
  switch (fn) {
    case Fn::exp_fn: return "exp";
    case Fn::log_fn: return "log";
    case Fn::abs_fn: return "abs";
    case Fn::sqrt_fn: return "sqrt";
    case Fn::max_fn: return "max";
    case Fn::min_fn: return "min";
  }
  return "?";
}

std::string print_base(const Node& n) {
  switch (n.kind) {
    case Kind::number: return format_number(n.value);
    case Kind::variable: return "x" + std::to_string(n.var + 1);
    case Kind::neg: return "-" + print_base(*n.a);
    case Kind::call: {
      std::string s = fn_name(n.fn);
      s += "(";
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) s += ", ";
        s += print_expr(*n.args[i]);
      }
      s += ")";
      return s;
    }
    default: return "(" + print_expr(n) + ")";
  }
}

std::string print_factor(const Node& n) {
  if (n.kind == Kind::pow) return print_base(*n.a) + "^" + std::to_string(n.exponent);
  return print_base(n);
}

std::string print_term(const Node& n) {
  if (n.kind == Kind::mul || n.kind == Kind::div)
    return print_term(*n.a) + (n.kind == Kind::mul ? "*" : "/") + print_factor(*n.b);
  return print_factor(n);
}

std::string print_expr(const Node& n) {
  if (n.kind == Kind::add || n.kind == Kind::sub)
    return print_expr(*n.a) + (n.kind == Kind::add ? " + " : " - ") + print_term(*n.b);
  return print_term(n);
}

}  // namespace
}  // namespace expr

// ---- catalog ----

namespace {

enum class CatalogId {
  quadratic_form,
  log_sum_exp,
  max_coord,
  p_norm,
  exp_coord,
  neg_entropy,
  power_abs,
  cube_coord,
  product_coords,
  sin_coord,
};

struct CatalogEntry {
  const char* name;
  CatalogId id;
  CatalogShelf shelf;
};

const CatalogEntry kCatalog[] = {
    {"quadratic_form", CatalogId::quadratic_form, CatalogShelf::convex},
    {"log_sum_exp", CatalogId::log_sum_exp, CatalogShelf::convex},
    {"max_coord", CatalogId::max_coord, CatalogShelf::convex},
    {"p_norm", CatalogId::p_norm, CatalogShelf::convex},
    {"exp_coord", CatalogId::exp_coord, CatalogShelf::convex},
    {"neg_entropy", CatalogId::neg_entropy, CatalogShelf::convex},
    {"power_abs", CatalogId::power_abs, CatalogShelf::convex},
    {"cube_coord", CatalogId::cube_coord, CatalogShelf::non_convex},
    {"product_coords", CatalogId::product_coords, CatalogShelf::non_convex},
    {"sin_coord", CatalogId::sin_coord, CatalogShelf::non_convex},
};

const CatalogEntry* find_entry(const std::string& name) {
  for (const auto& e : kCatalog)
    if (name == e.name) return &e;
  return nullptr;
}

CatalogId entry_id(const std::string& name) { return find_entry(name)->id; }

double catalog_eval(CatalogId id, const CatalogParams& p, std::span<const double> x) {
  const std::size_t n = x.size();
  switch (id) {
    case CatalogId::quadratic_form: {
      double acc = p.constant;
      for (std::size_t i = 0; i < n; ++i) {
        acc += p.linear(static_cast<Eigen::Index>(i)) * x[i];
        for (std::size_t j = 0; j < n; ++j)
          acc += x[i] * p.quadratic(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
                 x[j];
      }
      return acc;
    }
    case CatalogId::log_sum_exp: {
      double m = x[0];
      for (std::size_t i = 1; i < n; ++i) m = std::max(m, x[i]);
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += std::exp(x[i] - m);
      return m + std::log(acc);
    }
    case CatalogId::max_coord: {
      double m = x[0];
      for (std::size_t i = 1; i < n; ++i) m = std::max(m, x[i]);
      return m;
    }
    case CatalogId::p_norm: {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += std::pow(std::fabs(x[i]), p.p);
      return std::pow(acc, 1.0 / p.p);
    }
    case CatalogId::exp_coord: return std::exp(x[static_cast<std::size_t>(p.index - 1)]);
    case CatalogId::neg_entropy: {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (x[i] <= 0.0) throw EvalError("neg_entropy: non-positive coordinate");
        acc += x[i] * std::log(x[i]);
      }
      return acc;
    }
    case CatalogId::power_abs: {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += std::pow(std::fabs(x[i]), p.p);
      return acc;
    }
    case CatalogId::cube_coord: {
      const double v = x[static_cast<std::size_t>(p.index - 1)];
      return v * v * v;
    }
    case CatalogId::product_coords: {
      double acc = 1.0;
      for (std::size_t i = 0; i < n; ++i) acc *= x[i];
      return acc;
    }
    case CatalogId::sin_coord: return std::sin(x[static_cast<std::size_t>(p.index - 1)]);
  }
  throw EvalError("bad catalog entry");
}

}  // namespace

ScalarFunction ScalarFunction::parse(std::string_view text, int arity) {
  if (arity < 1) throw ValidationError("function arity must be >= 1");
  const auto toks = expr::lex(text);
  expr::Parser p{toks, 0, arity};
  expr::NodePtr root = p.parse_expr();
  if (p.peek().type != expr::Token::end)
    throw ValidationError("parse error at position " + std::to_string(p.peek().pos) +
                          ": unexpected trailing input");
  ScalarFunction f;
  f.arity_ = arity;
  f.root_ = root;
  return f;
}

ScalarFunction ScalarFunction::catalog(const std::string& name, const CatalogParams& params,
                                       int arity) {
  if (arity < 1) throw ValidationError("function arity must be >= 1");
  const CatalogEntry* entry = find_entry(name);
  if (!entry) throw ValidationError("unknown catalog function '" + name + "'");

  CatalogParams p = params;
  switch (entry->id) {
    case CatalogId::quadratic_form: {
      if (p.quadratic.size() == 0) p.quadratic = RealMatrix::Identity(arity, arity);
      if (p.linear.size() == 0) p.linear = RealVector::Zero(arity);
      if (p.quadratic.rows() != arity || p.quadratic.cols() != arity)
        throw ValidationError("quadratic_form: Q must be n x n");
      if (p.linear.size() != arity) throw ValidationError("quadratic_form: b must have length n");
      const double qscale = std::max(1.0, p.quadratic.norm());
      if ((p.quadratic - p.quadratic.transpose()).norm() > 1e-10 * qscale)
        throw ValidationError("quadratic_form: Q must be symmetric");
      p.quadratic = 0.5 * (p.quadratic + p.quadratic.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<RealMatrix> es(p.quadratic, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() < -1e-10 * qscale)
        throw ValidationError("quadratic_form: Q must be positive semidefinite");
      break;
    }
    case CatalogId::p_norm:
    case CatalogId::power_abs:
      if (!(p.p >= 1.0))
        throw ValidationError(name + ": exponent p must be >= 1, got " + std::to_string(p.p));
      break;
    case CatalogId::exp_coord:
    case CatalogId::cube_coord:
    case CatalogId::sin_coord:
      if (p.index < 1 || p.index > arity)
        throw ValidationError(name + ": coordinate index out of range");
      break;
    default: break;
  }

  ScalarFunction f;
  f.arity_ = arity;
  f.catalog_name_ = name;
  f.params_ = std::move(p);
  f.shelf_ = entry->shelf;
  return f;
}

bool ScalarFunction::is_catalog_name(const std::string& name) { return find_entry(name) != nullptr; }

namespace {

int max_variable(const expr::Node& n) {
  int m = n.kind == expr::Kind::variable ? n.var + 1 : 0;
  if (n.a) m = std::max(m, max_variable(*n.a));
  if (n.b) m = std::max(m, max_variable(*n.b));
  for (const auto& arg : n.args) m = std::max(m, max_variable(*arg));
  return m;
}

}  // namespace

int ScalarFunction::infer_arity(std::string_view text) {
  const ScalarFunction f = parse(text, 64);
  return std::max(1, max_variable(*f.root_));
}

const std::vector<std::string>& ScalarFunction::catalog_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& e : kCatalog) v.emplace_back(e.name);
    return v;
  }();
  return names;
}

double ScalarFunction::eval(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != arity_)
    throw ValidationError("eval: point arity mismatch");
  double v;
  if (is_catalog()) {
    v = catalog_eval(entry_id(catalog_name_), params_, point);
  } else {
    v = expr::eval_node(*root_, point);
  }
  if (!std::isfinite(v)) throw EvalError("non-finite result");
  return v;
}

std::string ScalarFunction::to_string() const {
  if (!is_catalog()) return expr::print_expr(*root_);
  std::ostringstream os;
  os << catalog_name_;
  const CatalogId id = entry_id(catalog_name_);
  if (id == CatalogId::p_norm || id == CatalogId::power_abs)
    os << "[p=" << params_.p << "]";
  else if (id == CatalogId::exp_coord || id == CatalogId::cube_coord || id == CatalogId::sin_coord)
    os << "[i=" << params_.index << "]";
  return os.str();
}

// ---- convexity probe ----

const char* to_string(ConvexityStatus status) {
  switch (status) {
    case ConvexityStatus::probably_convex: return "probably_convex";
    case ConvexityStatus::not_convex: return "not_convex";
    case ConvexityStatus::indeterminate: return "indeterminate";
  }
  return "?";
}

namespace {

struct ProbeSample {
  std::vector<double> a, b, mid;
  // outcome: 0 clean, 1 midpoint violation, 2 evaluation error
  int outcome = 0;
  double gap = 0.0;
  std::string diagnostic;
};

ProbeSample run_probe_sample(const ScalarFunction& f, const CubeDomain& dom, std::uint64_t seed,
                             std::int64_t index) {
  const int n = dom.arity();
  Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(index));
  ProbeSample s;
  s.a.resize(static_cast<std::size_t>(n));
  s.b.resize(static_cast<std::size_t>(n));
  s.mid.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    s.a[static_cast<std::size_t>(j)] = rng.uniform(dom.interval(j).lo, dom.interval(j).hi);
  for (int j = 0; j < n; ++j)
    s.b[static_cast<std::size_t>(j)] = rng.uniform(dom.interval(j).lo, dom.interval(j).hi);
  for (int j = 0; j < n; ++j)
    s.mid[static_cast<std::size_t>(j)] =
        0.5 * (s.a[static_cast<std::size_t>(j)] + s.b[static_cast<std::size_t>(j)]);
  try {
    const double fa = f.eval(s.a);
    const double fb = f.eval(s.b);
    const double fm = f.eval(s.mid);
    const double scale = std::max({std::fabs(fa), std::fabs(fb), std::fabs(fm)});
    const double tol = kProbeTolRel * (1.0 + scale);
    s.gap = fm - 0.5 * (fa + fb);
    if (s.gap > tol) s.outcome = 1;
  } catch (const EvalError& e) {
    s.outcome = 2;
    s.diagnostic = e.what();
  }
  return s;
}

}  // namespace

ConvexityVerdict midpoint_convexity_probe(const ScalarFunction& f, const CubeDomain& dom,
                                          std::int64_t samples, std::uint64_t seed,
                                          ExecMode mode) {
  if (f.arity() != dom.arity())
    throw ValidationError("convexity probe: function arity does not match cube");
  const std::int64_t hit = first_index_where(samples, mode, [&](std::int64_t i) {
    return run_probe_sample(f, dom, seed, i).outcome != 0;
  });
  ConvexityVerdict v;
  if (hit < 0) {
    v.status = ConvexityStatus::probably_convex;
    return v;
  }
  const ProbeSample s = run_probe_sample(f, dom, seed, hit);
  if (s.outcome == 1) {
    v.status = ConvexityStatus::not_convex;
    v.witness = ConvexityWitness{s.a, s.b, s.gap};
  } else {
    v.status = ConvexityStatus::indeterminate;
    v.diagnostic = "sample " + std::to_string(hit) + ": " + s.diagnostic;
  }
  return v;
}

}  // namespace opjensen
