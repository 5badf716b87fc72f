#include "projdens/expr.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "projdens/errors.hpp"

namespace projdens {

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

bool is_integer(double v) { return std::isfinite(v) && v == std::nearbyint(v); }

bool pow_in_domain(double base, double e) {
  if (is_integer(e)) return e >= 0.0 || base != 0.0;
  return base > 0.0;
}

// Returns true and writes the value when a unary function folds cleanly.
bool fold_unary(Op op, double x, double& out) {
  switch (op) {
    case Op::kNeg: out = -x; return true;
    case Op::kSin: out = std::sin(x); return true;
    case Op::kCos: out = std::cos(x); return true;
    case Op::kExp: out = std::exp(x); return std::isfinite(out);
    case Op::kAtan: out = std::atan(x); return true;
    case Op::kLog:
      if (x <= 0.0) return false;
      out = std::log(x);
      return true;
    case Op::kSqrt:
      if (x < 0.0) return false;
      out = std::sqrt(x);
      return true;
    default: return false;
  }
}

const char* function_name(Op op) {
  switch (op) {
    case Op::kSin: return "sin";
    case Op::kCos: return "cos";
    case Op::kExp: return "exp";
    case Op::kLog: return "log";
    case Op::kSqrt: return "sqrt";
    case Op::kAtan: return "atan";
    default: return "?";
  }
}

}  // namespace

Expr::Expr() {
  static const NodePtr zero =
      std::make_shared<const Node>(Node{Op::kConst, 0.0, -1, 0, nullptr, nullptr});
  node_ = zero;
}

Expr Expr::make(Op op, double num, int var, const Expr* a, const Expr* b) {
  int arity = 0;
  if (op == Op::kVar) arity = var + 1;
  if (a) arity = std::max(arity, a->arity());
  if (b) arity = std::max(arity, b->arity());
  return Expr(std::make_shared<const Node>(
      Node{op, num, var, arity, a ? a->node_ : nullptr, b ? b->node_ : nullptr}));
}

Expr Expr::constant(double v) {
  if (v == 0.0 && !std::signbit(v)) return Expr();
  return make(Op::kConst, v, -1, nullptr, nullptr);
}

Expr Expr::variable(int index) {
  assert(index >= 0);
  return make(Op::kVar, 0.0, index, nullptr, nullptr);
}

Op Expr::op() const { return node_->op; }
double Expr::value() const { return node_->num; }
int Expr::index() const { return node_->var; }
double Expr::exponent() const { return node_->num; }
Expr Expr::lhs() const { return Expr(node_->a); }
Expr Expr::rhs() const { return Expr(node_->b); }
int Expr::arity() const { return node_->arity; }

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() + b.value());
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  if (b.op() == Op::kNeg) return a - b.lhs();
  return Expr::make(Op::kAdd, 0.0, -1, &a, &b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() - b.value());
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return -b;
  if (a.same_node(b)) return Expr();
  if (b.op() == Op::kNeg) return a + b.lhs();
  return Expr::make(Op::kSub, 0.0, -1, &a, &b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() * b.value());
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr();
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(-1.0)) return -b;
  if (b.is_constant(-1.0)) return -a;
  if (a.op() == Op::kNeg) return -(a.lhs() * b);
  if (b.op() == Op::kNeg) return -(a * b.lhs());
  // constants to the left keep printed forms short
  if (b.is_constant()) return Expr::make(Op::kMul, 0.0, -1, &b, &a);
  return Expr::make(Op::kMul, 0.0, -1, &a, &b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && b.value() != 0.0)
    return Expr::constant(a.value() / b.value());
  if (a.is_constant(0.0)) return Expr();
  if (b.is_constant(1.0)) return a;
  if (b.is_constant(-1.0)) return -a;
  if (a.op() == Op::kNeg) return -(a.lhs() / b);
  if (b.op() == Op::kNeg) return -(a / b.lhs());
  return Expr::make(Op::kDiv, 0.0, -1, &a, &b);
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr::constant(-a.value());
  if (a.op() == Op::kNeg) return a.lhs();
  if (a.op() == Op::kSub) {
    const Expr l = a.rhs(), r = a.lhs();
    return Expr::make(Op::kSub, 0.0, -1, &l, &r);
  }
  return Expr::make(Op::kNeg, 0.0, -1, &a, nullptr);
}

Expr pow(const Expr& base, double exponent) {
  if (exponent == 0.0) return Expr::constant(1.0);
  if (exponent == 1.0) return base;
  if (base.is_constant() && pow_in_domain(base.value(), exponent)) {
    double v = std::pow(base.value(), exponent);
    if (std::isfinite(v)) return Expr::constant(v);
  }
  if (base.op() == Op::kPow && is_integer(exponent) && is_integer(base.exponent()))
    return pow(base.lhs(), base.exponent() * exponent);
  return Expr::make(Op::kPow, exponent, -1, &base, nullptr);
}

Expr apply(Op op, const Expr& arg) {
  assert(op >= Op::kSin && op <= Op::kAtan);
  double v = 0.0;
  if (arg.is_constant() && fold_unary(op, arg.value(), v)) return Expr::constant(v);
  return Expr::make(op, 0.0, -1, &arg, nullptr);
}

Expr sum(std::span<const Expr> terms) {
  Expr s;
  for (const auto& t : terms) s = s + t;
  return s;
}

namespace {

class Deriver {
 public:
  explicit Deriver(int var) : var_(var) {}

  Expr operator()(const Expr& f) {
    if (f.arity() <= var_) return Expr();
    auto it = memo_.find(f.node());
    if (it != memo_.end()) return it->second;
    Expr r = compute(f);
    memo_.emplace(f.node(), r);
    return r;
  }

 private:
  Expr compute(const Expr& f) {
    const Expr a = f.lhs();
    switch (f.op()) {
      case Op::kConst: return Expr();
      case Op::kVar: return Expr::constant(f.index() == var_ ? 1.0 : 0.0);
      case Op::kAdd: return (*this)(a) + (*this)(f.rhs());
      case Op::kSub: return (*this)(a) - (*this)(f.rhs());
      case Op::kMul: {
        const Expr b = f.rhs();
        return (*this)(a) * b + a * (*this)(b);
      }
      case Op::kDiv: {
        const Expr b = f.rhs();
        const Expr da = (*this)(a);
        const Expr db = (*this)(b);
        if (db.is_constant(0.0)) return da / b;
        return (da * b - a * db) / pow(b, 2.0);
      }
      case Op::kNeg: return -(*this)(a);
      case Op::kPow: {
        const double c = f.exponent();
        return (c * pow(a, c - 1.0)) * (*this)(a);
      }
      case Op::kSin: return cos(a) * (*this)(a);
      case Op::kCos: return -(sin(a) * (*this)(a));
      case Op::kExp: return f * (*this)(a);
      case Op::kLog: return (*this)(a) / a;
      case Op::kSqrt: return (*this)(a) / (2.0 * f);
      case Op::kAtan: return (*this)(a) / (1.0 + pow(a, 2.0));
    }
    return Expr();
  }

  int var_;
  std::unordered_map<const Expr::Node*, Expr> memo_;
};

class Substituter {
 public:
  explicit Substituter(std::span<const Expr> values) : values_(values) {}

  Expr operator()(const Expr& f) {
    if (f.arity() == 0) return f;
    auto it = memo_.find(f.node());
    if (it != memo_.end()) return it->second;
    Expr r = compute(f);
    memo_.emplace(f.node(), r);
    return r;
  }

 private:
  Expr compute(const Expr& f) {
    switch (f.op()) {
      case Op::kConst: return f;
      case Op::kVar:
        if (f.index() >= static_cast<int>(values_.size()))
          throw DimensionError("substitution has no value for x" + std::to_string(f.index()));
        return values_[f.index()];
      case Op::kAdd: return (*this)(f.lhs()) + (*this)(f.rhs());
      case Op::kSub: return (*this)(f.lhs()) - (*this)(f.rhs());
      case Op::kMul: return (*this)(f.lhs()) * (*this)(f.rhs());
      case Op::kDiv: return (*this)(f.lhs()) / (*this)(f.rhs());
      case Op::kNeg: return -(*this)(f.lhs());
      case Op::kPow: return pow((*this)(f.lhs()), f.exponent());
      default: return apply(f.op(), (*this)(f.lhs()));
    }
  }

  std::span<const Expr> values_;
  std::unordered_map<const Expr::Node*, Expr> memo_;
};

}  // namespace

Expr derive(const Expr& f, int var) { return Deriver(var)(f); }

Expr substitute(const Expr& f, std::span<const Expr> values) {
  return Substituter(values)(f);
}

Expr shift_variables(const Expr& f, int offset) {
  std::vector<Expr> vars;
  vars.reserve(f.arity());
  for (int i = 0; i < f.arity(); ++i) vars.push_back(Expr::variable(i + offset));
  return substitute(f, vars);
}

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int precedence(const Expr& f) {
  switch (f.op()) {
    case Op::kAdd:
    case Op::kSub: return 1;
    case Op::kMul:
    case Op::kDiv: return 2;
    case Op::kNeg: return 3;
    case Op::kConst: return f.value() < 0.0 || std::signbit(f.value()) ? 3 : 5;
    case Op::kPow: return 4;
    default: return 5;
  }
}

void print(const Expr& f, std::string& out);

void print_child(const Expr& c, int min_prec, std::string& out) {
  if (precedence(c) < min_prec) {
    out += '(';
    print(c, out);
    out += ')';
  } else {
    print(c, out);
  }
}

void print(const Expr& f, std::string& out) {
  switch (f.op()) {
    case Op::kConst: out += format_number(f.value()); return;
    case Op::kVar:
      out += 'x';
      out += std::to_string(f.index());
      return;
    case Op::kAdd:
      print_child(f.lhs(), 1, out);
      out += " + ";
      print_child(f.rhs(), 1, out);
      return;
    case Op::kSub:
      print_child(f.lhs(), 1, out);
      out += " - ";
      print_child(f.rhs(), 2, out);
      return;
    case Op::kMul:
      print_child(f.lhs(), 2, out);
      out += '*';
      print_child(f.rhs(), 3, out);
      return;
    case Op::kDiv:
      print_child(f.lhs(), 2, out);
      out += '/';
      print_child(f.rhs(), 3, out);
      return;
    case Op::kNeg:
      out += '-';
      print_child(f.lhs(), 3, out);
      return;
    case Op::kPow:
      print_child(f.lhs(), 5, out);
      out += '^';
      out += format_number(f.exponent());
      return;
    default:
      out += function_name(f.op());
      out += '(';
      print(f.lhs(), out);
      out += ')';
      return;
  }
}

void count_nodes(const Expr::Node* n, std::unordered_map<const Expr::Node*, bool>& seen) {
  if (!n || !seen.emplace(n, true).second) return;
  count_nodes(n->a.get(), seen);
  count_nodes(n->b.get(), seen);
}

}  // namespace

std::string to_string(const Expr& f) {
  std::string out;
  print(f, out);
  return out;
}

std::size_t node_count(const Expr& f) {
  std::unordered_map<const Expr::Node*, bool> seen;
  count_nodes(f.node(), seen);
  return seen.size();
}

// ---------------------------------------------------------------------------
// Tape

namespace {

struct TapeBuilder {
  std::unordered_map<const Expr::Node*, int> slot;

  template <typename Instr>
  int emit(const Expr::Node* n, std::vector<Instr>& code) {
    auto it = slot.find(n);
    if (it != slot.end()) return it->second;
    int a = n->a ? emit(n->a.get(), code) : -1;
    int b = n->b ? emit(n->b.get(), code) : -1;
    code.push_back(Instr{n->op, n->num, n->var, a, b});
    int id = static_cast<int>(code.size()) - 1;
    slot.emplace(n, id);
    return id;
  }
};

[[noreturn]] void domain_error(const char* what, double x) {
  throw DomainError(std::string(what) + " (argument " + format_number(x) + ")");
}

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string("non-finite result in ") + what);
  return v;
}

}  // namespace

Tape::Tape(const Expr& root) : arity_(root.arity()) {
  TapeBuilder builder;
  builder.emit(root.node(), code_);
}

double Tape::evaluate(std::span<const double> point) const {
  if (static_cast<int>(point.size()) < arity_)
    throw DimensionError("point has " + std::to_string(point.size()) +
                         " coordinates, field needs " + std::to_string(arity_));
  std::vector<double> v(code_.size());
  for (std::size_t k = 0; k < code_.size(); ++k) {
    const Instr& in = code_[k];
    const double a = in.a >= 0 ? v[in.a] : 0.0;
    const double b = in.b >= 0 ? v[in.b] : 0.0;
    double r = 0.0;
    switch (in.op) {
      case Op::kConst: r = in.num; break;
      case Op::kVar: r = point[in.var]; break;
      case Op::kAdd: r = a + b; break;
      case Op::kSub: r = a - b; break;
      case Op::kMul: r = a * b; break;
      case Op::kDiv:
        if (b == 0.0) domain_error("division by zero", b);
        r = a / b;
        break;
      case Op::kNeg: r = -a; break;
      case Op::kPow:
        if (!pow_in_domain(a, in.num)) domain_error("power outside domain", a);
        r = checked(std::pow(a, in.num), "pow");
        break;
      case Op::kSin: r = std::sin(a); break;
      case Op::kCos: r = std::cos(a); break;
      case Op::kExp: r = checked(std::exp(a), "exp"); break;
      case Op::kLog:
        if (a <= 0.0) domain_error("log of non-positive value", a);
        r = std::log(a);
        break;
      case Op::kSqrt:
        if (a < 0.0) domain_error("sqrt of negative value", a);
        r = std::sqrt(a);
        break;
      case Op::kAtan: r = std::atan(a); break;
    }
    v[k] = r;
  }
  return v.back();
}

Jet2 Tape::evaluate_jet(std::span<const double> point) const {
  const int n = static_cast<int>(point.size());
  if (n > kMaxJetDim) throw DimensionError("jet dimension exceeds " + std::to_string(kMaxJetDim));
  std::vector<double> seeds(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) seeds[i * n + i] = 1.0;
  return evaluate_jet(point, seeds, n);
}

Jet2 Tape::evaluate_jet(std::span<const double> point, std::span<const double> seeds,
                        int seed_dim) const {
  if (static_cast<int>(point.size()) < arity_)
    throw DimensionError("point has " + std::to_string(point.size()) +
                         " coordinates, field needs " + std::to_string(arity_));
  if (seed_dim > kMaxJetDim) throw DimensionError("jet dimension exceeds limit");
  const int m = seed_dim;
  std::vector<Jet2> v(code_.size());
  for (std::size_t k = 0; k < code_.size(); ++k) {
    const Instr& in = code_[k];
    const Jet2* a = in.a >= 0 ? &v[in.a] : nullptr;
    const Jet2* b = in.b >= 0 ? &v[in.b] : nullptr;
    Jet2 r;
    switch (in.op) {
      case Op::kConst: r = Jet2(m, in.num); break;
      case Op::kVar:
        r = Jet2(m, point[in.var]);
        for (int i = 0; i < m; ++i) r.grad[i] = seeds[in.var * m + i];
        break;
      case Op::kAdd: r = *a + *b; break;
      case Op::kSub: r = *a - *b; break;
      case Op::kMul: r = *a * *b; break;
      case Op::kDiv:
        if (b->value == 0.0) domain_error("division by zero", b->value);
        r = *a / *b;
        break;
      case Op::kNeg: r = -*a; break;
      case Op::kPow: {
        const double c = in.num;
        const double u = a->value;
        if (!pow_in_domain(u, c)) domain_error("power outside domain", u);
        // x^c with c in {0,1} never reaches here; guard the c-1, c-2 powers at u = 0
        const double g0 = std::pow(u, c);
        const double g1 = c * std::pow(u, c - 1.0);
        const double g2 = (c == 1.0) ? 0.0 : c * (c - 1.0) * std::pow(u, c - 2.0);
        r = chain(*a, checked(g0, "pow"), checked(g1, "pow"), checked(g2, "pow"));
        break;
      }
      case Op::kSin: {
        const double s = std::sin(a->value), c = std::cos(a->value);
        r = chain(*a, s, c, -s);
        break;
      }
      case Op::kCos: {
        const double s = std::sin(a->value), c = std::cos(a->value);
        r = chain(*a, c, -s, -c);
        break;
      }
      case Op::kExp: {
        const double e = checked(std::exp(a->value), "exp");
        r = chain(*a, e, e, e);
        break;
      }
      case Op::kLog: {
        const double u = a->value;
        if (u <= 0.0) domain_error("log of non-positive value", u);
        // grad = du/u keeps t*d/dt(log t) == 1 exact
        r = Jet2(m, std::log(u));
        for (int i = 0; i < m; ++i) r.grad[i] = a->grad[i] / u;
        for (int i = 0; i < m; ++i) {
          for (int j = i; j < m; ++j) {
            double h = (a->dd(i, j) - r.grad[i] * a->grad[j]) / u;
            r.dd(i, j) = h;
            r.dd(j, i) = h;
          }
        }
        break;
      }
      case Op::kSqrt: {
        const double u = a->value;
        if (u <= 0.0) domain_error("sqrt derivative at non-positive value", u);
        const double s = std::sqrt(u);
        r = chain(*a, s, 0.5 / s, -0.25 / (s * u));
        break;
      }
      case Op::kAtan: {
        const double u = a->value;
        const double q = 1.0 / (1.0 + u * u);
        r = chain(*a, std::atan(u), q, -2.0 * u * q * q);
        break;
      }
    }
    v[k] = r;
  }
  return v.back();
}

}  // namespace projdens
