#pragma once

// Immutable expression DAGs over chart variables x0..x{n-1}.
//
// Nodes are shared; the smart constructors fold constants and drop the
// trivial identities (a+0, a*1, a*0, ...), so symbolic derivatives and
// substitutions stay compact enough to be composed several levels deep.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "projdens/jet.hpp"

namespace projdens {

enum class Op : std::uint8_t {
  kConst,
  kVar,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kNeg,
  kPow,
  kSin,
  kCos,
  kExp,
  kLog,
  kSqrt,
  kAtan,
};

class Expr {
 public:
  struct Node;

  /// The constant 0.
  Expr();
  static Expr constant(double v);
  static Expr variable(int index);

  Op op() const;
  double value() const;     // kConst only
  int index() const;        // kVar only
  double exponent() const;  // kPow only
  Expr lhs() const;  // binary ops, or the argument of unary ops
  Expr rhs() const;

  bool is_constant() const { return op() == Op::kConst; }
  bool is_constant(double v) const { return is_constant() && value() == v; }
  bool same_node(const Expr& other) const { return node_ == other.node_; }
  const Node* node() const { return node_.get(); }

  /// One past the highest variable index used; 0 for closed expressions.
  int arity() const;

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr make(Op op, double num, int var, const Expr* a, const Expr* b);

  friend Expr operator+(const Expr&, const Expr&);
  friend Expr operator-(const Expr&, const Expr&);
  friend Expr operator*(const Expr&, const Expr&);
  friend Expr operator/(const Expr&, const Expr&);
  friend Expr operator-(const Expr&);
  friend Expr pow(const Expr&, double);
  friend Expr apply(Op, const Expr&);

  std::shared_ptr<const Node> node_;
};

struct Expr::Node {
  Op op;
  double num;  // constant value or power exponent
  int var;
  int arity;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
inline Expr operator+(const Expr& a, double b) { return a + Expr::constant(b); }
inline Expr operator+(double a, const Expr& b) { return Expr::constant(a) + b; }
inline Expr operator-(const Expr& a, double b) { return a - Expr::constant(b); }
inline Expr operator-(double a, const Expr& b) { return Expr::constant(a) - b; }
inline Expr operator*(double a, const Expr& b) { return Expr::constant(a) * b; }
inline Expr operator*(const Expr& a, double b) { return a * Expr::constant(b); }
inline Expr operator/(const Expr& a, double b) { return a / Expr::constant(b); }
inline Expr operator/(double a, const Expr& b) { return Expr::constant(a) / b; }

Expr pow(const Expr& base, double exponent);
/// Unary function node; `op` must be one of kSin..kAtan.
Expr apply(Op op, const Expr& arg);
inline Expr sin(const Expr& a) { return apply(Op::kSin, a); }
inline Expr cos(const Expr& a) { return apply(Op::kCos, a); }
inline Expr exp(const Expr& a) { return apply(Op::kExp, a); }
inline Expr log(const Expr& a) { return apply(Op::kLog, a); }
inline Expr sqrt(const Expr& a) { return apply(Op::kSqrt, a); }
inline Expr atan(const Expr& a) { return apply(Op::kAtan, a); }

/// Sum of a sequence, 0 when empty.
Expr sum(std::span<const Expr> terms);

/// Symbolic partial derivative with respect to variable `var`.
Expr derive(const Expr& f, int var);

/// Replaces each variable x_i by `values[i]`.
Expr substitute(const Expr& f, std::span<const Expr> values);

/// Renames x_i to x_{i+offset}.
Expr shift_variables(const Expr& f, int offset);

/// Round-trippable text in the expression grammar (17 significant digits).
std::string to_string(const Expr& f);

/// Number of distinct nodes in the DAG.
std::size_t node_count(const Expr& f);

/// Straight-line evaluation program for a DAG, each shared node visited once.
class Tape {
 public:
  explicit Tape(const Expr& root);

  /// Plain value. Throws DomainError outside the domain.
  double evaluate(std::span<const double> point) const;

  /// Jet seeded by the identity: grad = ∂f/∂x, hess = ∂²f/∂x∂x.
  Jet2 evaluate_jet(std::span<const double> point) const;

  /// Jet along arbitrary seed directions: variable i enters with gradient
  /// `seeds[i*m .. i*m+m)` where m = seed_dim. Computes the chain rule
  /// through any map into the chart.
  Jet2 evaluate_jet(std::span<const double> point, std::span<const double> seeds,
                    int seed_dim) const;

  int arity() const { return arity_; }
  std::size_t size() const { return code_.size(); }

 private:
  struct Instr {
    Op op;
    double num;
    int var;
    int a;
    int b;
  };
  std::vector<Instr> code_;
  int arity_ = 0;
};

/// Parses text against the expression grammar. Throws ParseError,
/// UnknownIdentifierError or DimensionError (variable index >= dim).
Expr parse_expr(std::string_view text, int dim);

}  // namespace projdens
