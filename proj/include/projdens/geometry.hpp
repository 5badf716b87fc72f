#pragma once

// Charts, coordinate transitions and the transformation laws of the
// objects that live on them.
//
// Convention: a TransitionMap T goes from a source chart (coordinates x) to
// a target chart (coordinates y = f(x)). Symbolic transforms return fields
// expressed in the target chart; numeric transforms take a source point and
// return components at T(p).

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "projdens/tensors.hpp"

namespace projdens {

/// Axis-aligned box used to draw test points.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
};

class Chart {
 public:
  /// Throws DimensionError unless dim >= 2 and the box matches dim.
  Chart(int dim, Box box);

  int dim() const { return dim_; }
  const Box& box() const { return box_; }
  bool contains(std::span<const double> p) const;

  /// Deterministic uniform draws from the box (platform-independent).
  std::vector<Point> sample(std::uint64_t seed, int count) const;

 private:
  int dim_;
  Box box_;
};

/// Uniform doubles in [0,1) from a seed, identical on every platform.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed);
  double next();
  double next(double lo, double hi) { return lo + (hi - lo) * next(); }

 private:
  std::uint64_t state_;
};

using ExprMatrix = std::vector<std::vector<Expr>>;

Expr symbolic_det(const ExprMatrix& m);
/// Adjugate over determinant.
ExprMatrix symbolic_inverse(const ExprMatrix& m);

class TransitionMap {
 public:
  /// Components f^i of the map and of its declared inverse, both on charts of
  /// dimension n = forward.size().
  TransitionMap(std::vector<ScalarField> forward, std::vector<ScalarField> inverse);

  int dim() const { return static_cast<int>(forward_.size()); }
  const std::vector<ScalarField>& forward() const { return forward_; }
  const std::vector<ScalarField>& inverse() const { return inverse_; }

  Point apply(std::span<const double> x) const;
  Point apply_inverse(std::span<const double> y) const;
  TransitionMap inverted() const { return {inverse_, forward_}; }

  /// ∂y^i/∂x^j as expressions in the source coordinates.
  ExprMatrix jacobian_exprs() const;
  /// ∂x^i/∂y^j as expressions in the target coordinates.
  ExprMatrix inverse_jacobian_exprs() const;
  /// det(∂y/∂x) as an expression in the source coordinates.
  Expr jacobian_det_expr() const;

  /// max |f(f⁻¹(y)) - y| and |f⁻¹(f(x)) - x| over the given source points.
  double roundtrip_defect(std::span<const Point> source_points) const;

 private:
  std::vector<ScalarField> forward_;
  std::vector<ScalarField> inverse_;
};

/// second ∘ first.
TransitionMap compose(const TransitionMap& second, const TransitionMap& first);
TransitionMap identity_map(int n);

struct JacobianData {
  Eigen::MatrixXd J;  // J(i,j) = ∂f^i/∂x^j
  double det = 0.0;
  double mod = 0.0;
};

/// Throws SingularJacobianError when |det J| < 1e-12.
JacobianData jacobian(const TransitionMap& T, std::span<const double> p);

// --- numeric transformation laws, source point p in, components at T(p) out

/// Γ'^k_ij = (∂y^k/∂x^c)(∂x^a/∂y^i)(∂x^b/∂y^j)Γ^c_ab + (∂y^k/∂x^c)∂²x^c/∂y^i∂y^j.
std::vector<double> transform_connection(const Connection& conn, const TransitionMap& T,
                                         std::span<const double> p);
/// S'^ij = (∂y^i/∂x^a)(∂y^j/∂x^b)S^ab, flattened row-major.
std::vector<double> transform_tensor2(const SymmetricFieldMatrix& S, const TransitionMap& T,
                                      std::span<const double> p);
/// ϑ'_i = (∂x^a/∂y^i)ϑ_a.
std::vector<double> transform_oneform(const OneForm& form, const TransitionMap& T,
                                      std::span<const double> p);

// --- symbolic transformation laws, fields on the target chart

ScalarField pushforward(const ScalarField& f, const TransitionMap& T);
Connection pushforward(const Connection& conn, const TransitionMap& T);
UpperMetric pushforward(const UpperMetric& S, const TransitionMap& T);
/// Covariant symmetric 2-tensor law (metrics).
Metric pushforward(const Metric& g, const TransitionMap& T);
OneForm pushforward(const OneForm& form, const TransitionMap& T);

}  // namespace projdens
