#pragma once

// Hand-rolled generators for property tests. Every generated field is
// smooth on the box [0.4, 1.6]^n.

#include <cmath>
#include <string>
#include <vector>

#include "projdens/connections.hpp"
#include "projdens/field.hpp"
#include "projdens/geometry.hpp"

namespace projdens::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : u_(seed) {}

  double uniform(double lo, double hi) { return u_.next(lo, hi); }
  int integer(int lo, int hi) { return lo + static_cast<int>(u_.next() * (hi - lo + 1)) % (hi - lo + 1); }

  Point point(int n, double lo = 0.5, double hi = 1.5) {
    Point p(n);
    for (auto& x : p) x = uniform(lo, hi);
    return p;
  }

  /// Random polynomial of total degree <= deg with coefficients in [-1, 1].
  Expr polynomial(int n, int deg) {
    Expr s = Expr::constant(round3(uniform(-1, 1)));
    for (int term = 0; term < 2 + n; ++term) {
      Expr mono = Expr::constant(round3(uniform(-1, 1)));
      const int d = integer(1, deg);
      for (int k = 0; k < d; ++k) mono = mono * Expr::variable(integer(0, n - 1));
      s = s + mono;
    }
    return s;
  }

  /// Random smooth field mixing polynomials, trig, exp and bounded quotients.
  Expr smooth(int n, int depth = 2) {
    if (depth == 0) {
      return integer(0, 2) == 0 ? Expr::variable(integer(0, n - 1)) : polynomial(n, 2);
    }
    const Expr a = smooth(n, depth - 1);
    switch (integer(0, 6)) {
      case 0: return a + smooth(n, depth - 1);
      case 1: return a * smooth(n, depth - 1);
      case 2: return sin(a);
      case 3: return cos(a);
      case 4: return exp(0.3 * sin(a));
      case 5: return a / (2.0 + pow(smooth(n, depth - 1), 2.0));
      default: return sqrt(1.5 + cos(a));
    }
  }

  ScalarField smooth_field(int n, int depth = 2) { return {smooth(n, depth), n}; }

  /// Random torsion-free connection with polynomial coefficients.
  Connection polynomial_connection(int n, int deg = 2) {
    std::vector<ScalarField> c(n * n * n, ScalarField(Expr(), n));
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) c[idx3(n, k, i, j)] = ScalarField(0.5 * polynomial(n, deg), n);
    return Connection::from_upper(n, std::move(c));
  }

  OneForm polynomial_oneform(int n, int deg = 2) {
    OneForm f;
    for (int i = 0; i < n; ++i) f.emplace_back(polynomial(n, deg), n);
    return f;
  }

  /// Random symmetric contravariant tensor with polynomial entries.
  UpperMetric polynomial_upper_metric(int n, int deg = 2) {
    std::vector<ScalarField> e(n * n, ScalarField(Expr(), n));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) e[i * n + j] = ScalarField(polynomial(n, deg), n);
    return UpperMetric(SymmetricFieldMatrix::from_upper(n, std::move(e)));
  }

  /// Positive-definite analytic metric: diagonally dominant with smooth
  /// off-diagonal perturbations.
  Metric analytic_metric(int n) {
    std::vector<ScalarField> e(n * n, ScalarField(Expr(), n));
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        Expr v = 0.2 * sin(polynomial(n, 2));
        if (i == j) v = (2.0 + 0.5 * exp(0.3 * cos(polynomial(n, 2)))) + 0.2 * pow(Expr::variable(i), 2.0);
        e[i * n + j] = ScalarField(v, n);
      }
    }
    return Metric(SymmetricFieldMatrix::from_upper(n, std::move(e)));
  }

 private:
  static double round3(double v) { return std::round(v * 1000.0) / 1000.0; }
  UniformStream u_;
};

inline double rel_diff(double a, double b) { return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b))); }

inline std::vector<Point> box_points(int n, std::uint64_t seed, int count, double lo = 0.5,
                                     double hi = 1.5) {
  return Chart(n, Box{std::vector<double>(n, lo), std::vector<double>(n, hi)}).sample(seed, count);
}

}  // namespace projdens::testing
