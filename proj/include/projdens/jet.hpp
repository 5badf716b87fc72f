#pragma once

// Second-order truncated Taylor jets in up to kMaxJetDim directions.

#include <array>
#include <cassert>
#include <cmath>

namespace projdens {

inline constexpr int kMaxJetDim = 6;

/// Value, gradient and Hessian of a scalar quantity at a point.
/// The Hessian is always stored symmetric.
struct Jet2 {
  int dim = 0;
  double value = 0.0;
  std::array<double, kMaxJetDim> grad{};
  std::array<double, kMaxJetDim * kMaxJetDim> hess{};

  Jet2() = default;
  Jet2(int d, double v) : dim(d), value(v) { assert(d >= 0 && d <= kMaxJetDim); }

  double d(int i) const { return grad[i]; }
  double dd(int i, int j) const { return hess[i * kMaxJetDim + j]; }
  double& dd(int i, int j) { return hess[i * kMaxJetDim + j]; }

  static Jet2 constant(int d, double v) { return Jet2(d, v); }
  static Jet2 variable(int d, double v, int i) {
    Jet2 j(d, v);
    j.grad[i] = 1.0;
    return j;
  }
};

/// Applies a scalar function g with derivatives (g0, g1, g2) at u.value.
inline Jet2 chain(const Jet2& u, double g0, double g1, double g2) {
  Jet2 r(u.dim, g0);
  for (int i = 0; i < u.dim; ++i) r.grad[i] = g1 * u.grad[i];
  for (int i = 0; i < u.dim; ++i) {
    for (int j = i; j < u.dim; ++j) {
      double h = g1 * u.dd(i, j) + g2 * u.grad[i] * u.grad[j];
      r.dd(i, j) = h;
      r.dd(j, i) = h;
    }
  }
  return r;
}

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  Jet2 r(a.dim, a.value + b.value);
  for (int i = 0; i < a.dim; ++i) r.grad[i] = a.grad[i] + b.grad[i];
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j) r.dd(i, j) = a.dd(i, j) + b.dd(i, j);
  return r;
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  Jet2 r(a.dim, a.value - b.value);
  for (int i = 0; i < a.dim; ++i) r.grad[i] = a.grad[i] - b.grad[i];
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j) r.dd(i, j) = a.dd(i, j) - b.dd(i, j);
  return r;
}

inline Jet2 operator-(const Jet2& a) {
  Jet2 r(a.dim, -a.value);
  for (int i = 0; i < a.dim; ++i) r.grad[i] = -a.grad[i];
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j) r.dd(i, j) = -a.dd(i, j);
  return r;
}

/// Leibniz rule, truncated at order two.
inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r(a.dim, a.value * b.value);
  for (int i = 0; i < a.dim; ++i) r.grad[i] = a.grad[i] * b.value + a.value * b.grad[i];
  for (int i = 0; i < a.dim; ++i) {
    for (int j = i; j < a.dim; ++j) {
      double h = a.dd(i, j) * b.value + a.value * b.dd(i, j) + a.grad[i] * b.grad[j] +
                 a.grad[j] * b.grad[i];
      r.dd(i, j) = h;
      r.dd(j, i) = h;
    }
  }
  return r;
}

/// Quotient; the caller guarantees b.value != 0.
inline Jet2 operator/(const Jet2& a, const Jet2& b) {
  const double q = a.value / b.value;
  Jet2 r(a.dim, q);
  for (int i = 0; i < a.dim; ++i) r.grad[i] = (a.grad[i] - q * b.grad[i]) / b.value;
  for (int i = 0; i < a.dim; ++i) {
    for (int j = i; j < a.dim; ++j) {
      double h = (a.dd(i, j) - q * b.dd(i, j) - r.grad[i] * b.grad[j] - r.grad[j] * b.grad[i]) /
                 b.value;
      r.dd(i, j) = h;
      r.dd(j, i) = h;
    }
  }
  return r;
}

inline Jet2 operator*(double s, const Jet2& a) {
  Jet2 r(a.dim, s * a.value);
  for (int i = 0; i < a.dim; ++i) r.grad[i] = s * a.grad[i];
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j) r.dd(i, j) = s * a.dd(i, j);
  return r;
}

}  // namespace projdens
