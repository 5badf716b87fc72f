#include "projdens/tensors.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "projdens/errors.hpp"

namespace projdens {

namespace {

// Both fields agree where they can be evaluated on a few fixed probe points.
bool agree_on_probes(const ScalarField& a, const ScalarField& b) {
  if (a.expr().same_node(b.expr()) || a.to_string() == b.to_string()) return true;
  static constexpr std::array<double, 5> kBase = {0.61, 0.93, 1.27, 0.37, 1.49};
  const int n = a.dim();
  for (int probe = 0; probe < 5; ++probe) {
    Point p(n);
    for (int i = 0; i < n; ++i) p[i] = kBase[(probe + 2 * i) % kBase.size()] + 0.05 * i;
    double va = 0.0, vb = 0.0;
    try {
      va = a(p);
      vb = b(p);
    } catch (const DomainError&) {
      continue;
    }
    if (std::abs(va - vb) > 1e-9 * (1.0 + std::abs(va))) return false;
  }
  return true;
}

}  // namespace

void check_uniform_dim(const std::vector<ScalarField>& fields, int n) {
  for (const auto& f : fields)
    if (f.dim() != n)
      throw DimensionError("coefficient field on a chart of dimension " + std::to_string(f.dim()) +
                           ", expected " + std::to_string(n));
}

FieldMatrix::FieldMatrix(int n, std::vector<ScalarField> entries) : n_(n), c_(std::move(entries)) {
  if (n <= 0 || static_cast<int>(c_.size()) != n * n)
    throw DimensionError("matrix needs " + std::to_string(n * n) + " entries");
  check_uniform_dim(c_, n);
}

FieldMatrix FieldMatrix::zero(int n) {
  return {n, std::vector<ScalarField>(n * n, ScalarField(Expr(), n))};
}

std::vector<double> FieldMatrix::values(std::span<const double> p) const {
  std::vector<double> v(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) v[i] = c_[i](p);
  return v;
}

SymmetricFieldMatrix::SymmetricFieldMatrix(int n, std::vector<ScalarField> entries)
    : n_(n), c_(std::move(entries)) {
  if (n <= 0 || static_cast<int>(c_.size()) != n * n)
    throw DimensionError("symmetric matrix needs " + std::to_string(n * n) + " entries");
  check_uniform_dim(c_, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!agree_on_probes(c_[i * n + j], c_[j * n + i]))
        throw std::invalid_argument("matrix entries (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") and transpose differ");
      c_[j * n + i] = c_[i * n + j];
    }
  }
}

SymmetricFieldMatrix SymmetricFieldMatrix::from_upper(int n, std::vector<ScalarField> entries) {
  if (n <= 0 || static_cast<int>(entries.size()) != n * n)
    throw DimensionError("symmetric matrix needs " + std::to_string(n * n) + " entries");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) entries[j * n + i] = entries[i * n + j];
  SymmetricFieldMatrix m;
  m.n_ = n;
  m.c_ = std::move(entries);
  check_uniform_dim(m.c_, n);
  return m;
}

SymmetricFieldMatrix SymmetricFieldMatrix::identity(int n) {
  std::vector<ScalarField> e;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) e.emplace_back(Expr::constant(i == j ? 1.0 : 0.0), n);
  return from_upper(n, std::move(e));
}

std::vector<double> SymmetricFieldMatrix::values(std::span<const double> p) const {
  std::vector<double> v(c_.size());
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) v[i * n_ + j] = v[j * n_ + i] = c_[i * n_ + j](p);
  return v;
}

Connection::Connection(int n, std::vector<ScalarField> coeffs) : n_(n), c_(std::move(coeffs)) {
  if (n < 2) throw DimensionError("connections need dimension n >= 2");
  if (static_cast<int>(c_.size()) != n * n * n)
    throw DimensionError("connection needs " + std::to_string(n * n * n) + " coefficients");
  check_uniform_dim(c_, n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (!agree_on_probes(c_[idx3(n, k, i, j)], c_[idx3(n, k, j, i)]))
          throw TorsionError("coefficients G^" + std::to_string(k) + "_" + std::to_string(i) +
                             std::to_string(j) + " and G^" + std::to_string(k) + "_" +
                             std::to_string(j) + std::to_string(i) + " differ");
        c_[idx3(n, k, j, i)] = c_[idx3(n, k, i, j)];
      }
    }
  }
}

Connection Connection::from_upper(int n, std::vector<ScalarField> coeffs) {
  if (n < 2) throw DimensionError("connections need dimension n >= 2");
  if (static_cast<int>(coeffs.size()) != n * n * n)
    throw DimensionError("connection needs " + std::to_string(n * n * n) + " coefficients");
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) coeffs[idx3(n, k, j, i)] = coeffs[idx3(n, k, i, j)];
  Connection c;
  c.n_ = n;
  c.c_ = std::move(coeffs);
  check_uniform_dim(c.c_, n);
  return c;
}

Connection Connection::zero(int n) {
  return from_upper(n, std::vector<ScalarField>(n * n * n, ScalarField(Expr(), n)));
}

std::vector<double> Connection::values(std::span<const double> p) const {
  std::vector<double> v(c_.size());
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j) v[idx3(n_, k, i, j)] = v[idx3(n_, k, j, i)] = c_[idx3(n_, k, i, j)](p);
  return v;
}

}  // namespace projdens
