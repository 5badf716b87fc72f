#pragma once

// Coefficient containers shared by the geometry modules.

#include <span>
#include <vector>

#include "projdens/field.hpp"

namespace projdens {

using Point = std::vector<double>;

/// Covariant components ϑ_i of a 1-form.
using OneForm = std::vector<ScalarField>;

/// General n×n array of fields, row-major.
class FieldMatrix {
 public:
  FieldMatrix() = default;
  FieldMatrix(int n, std::vector<ScalarField> entries);
  static FieldMatrix zero(int n);

  int dim() const { return n_; }
  const ScalarField& operator()(int i, int j) const { return c_[i * n_ + j]; }
  const std::vector<ScalarField>& entries() const { return c_; }
  std::vector<double> values(std::span<const double> p) const;

 private:
  int n_ = 0;
  std::vector<ScalarField> c_;
};

/// n×n array of fields with S(i,j) == S(j,i) exactly.
class SymmetricFieldMatrix {
 public:
  SymmetricFieldMatrix() = default;
  /// Row-major n×n entries. Throws DimensionError on shape problems and
  /// std::invalid_argument if (i,j) and (j,i) disagree at probe points.
  SymmetricFieldMatrix(int n, std::vector<ScalarField> entries);
  /// Builds from the upper triangle only; entries below the diagonal are ignored.
  static SymmetricFieldMatrix from_upper(int n, std::vector<ScalarField> entries);
  static SymmetricFieldMatrix identity(int n);

  int dim() const { return n_; }
  const ScalarField& operator()(int i, int j) const { return c_[i * n_ + j]; }
  std::vector<double> values(std::span<const double> p) const;

 private:
  int n_ = 0;
  std::vector<ScalarField> c_;
};

/// Covariant metric g_ij.
class Metric : public SymmetricFieldMatrix {
 public:
  using SymmetricFieldMatrix::SymmetricFieldMatrix;
  Metric(SymmetricFieldMatrix m) : SymmetricFieldMatrix(std::move(m)) {}
};

/// Symmetric contravariant tensor S^ij, possibly degenerate.
class UpperMetric : public SymmetricFieldMatrix {
 public:
  using SymmetricFieldMatrix::SymmetricFieldMatrix;
  UpperMetric(SymmetricFieldMatrix m) : SymmetricFieldMatrix(std::move(m)) {}
};

/// Torsion-free linear connection coefficients Γ^k_ij, stored [k][i][j].
class Connection {
 public:
  Connection() = default;
  /// Full n³ array of fields on an n-dimensional chart. Throws
  /// DimensionError for n < 2 or a wrong shape, and
  /// TorsionError if Γ^k_ij and Γ^k_ji disagree at probe points.
  Connection(int n, std::vector<ScalarField> coeffs);
  /// Uses only entries with i <= j and mirrors them.
  static Connection from_upper(int n, std::vector<ScalarField> coeffs);
  static Connection zero(int n);

  int dim() const { return n_; }
  const ScalarField& operator()(int k, int i, int j) const { return c_[(k * n_ + i) * n_ + j]; }
  const std::vector<ScalarField>& coeffs() const { return c_; }
  /// Values at p, flattened [k][i][j].
  std::vector<double> values(std::span<const double> p) const;

 private:
  int n_ = 0;
  std::vector<ScalarField> c_;
};

/// Throws DimensionError unless every field lives on an n-dimensional chart.
void check_uniform_dim(const std::vector<ScalarField>& fields, int n);

inline int idx3(int n, int k, int i, int j) { return (k * n + i) * n + j; }

}  // namespace projdens
