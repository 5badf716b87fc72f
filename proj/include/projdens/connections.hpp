#pragma once

// Linear connections, Thomas projective symbols, projective shifts,
// curvature of projective connections, Ricci tensor and Cartan normality.

#include <span>
#include <vector>

#include "projdens/tensors.hpp"

namespace projdens {

/// Trace-free symmetric symbols Π^k_ij representing a projective class.
class ProjectiveClass {
 public:
  ProjectiveClass() = default;
  /// Validates trace-freeness Π^l_lj = 0 (|.| <= 1e-10) at fixed probe points
  /// where the fields are defined; throws std::invalid_argument otherwise.
  explicit ProjectiveClass(Connection symbols);
  /// Skips validation; used where trace-freeness holds by construction.
  static ProjectiveClass trusted(Connection symbols);

  int dim() const { return symbols_.dim(); }
  const ScalarField& operator()(int k, int i, int j) const { return symbols_(k, i, j); }
  /// The class viewed as one of its representatives (Γ := Π).
  const Connection& as_connection() const { return symbols_; }
  std::vector<double> values(std::span<const double> p) const { return symbols_.values(p); }

 private:
  Connection symbols_;
};

/// Γ^k_ij = ½ g^{kl}(∂_i g_jl + ∂_j g_il − ∂_l g_ij), symbolic in g.
Connection levi_civita(const Metric& g);
/// Same, after checking that g is invertible at every check point
/// (|det g| >= 1e-12); throws SingularMetricError.
Connection levi_civita(const Metric& g, std::span<const Point> check_points);

/// Inverse metric g^{ij} as symbolic fields.
UpperMetric inverse_metric(const Metric& g);

/// Π^k_ij = Γ^k_ij − (δ^k_i Γ^l_lj + δ^k_j Γ^l_il)/(n+1).
ProjectiveClass pi_symbols(const Connection& conn);

/// Γ̄^k_ij = Γ^k_ij + δ^k_i ϑ_j + δ^k_j ϑ_i.
Connection projective_shift(const Connection& conn, const OneForm& theta);

/// Sign of the quadratic term in the curvature of ω^i_j = Γ^i_jk dx^k.
/// kDisplayed is dω − ω∧ω; kStandard is dω + ω∧ω (Riemann tensor of Γ).
enum class CurvatureSign { kDisplayed, kStandard };

/// Components of the curvature 2-forms at one point. A 2-form written
/// B_kl dx^k∧dx^l is stored as its antisymmetric part (B − Bᵀ)/2.
struct CurvatureData {
  int n = 0;
  std::vector<double> A;      // A^i_jkl of Ω^i_j, [i][j][k][l]
  std::vector<double> A0;     // A^0_ikl of Ω^0_i, [i][k][l]
  std::vector<double> trace;  // A_jk = A^i_jki, [j][k]

  double a(int i, int j, int k, int l) const { return A[((i * n + j) * n + k) * n + l]; }
  double a0(int i, int k, int l) const { return A0[(i * n + k) * n + l]; }
  double a_trace(int j, int k) const { return trace[j * n + k]; }
};

/// Curvature of the projective connection (ω^i_j, ω^0_j) with
/// ω^0_j = omega0(j,k) dx^k, evaluated at p through jets.
CurvatureData curvature(const Connection& conn, const FieldMatrix& omega0,
                        std::span<const double> p,
                        CurvatureSign sign = CurvatureSign::kDisplayed);

/// R_jk = R^i_jki at p, flattened [j][k].
std::vector<double> ricci(const Connection& conn, std::span<const double> p,
                          CurvatureSign sign = CurvatureSign::kDisplayed);

/// R_jk as symbolic fields.
FieldMatrix ricci_fields(const Connection& conn, CurvatureSign sign = CurvatureSign::kDisplayed);

/// γ⁰_jk = (2/(n−1)) R_jk. Throws AsymmetricRicciError when
/// |R_jk − R_kj| > 1e-8 at any check point.
FieldMatrix normal_omega0(const Connection& conn, std::span<const Point> check_points);

/// max |A_jk| over the points.
double normality_defect(const Connection& conn, const FieldMatrix& omega0,
                        std::span<const Point> points);

}  // namespace projdens
