#pragma once

// Geodesics, projective parallel transport along base paths and fitting of
// fractional linear maps between fibres.

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "projdens/connections.hpp"

namespace projdens {

struct CurveState {
  double t = 0.0;
  Point x;
  Point v;
};
using CurvePath = std::vector<CurveState>;

/// Fixed-step RK4 for x'' + Γ^k_ij x'^i x'^j = 0 on [0, T]. The last step is
/// shortened to land on T. Throws IntegrationError (with the time of the
/// failed step) on domain errors or non-finite states.
CurvePath integrate_linear_geodesic(const Connection& conn, const Point& x0, const Point& v0, double T,
                                    double h);

/// Same with the cubic term: x''^k + Γ^k_ij x'^i x'^j + γ⁰_ij x'^i x'^j x'^k = 0.
CurvePath integrate_projective_geodesic(const Connection& conn, const FieldMatrix& omega0,
                                        const Point& x0, const Point& v0, double T, double h);

/// Symmetric mean distance from the vertices of each path to the other
/// polyline, over the common chord-length range. Throws std::invalid_argument
/// for paths with fewer than two points or zero length.
double unparametrized_distance(std::span<const Point> a, std::span<const Point> b);
double unparametrized_distance(const CurvePath& a, const CurvePath& b);

/// Ψ^a = dξ^a − (φ^a_i + ψ^a_bi ξ^b + η_bi ξ^a ξ^b) dx^i on a rank-m fibre
/// over an n-dimensional chart.
struct ProjectiveEhresmannData {
  int m = 0;
  int n = 0;
  std::vector<ScalarField> phi;  // [a][i]
  std::vector<ScalarField> psi;  // [a][b][i]
  std::vector<ScalarField> eta;  // [b][i]

  /// All coefficients zero.
  static ProjectiveEhresmannData zero(int m, int n);
  /// Throws DimensionError on shape problems.
  void validate() const;
};

struct FibreState {
  double t = 0.0;
  Point x;
  Point xi;
};
using FibrePath = std::vector<FibreState>;

/// A base path t -> x(t), each component a field of one variable.
using BasePath = std::vector<ScalarField>;

/// Abort threshold for |ξ| during transport.
inline constexpr double kBlowUp = 1e8;

/// RK4 for dξ^a/dt = (φ^a_i + ψ^a_bi ξ^b + η_bi ξ^a ξ^b) dx^i/dt along the
/// base path. Throws BlowUpError when |ξ| exceeds kBlowUp.
FibrePath parallel_transport(const ProjectiveEhresmannData& data, const BasePath& path, const Point& xi0,
                             double T, double h);

/// RK4 for a general fibre flow dξ/dt = f(t, ξ), with the same blow-up guard.
using FibreFlow = std::function<Point(double, const Point&)>;
std::vector<Point> integrate_fibre_flow(const FibreFlow& f, const Point& xi0, double T, double h);

/// ξ ↦ (αξ + β)/(γ·ξ + δ).
struct FractionalLinearMap {
  Eigen::MatrixXd alpha;
  Eigen::VectorXd beta;
  Eigen::RowVectorXd gamma;
  double delta = 1.0;

  int m() const { return static_cast<int>(beta.size()); }
  Point operator()(std::span<const double> xi) const;
  /// The (m+1)×(m+1) block matrix [[α, β], [γ, δ]].
  Eigen::MatrixXd block() const;
};

struct FractionalLinearFit {
  FractionalLinearMap map;
  double holdout_residual = 0.0;
};

/// Homogeneous least squares for ξ_out (γ·ξ_in + δ) = α ξ_in + β, scaled so
/// that the largest parameter has magnitude 1 and positive sign. The last
/// `holdout` pairs are left out of the fit; the residual is the largest
/// Euclidean error on them. Throws DegenerateFitError when the null space is
/// not one-dimensional, there are too few pairs, or the block matrix is
/// singular.
FractionalLinearFit fit_fractional_linear(std::span<const std::pair<Point, Point>> pairs, int m,
                                          int holdout = 1);

}  // namespace projdens
