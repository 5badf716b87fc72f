#pragma once

// The algebra of densities Σ φ_λ (Dx)^λ, the weight operator, brackets
// given by (S, γ, θ) and upper connections on volume forms.

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "projdens/connections.hpp"

namespace projdens {

/// Exact rational weight num/den with den > 0 and gcd(num, den) = 1.
class Weight {
 public:
  constexpr Weight() = default;
  Weight(std::int64_t num, std::int64_t den = 1);
  /// Accepts "p" or "p/q" with optional sign; throws std::invalid_argument.
  static Weight parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_zero() const { return num_ == 0; }
  std::string to_string() const;

  friend Weight operator+(Weight a, Weight b);
  friend Weight operator-(Weight a) { return {-a.num_, a.den_}; }
  friend Weight operator-(Weight a, Weight b) { return a + (-b); }
  friend Weight operator*(Weight a, Weight b);
  friend bool operator==(Weight a, Weight b) = default;
  friend std::strong_ordering operator<=>(Weight a, Weight b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Finite sum Σ φ_λ (Dx)^λ on an n-dimensional chart. Terms whose coefficient
/// is symbolically zero are dropped.
class DensityElement {
 public:
  explicit DensityElement(int dim) : dim_(dim) {}
  static DensityElement term(Weight w, ScalarField coeff);
  static DensityElement constant(int dim, double c);

  int dim() const { return dim_; }
  const std::map<Weight, ScalarField>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  /// Coefficient of weight w, or the zero field.
  ScalarField coeff(Weight w) const;
  std::vector<Weight> weights() const;

  /// Adds c·φ (Dx)^w, merging with an existing term.
  void add(Weight w, const Expr& coeff);

  friend DensityElement operator+(const DensityElement& a, const DensityElement& b);
  friend DensityElement operator-(const DensityElement& a, const DensityElement& b);
  friend DensityElement operator*(double c, const DensityElement& a);

 private:
  int dim_;
  std::map<Weight, ScalarField> terms_;
};

DensityElement density_mul(const DensityElement& a, const DensityElement& b);
DensityElement weight_op(const DensityElement& a);

/// The density as the function Σ φ_λ(x) t^λ on the HAT chart (t in slot 0).
Expr hat_expr(const DensityElement& a);
/// Value of that function at p̂ = (t, x); throws FibreError unless t > 0.
double as_hat_function(const DensityElement& a, std::span<const double> p_hat);

using VectorField = std::vector<ScalarField>;

/// Homogeneous bracket of weight λ given by {x^i,x^j} = S^ij (Dx)^λ,
/// {x^i,Dx} = γ^i (Dx)^{λ+1}, {Dx,Dx} = θ (Dx)^{λ+2}.
struct BracketData {
  Weight weight;
  UpperMetric S;
  VectorField gamma;
  ScalarField theta;

  /// Throws DimensionError on inconsistent shapes.
  void validate() const;
  int dim() const { return S.dim(); }
};

/// The symmetric biderivation defined by B, extended bilinearly.
DensityElement bracket_eval(const BracketData& B, const DensityElement& a, const DensityElement& b);

/// γ^i = ((n+1)/(n+3))(∂_j S^ij + S^jk Π^i_jk).
VectorField upper_connection(const ProjectiveClass& pi, const UpperMetric& S);

/// Upper connection on volume forms induced by the trace connection of the
/// Levi-Civita connection of g, written in the same convention as
/// upper_connection: ∇^ω σ = g^{ij} ω_j (∂_i σ − Γ^k_ki σ), so its
/// coefficients are −g^{ij} Γ^k_kj.
VectorField trace_upper_connection(const Metric& g);

/// ∇^ω σ = S^{ji} ω_j ∂_i σ + γ^i ω_i σ as a field.
ScalarField upper_covariant_derivative(const VectorField& gamma, const UpperMetric& S,
                                       const OneForm& omega, const ScalarField& sigma);

/// Largest defect of ∇^{fω}σ = f∇^ωσ and ∇^ω(fσ) = f∇^ωσ + (S^♯ω)(f)σ at the
/// points.
double upper_connection_axioms_check(const VectorField& gamma, const UpperMetric& S,
                                     const OneForm& omega, const ScalarField& sigma,
                                     const ScalarField& f, std::span<const Point> points);

}  // namespace projdens
