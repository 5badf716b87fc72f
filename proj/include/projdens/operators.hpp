#pragma once

// Second-order operators S^ij ∂_i∂_j + d^i ∂_i + c: the projective Laplacian
// on functions and its extension to the algebra of densities through the
// connection on the HAT bundle.

#include <span>

#include "projdens/densities.hpp"
#include "projdens/thomas.hpp"

namespace projdens {

struct SecondOrderOperator {
  UpperMetric principal;
  VectorField drift;
  ScalarField zeroth;

  int dim() const { return principal.dim(); }
};

/// Δ = S^ij ∂_i∂_j + ((2/(n+3)) ∂_j S^ij − ((n+1)/(n+3)) S^jk Π^i_jk) ∂_i.
SecondOrderOperator projective_laplacian(const ProjectiveClass& pi, const UpperMetric& S);

/// (Lf)(p) through jets of f.
double apply(const SecondOrderOperator& L, const ScalarField& f, std::span<const double> p);
/// Lf as a field.
ScalarField apply_symbolic(const SecondOrderOperator& L, const ScalarField& f);

/// An operator on the HAT chart that shifts density weights by `weight`.
struct HatOperator {
  SecondOrderOperator op;  // on n+1 variables, fibre t in slot 0
  Weight weight;

  int base_dim() const { return op.dim() - 1; }
};

/// Ŝ^{ij} = S^ij t^λ, Ŝ^{i0} = γ^i t^{λ+1}, Ŝ^{00} = θ t^{λ+2}, combined with
/// the projective symbols of the HAT connection of Π in the projective Laplacian with n+1
/// variables.
HatOperator extend_to_densities(const BracketData& B, const ProjectiveClass& pi);

/// The operator applied to a density, term by term: the result of φ t^μ is
/// homogeneous of degree μ+λ in t, and its coefficient is read at t = 1.
DensityElement apply(const HatOperator& L, const DensityElement& a);
/// The operator applied to the HAT function of a at p̂.
double apply(const HatOperator& L, const DensityElement& a, std::span<const double> p_hat);

struct OperatorReport {
  VectorField gamma;
  ScalarField theta;
};

/// Runs the extension on the weight-0 bracket (S, γ of upper_connection, 0)
/// and reads back γ^i = ∂_j S^ij − d̂^i and θ = ∂_j γ^j − d̂^0 from the
/// drift d̂ of the extended operator at t = 1.
OperatorReport symbol_to_operator_report(const UpperMetric& S, const ProjectiveClass& pi);

}  // namespace projdens
