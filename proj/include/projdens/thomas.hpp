#pragma once

// The (n+1)-dimensional bundles over a chart: HAT, whose fibre coordinate is
// t > 0 and whose functions sum_λ φ_λ t^λ are densities, and TILDE, whose
// fibre coordinate is unbounded and which carries the Thomas connection.
// The fibre coordinate always sits in slot 0; base coordinate x^i of M is
// slot i+1.

#include <span>
#include <vector>

#include "projdens/connections.hpp"
#include "projdens/geometry.hpp"

namespace projdens {

enum class LiftFlavor { kHat, kTilde };

struct LiftedTransitions {
  TransitionMap tilde;  // x̃'0 = x̃0 + log J_f
  TransitionMap hat;    // t'  = t J_f
};

/// Lifts T to both bundles. J_f is |det ∂f/∂x|; the sign of det is read at
/// the sample points and must be the same at all of them. Throws
/// SingularJacobianError if |det| < 1e-12 at a sample point or the sign
/// changes, and std::invalid_argument if `sample_points` is empty.
LiftedTransitions lift_transition(const TransitionMap& T, std::span<const Point> sample_points);

/// The fibre map F: HAT -> TILDE, (t, x) -> (log t, x), with inverse exp.
TransitionMap fibre_map(int n);

/// F at a HAT point; throws FibreError unless t > 0.
Point F_map(std::span<const double> p_hat);
Point F_inverse(std::span<const double> p_tilde);

/// Coefficients of a linear connection on one of the lifted bundles, with
/// indices 0..n.
struct LiftedConnection {
  LiftFlavor flavor = LiftFlavor::kTilde;
  Connection gamma;

  int base_dim() const { return gamma.dim() - 1; }
  const ScalarField& operator()(int k, int i, int j) const { return gamma(k, i, j); }
};

/// Thomas' connection on TILDE: Π on base indices, −δ^K_I/(n+1) on the fibre
/// block for all I, K in 0..n, and the (n+1)/(n−1) curvature-type block.
LiftedConnection thomas_lift(const ProjectiveClass& pi);

/// F*∇̃ in HAT coordinates, by symbolic pullback along F.
LiftedConnection hat_connection(const ProjectiveClass& pi);

/// F_* v at the HAT point p̂, computed with directional jets.
Point pushforward_vector(std::span<const double> p_hat, std::span<const double> v);

/// F_*(t ∂/∂t) at p̂; equals (1, 0, ..., 0).
Point weight_vector_field_check(std::span<const double> p_hat);

}  // namespace projdens
