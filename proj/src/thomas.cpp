#include "projdens/thomas.hpp"

#include <cmath>
#include <stdexcept>

#include "projdens/errors.hpp"

namespace projdens {

namespace {

std::vector<ScalarField> lifted_components(const Expr& fibre, const std::vector<ScalarField>& base) {
  const int n = static_cast<int>(base.size());
  std::vector<ScalarField> out;
  out.emplace_back(fibre, n + 1);
  for (const auto& f : base) out.emplace_back(shift_variables(f.expr(), 1), n + 1);
  return out;
}

double det_sign(const TransitionMap& T, std::span<const Point> pts) {
  if (pts.empty()) throw std::invalid_argument("lift_transition needs sample points");
  double sign = 0.0;
  for (const auto& p : pts) {
    const double d = jacobian(T, p).det;
    const double s = d > 0 ? 1.0 : -1.0;
    if (sign != 0.0 && s != sign) throw SingularJacobianError("Jacobian determinant changes sign");
    sign = s;
  }
  return sign;
}

}  // namespace

LiftedTransitions lift_transition(const TransitionMap& T, std::span<const Point> sample_points) {
  const double s = det_sign(T, sample_points);
  const Expr det = s * shift_variables(T.jacobian_det_expr(), 1);
  const Expr det_inv = s * shift_variables(symbolic_det(T.inverse_jacobian_exprs()), 1);
  const Expr fibre = Expr::variable(0);
  return {
      TransitionMap(lifted_components(fibre + log(det), T.forward()),
                    lifted_components(fibre + log(det_inv), T.inverse())),
      TransitionMap(lifted_components(fibre * det, T.forward()),
                    lifted_components(fibre * det_inv, T.inverse())),
  };
}

TransitionMap fibre_map(int n) {
  std::vector<ScalarField> fwd, inv;
  fwd.emplace_back(log(Expr::variable(0)), n + 1);
  inv.emplace_back(exp(Expr::variable(0)), n + 1);
  for (int i = 1; i <= n; ++i) {
    fwd.emplace_back(Expr::variable(i), n + 1);
    inv.emplace_back(Expr::variable(i), n + 1);
  }
  return {std::move(fwd), std::move(inv)};
}

Point F_map(std::span<const double> p_hat) {
  if (p_hat.empty() || !(p_hat[0] > 0.0)) throw FibreError("HAT points need t > 0");
  Point out(p_hat.begin(), p_hat.end());
  out[0] = std::log(p_hat[0]);
  return out;
}

Point F_inverse(std::span<const double> p_tilde) {
  if (p_tilde.empty()) throw DimensionError("empty point");
  Point out(p_tilde.begin(), p_tilde.end());
  out[0] = std::exp(p_tilde[0]);
  return out;
}

LiftedConnection thomas_lift(const ProjectiveClass& pi) {
  const int n = pi.dim();
  if (n < 2) throw DimensionError("the Thomas lift needs n >= 2");
  const int N = n + 1;
  // base symbols in lifted variables
  std::vector<Expr> P(n * n * n);
  for (int r = 0; r < n * n * n; ++r) P[r] = shift_variables(pi.as_connection().coeffs()[r].expr(), 1);
  auto p = [&](int k, int i, int j) -> const Expr& { return P[idx3(n, k, i, j)]; };

  std::vector<ScalarField> c(N * N * N, ScalarField(Expr(), N));
  const double w = -1.0 / (n + 1);
  for (int K = 0; K < N; ++K) c[idx3(N, K, K, 0)] = ScalarField(Expr::constant(w), N);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) c[idx3(N, k + 1, i + 1, j + 1)] = ScalarField(p(k, i, j), N);

  const double q = static_cast<double>(n + 1) / (n - 1);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Expr s;
      for (int r = 0; r < n; ++r) {
        s = s + derive(p(r, i, j), r + 1);
        for (int t = 0; t < n; ++t) s = s - p(r, t, i) * p(t, r, j);
      }
      c[idx3(N, 0, i + 1, j + 1)] = ScalarField(q * s, N);
    }
  }
  // mirror the fibre block into i <= j storage
  for (int K = 0; K < N; ++K) c[idx3(N, K, 0, K)] = c[idx3(N, K, K, 0)];
  return {LiftFlavor::kTilde, Connection::from_upper(N, std::move(c))};
}

LiftedConnection hat_connection(const ProjectiveClass& pi) {
  const LiftedConnection tilde = thomas_lift(pi);
  // TILDE -> HAT is F⁻¹
  return {LiftFlavor::kHat, pushforward(tilde.gamma, fibre_map(pi.dim()).inverted())};
}

Point pushforward_vector(std::span<const double> p_hat, std::span<const double> v) {
  if (p_hat.empty() || !(p_hat[0] > 0.0)) throw FibreError("HAT points need t > 0");
  if (v.size() != p_hat.size()) throw DimensionError("vector and point differ in dimension");
  const int N = static_cast<int>(p_hat.size());
  const TransitionMap F = fibre_map(N - 1);
  Point out(N);
  for (int i = 0; i < N; ++i) out[i] = F.forward()[i].tape().evaluate_jet(p_hat, v, 1).d(0);
  return out;
}

Point weight_vector_field_check(std::span<const double> p_hat) {
  if (p_hat.empty() || !(p_hat[0] > 0.0)) throw FibreError("HAT points need t > 0");
  Point w(p_hat.size(), 0.0);
  w[0] = p_hat[0];
  return pushforward_vector(p_hat, w);
}

}  // namespace projdens
