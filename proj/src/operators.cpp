#include "projdens/operators.hpp"

#include <cmath>

#include "projdens/errors.hpp"

namespace projdens {

namespace {

// drift of the projective Laplacian in dimension n = S.dim()
VectorField op_drift(const ProjectiveClass& pi, const UpperMetric& S) {
  const int n = S.dim();
  const double a = 2.0 / (n + 3);
  const double b = static_cast<double>(n + 1) / (n + 3);
  VectorField d;
  for (int i = 0; i < n; ++i) {
    Expr div, contr;
    for (int j = 0; j < n; ++j) div = div + derive(S(i, j).expr(), j);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) contr = contr + S(j, k).expr() * pi(i, j, k).expr();
    d.emplace_back(a * div - b * contr, n);
  }
  return d;
}

// (t, x0..x{n-1}) -> (1, x0..x{n-1}) expressed on the base chart
Expr restrict_to_unit_fibre(const Expr& e, int n) {
  std::vector<Expr> vals;
  vals.push_back(Expr::constant(1.0));
  for (int i = 0; i < n; ++i) vals.push_back(Expr::variable(i));
  return substitute(e, vals);
}

}  // namespace

SecondOrderOperator projective_laplacian(const ProjectiveClass& pi, const UpperMetric& S) {
  if (S.dim() != pi.dim()) throw DimensionError("S and Π differ in dimension");
  return {S, op_drift(pi, S), ScalarField(Expr(), S.dim())};
}

double apply(const SecondOrderOperator& L, const ScalarField& f, std::span<const double> p) {
  const int n = L.dim();
  if (f.dim() != n) throw DimensionError("function and operator differ in dimension");
  const Jet2 j = f.jet(p);
  const auto S = L.principal.values(p);
  double s = L.zeroth(p) * j.value;
  for (int i = 0; i < n; ++i) {
    s += L.drift[i](p) * j.d(i);
    for (int k = 0; k < n; ++k) s += S[i * n + k] * j.dd(i, k);
  }
  return s;
}

ScalarField apply_symbolic(const SecondOrderOperator& L, const ScalarField& f) {
  const int n = L.dim();
  if (f.dim() != n) throw DimensionError("function and operator differ in dimension");
  Expr s = L.zeroth.expr() * f.expr();
  for (int i = 0; i < n; ++i) {
    const Expr di = derive(f.expr(), i);
    s = s + L.drift[i].expr() * di;
    for (int k = 0; k < n; ++k) s = s + L.principal(i, k).expr() * derive(di, k);
  }
  return {s, n};
}

HatOperator extend_to_densities(const BracketData& B, const ProjectiveClass& pi) {
  B.validate();
  const int n = B.dim();
  if (pi.dim() != n) throw DimensionError("bracket and Π differ in dimension");
  const int N = n + 1;
  const Expr t = Expr::variable(0);
  const double lam = B.weight.value();
  auto lifted = [](const ScalarField& f) { return shift_variables(f.expr(), 1); };

  std::vector<ScalarField> s(N * N, ScalarField(Expr(), N));
  s[0] = ScalarField(lifted(B.theta) * pow(t, lam + 2), N);
  for (int i = 0; i < n; ++i) {
    s[i + 1] = ScalarField(lifted(B.gamma[i]) * pow(t, lam + 1), N);
    for (int j = i; j < n; ++j) s[(i + 1) * N + j + 1] = ScalarField(lifted(B.S(i, j)) * pow(t, lam), N);
  }
  const UpperMetric S_hat(SymmetricFieldMatrix::from_upper(N, std::move(s)));
  const ProjectiveClass pi_hat = pi_symbols(hat_connection(pi).gamma);
  return {projective_laplacian(pi_hat, S_hat), B.weight};
}

DensityElement apply(const HatOperator& L, const DensityElement& a) {
  const int n = L.base_dim();
  if (a.dim() != n) throw DimensionError("density and operator differ in dimension");
  DensityElement out(n);
  for (const auto& [mu, phi] : a.terms()) {
    const Expr f = shift_variables(phi.expr(), 1) * pow(Expr::variable(0), mu.value());
    const Expr image = apply_symbolic(L.op, ScalarField(f, n + 1)).expr();
    out.add(mu + L.weight, restrict_to_unit_fibre(image, n));
  }
  return out;
}

double apply(const HatOperator& L, const DensityElement& a, std::span<const double> p_hat) {
  if (p_hat.empty() || !(p_hat[0] > 0.0)) throw FibreError("HAT points need t > 0");
  return apply(L.op, ScalarField(hat_expr(a), L.op.dim()), p_hat);
}

OperatorReport symbol_to_operator_report(const UpperMetric& S, const ProjectiveClass& pi) {
  const int n = S.dim();
  const BracketData B{Weight(0), S, upper_connection(pi, S), ScalarField(Expr(), n)};
  const HatOperator L = extend_to_densities(B, pi);
  OperatorReport r;
  for (int i = 0; i < n; ++i) {
    Expr div;
    for (int j = 0; j < n; ++j) div = div + derive(S(i, j).expr(), j);
    r.gamma.emplace_back(div - restrict_to_unit_fibre(L.op.drift[i + 1].expr(), n), n);
  }
  Expr div;
  for (int j = 0; j < n; ++j) div = div + derive(r.gamma[j].expr(), j);
  r.theta = ScalarField(div - restrict_to_unit_fibre(L.op.drift[0].expr(), n), n);
  return r;
}

}  // namespace projdens
