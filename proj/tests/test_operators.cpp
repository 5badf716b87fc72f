#include <cmath>

#include <doctest.h>

#include "projdens/errors.hpp"
#include "projdens/operators.hpp"
#include "support/density_helpers.hpp"

using namespace projdens;
using projdens::testing::density_gap;
using projdens::testing::Gen;
using projdens::testing::rel_diff;

namespace {

std::vector<ScalarField> fields(std::initializer_list<const char*> texts, int n) {
  std::vector<ScalarField> out;
  for (const char* t : texts) out.push_back(parse(t, n));
  return out;
}

TransitionMap polar_to_cartesian() {
  return {fields({"x0*cos(x1)", "x0*sin(x1)"}, 2), fields({"sqrt(x0^2 + x1^2)", "atan(x1/x0)"}, 2)};
}

UpperMetric identity2() { return UpperMetric(SymmetricFieldMatrix::identity(2)); }

BracketData random_bracket(Gen& g, int n, Weight w) {
  VectorField gamma;
  for (int i = 0; i < n; ++i) gamma.emplace_back(g.polynomial(n, 2), n);
  return {w, g.polynomial_upper_metric(n), gamma, ScalarField(g.polynomial(n, 2), n)};
}

DensityElement monomial(int n, int var, Weight w) {
  return DensityElement::term(w, ScalarField(var < 0 ? Expr::constant(1.0) : Expr::variable(var), n));
}

// The projective Laplacian on the HAT chart coded numerically: Ŝ from the bracket by plain
// evaluation, ∂Ŝ and the derivatives of the HAT function by central
// differences, and the symbols Π̂ from the HAT connection values.
double extension_oracle(const BracketData& B, const ProjectiveClass& pi, const DensityElement& a,
                        const Point& ph) {
  const int n = B.dim(), N = n + 1;
  const double lam = B.weight.value();
  auto S_hat = [&](const Point& q) {
    const double t = q[0];
    const Point x(q.begin() + 1, q.end());
    std::vector<double> s(N * N);
    s[0] = B.theta(x) * std::pow(t, lam + 2);
    for (int i = 0; i < n; ++i) {
      s[i + 1] = s[(i + 1) * N] = B.gamma[i](x) * std::pow(t, lam + 1);
      for (int j = 0; j < n; ++j) s[(i + 1) * N + j + 1] = B.S(i, j)(x) * std::pow(t, lam);
    }
    return s;
  };
  const double h = 1e-4;
  auto shifted = [&](int i, double d) {
    Point q = ph;
    q[i] += d;
    return q;
  };
  // divergence ∂_J Ŝ^{IJ}
  std::vector<double> div(N, 0.0);
  for (int J = 0; J < N; ++J) {
    const auto sp = S_hat(shifted(J, h)), sm = S_hat(shifted(J, -h));
    for (int I = 0; I < N; ++I) div[I] += (sp[I * N + J] - sm[I * N + J]) / (2 * h);
  }
  const auto G = hat_connection(pi).gamma.values(ph);
  std::vector<double> tau(N, 0.0);
  for (int J = 0; J < N; ++J)
    for (int L = 0; L < N; ++L) tau[J] += G[idx3(N, L, L, J)];
  auto P = [&](int I, int J, int K) {
    return G[idx3(N, I, J, K)] - ((I == J ? tau[K] : 0.0) + (I == K ? tau[J] : 0.0)) / (N + 1);
  };
  const auto S = S_hat(ph);
  auto f = [&](const Point& q) { return as_hat_function(a, q); };
  double out = 0.0;
  for (int I = 0; I < N; ++I) {
    double contr = 0.0;
    for (int J = 0; J < N; ++J)
      for (int K = 0; K < N; ++K) contr += S[J * N + K] * P(I, J, K);
    const double drift = 2.0 / (N + 3) * div[I] - static_cast<double>(N + 1) / (N + 3) * contr;
    out += drift * (f(shifted(I, h)) - f(shifted(I, -h))) / (2 * h);
    for (int K = 0; K < N; ++K) {
      Point pp = ph, pm = ph, mp = ph, mm = ph;
      pp[I] += h, pp[K] += h;
      pm[I] += h, pm[K] -= h;
      mp[I] -= h, mp[K] += h;
      mm[I] -= h, mm[K] -= h;
      out += S[I * N + K] * (f(pp) - f(pm) - f(mp) + f(mm)) / (4 * h * h);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("flat laplacian") {
  const auto L = projective_laplacian(pi_symbols(Connection::zero(2)), identity2());
  for (const auto& d : L.drift) CHECK(d.is_zero());
  CHECK(apply(L, parse("x0^2", 2), Point{0.3, 0.9}) == 2.0);
  CHECK(apply(L, parse("x0^2 - x1^2", 2), Point{0.3, 0.9}) == 0.0);
  CHECK(apply(L, parse("1", 2), Point{0.3, 0.9}) == 0.0);
  CHECK_THROWS_AS(apply(L, parse("x0", 3), Point{0.3, 0.9, 1.0}), DimensionError);
}

TEST_CASE("drift coefficients") {
  Gen g(61);
  for (int k = 0; k < 5; ++k) {
    const UpperMetric S = g.polynomial_upper_metric(2);
    const auto L = projective_laplacian(pi_symbols(Connection::zero(2)), S);
    const Point p = g.point(2);
    for (int i = 0; i < 2; ++i) {
      double div = 0.0;
      for (int j = 0; j < 2; ++j) div += S(i, j).jet(p).d(j);
      CHECK(L.drift[i](p) == doctest::Approx(0.4 * div).epsilon(1e-13));
    }
    const auto L2 = projective_laplacian(pi_symbols(g.polynomial_connection(2)), S);
    CHECK(apply(L2, ScalarField(Expr::constant(1.0), 2), p) == 0.0);
  }
}

TEST_CASE("application agrees with finite differences") {
  Gen g(62);
  for (int k = 0; k < 10; ++k) {
    const int n = g.integer(2, 3);
    const auto L = projective_laplacian(pi_symbols(g.polynomial_connection(n)), g.polynomial_upper_metric(n));
    const ScalarField f = g.smooth_field(n);
    const Point p = g.point(n);
    const double h = 1e-3;
    auto at = [&](const Point& q) { return f(q); };
    double fd = 0.0;
    const auto S = L.principal.values(p);
    for (int i = 0; i < n; ++i) {
      Point a = p, b = p;
      a[i] += h, b[i] -= h;
      fd += L.drift[i](p) * (at(a) - at(b)) / (2 * h);
      for (int j = 0; j < n; ++j) {
        Point pp = p, pm = p, mp = p, mm = p;
        pp[i] += h, pp[j] += h;
        pm[i] += h, pm[j] -= h;
        mp[i] -= h, mp[j] += h;
        mm[i] -= h, mm[j] -= h;
        fd += S[i * n + j] * (at(pp) - at(pm) - at(mp) + at(mm)) / (4 * h * h);
      }
    }
    const double v = apply(L, f, p);
    CHECK(std::abs(v - fd) <= 1e-4 * (1 + std::abs(v)));
    CHECK(rel_diff(apply_symbolic(L, f)(p), v) < 1e-12);
  }
}

TEST_CASE("laplacian depends only on the projective class") {
  Gen g(63);
  for (int k = 0; k < 10; ++k) {
    const int n = g.integer(2, 3);
    const Connection conn = g.polynomial_connection(n);
    const UpperMetric S = g.polynomial_upper_metric(n);
    const auto a = projective_laplacian(pi_symbols(conn), S);
    const auto b = projective_laplacian(pi_symbols(projective_shift(conn, g.polynomial_oneform(n))), S);
    for (int r = 0; r < 3; ++r) {
      const Point p = g.point(n);
      for (int i = 0; i < n; ++i) CHECK(std::abs(a.drift[i](p) - b.drift[i](p)) <= 1e-12 * (1 + std::abs(a.drift[i](p))));
    }
  }
}

TEST_CASE("laplacian is coordinate invariant") {
  Gen g(64);
  const auto T = polar_to_cartesian();
  for (int k = 0; k < 4; ++k) {
    const auto pa = pi_symbols(g.polynomial_connection(2));
    const UpperMetric Sa = g.polynomial_upper_metric(2);
    const auto pb = pi_symbols(pushforward(pa.as_connection(), T));
    const UpperMetric Sb = pushforward(Sa, T);
    const ScalarField f = g.smooth_field(2);
    const ScalarField fb = pushforward(f, T);
    const auto La = projective_laplacian(pa, Sa), Lb = projective_laplacian(pb, Sb);
    for (int r = 0; r < 5; ++r) {
      const Point p{g.uniform(0.6, 1.8), g.uniform(-0.9, 0.9)};
      const double va = apply(La, f, p), vb = apply(Lb, fb, T.apply(p));
      CHECK(std::abs(va - vb) <= 1e-7 * (1 + std::abs(va)));
    }
  }
}

TEST_CASE("extension to densities matches a direct oracle") {
  Gen g(65);
  for (Weight lam : {Weight(0), Weight(1), Weight(-1, 2)}) {
    const BracketData B = random_bracket(g, 2, lam);
    const auto pi = pi_symbols(g.polynomial_connection(2));
    const HatOperator L = extend_to_densities(B, pi);
    for (int k = 0; k < 3; ++k) {
      const auto a = projdens::testing::random_density(g, 2, 2);
      const Point ph{g.uniform(0.5, 2.0), g.uniform(0.6, 1.4), g.uniform(0.6, 1.4)};
      const double v = apply(L, a, ph);
      const double ref = extension_oracle(B, pi, a, ph);
      CHECK(std::abs(v - ref) <= 1e-5 * (1 + std::abs(v)));
      // the density image realizes the same function
      const DensityElement img = apply(L, a);
      CHECK(std::abs(as_hat_function(img, ph) - v) <= 1e-10 * (1 + std::abs(v)));
      for (const Weight& w : img.weights()) {
        bool found = false;
        for (const Weight& wa : a.weights()) found = found || (w == wa + lam);
        CHECK(found);
      }
    }
  }
}

TEST_CASE("flat extension on functions is the flat laplacian") {
  const BracketData B{Weight(0), identity2(), {parse("0", 2), parse("0", 2)}, parse("0", 2)};
  const HatOperator L = extend_to_densities(B, pi_symbols(Connection::zero(2)));
  const auto a = DensityElement::term(Weight(0), parse("sin(x0)*exp(x1)", 2));
  const Point ph{1.7, 0.4, 0.3};
  CHECK(std::abs(apply(L, a, ph)) < 1e-14);
  const auto b = DensityElement::term(Weight(0), parse("x0^2 + 3*x1^2", 2));
  CHECK(apply(L, b, ph) == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(apply(L, b, ph) == doctest::Approx(extension_oracle(B, pi_symbols(Connection::zero(2)), b, ph)).epsilon(1e-6));
}

TEST_CASE("restriction of the weight-0 extension to functions") {
  Gen g(66);
  const int n = 2;
  for (int k = 0; k < 5; ++k) {
    const auto pi = pi_symbols(g.polynomial_connection(n));
    const UpperMetric S = g.polynomial_upper_metric(n);
    const BracketData B{Weight(0), S, {parse("0", n), parse("0", n)}, parse("0", n)};
    const HatOperator L = extend_to_densities(B, pi);
    const auto Delta = projective_laplacian(pi, S);
    const ScalarField f = g.smooth_field(n);
    const Point p = g.point(n);
    const Jet2 j = f.jet(p);
    // drift differs by (2/(n+4) − 2/(n+3))∂_jS^ij − ((n+2)/(n+4) − (n+1)/(n+3))S^jkΠ^i_jk
    double corr = 0.0;
    const auto Sv = S.values(p);
    const auto Pv = pi.values(p);
    for (int i = 0; i < n; ++i) {
      double div = 0.0, contr = 0.0;
      for (int jj = 0; jj < n; ++jj) div += S(i, jj).jet(p).d(jj);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) contr += Sv[a * n + b] * Pv[idx3(n, i, a, b)];
      corr += ((2.0 / (n + 4) - 2.0 / (n + 3)) * div - ((n + 2.0) / (n + 4) - (n + 1.0) / (n + 3)) * contr) * j.d(i);
    }
    const auto img = apply(L, DensityElement::term(Weight(0), f));
    const double lhs = img.coeff(Weight(0))(p);
    CHECK(std::abs(lhs - (apply(Delta, f, p) + corr)) <= 1e-11 * (1 + std::abs(lhs)));
  }
}

TEST_CASE("extension generates the bracket") {
  Gen g(67);
  for (int trial = 0; trial < 4; ++trial) {
    const Weight lam = trial % 2 == 0 ? Weight(0) : Weight(1, 2);
    const BracketData B = random_bracket(g, 2, lam);
    const HatOperator L = extend_to_densities(B, pi_symbols(g.polynomial_connection(2)));
    const auto pts = projdens::testing::box_points(2, 70 + trial, 5);
    const DensityElement one = DensityElement::constant(2, 1.0);
    const DensityElement L1 = apply(L, one);
    for (int va = -1; va < 2; ++va) {
      for (int vb = -1; vb < 2; ++vb) {
        for (Weight mu : {Weight(0), Weight(1), Weight(-1, 3)}) {
          const auto a = monomial(2, va, mu);
          const auto b = monomial(2, vb, Weight(1) - mu);
          const auto lhs = apply(L, density_mul(a, b)) - density_mul(apply(L, a), b) -
                           density_mul(a, apply(L, b)) + density_mul(L1, density_mul(a, b));
          CHECK(density_gap(lhs, 2.0 * bracket_eval(B, a, b), pts) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("operator report") {
  // flat class, constant S
  const UpperMetric S0(2, {parse("2", 2), parse("0.5", 2), parse("0.5", 2), parse("1", 2)});
  const auto r0 = symbol_to_operator_report(S0, pi_symbols(Connection::zero(2)));
  const Point p{0.8, 1.1};
  for (const auto& c : r0.gamma) CHECK(std::abs(c(p)) < 1e-14);
  CHECK(std::abs(r0.theta(p)) < 1e-14);

  // sphere: γ comes back as the upper connection
  const Metric g(2, fields({"1", "0", "0", "sin(x0)^2"}, 2));
  const auto pi = pi_symbols(levi_civita(g));
  const auto r = symbol_to_operator_report(inverse_metric(g), pi);
  const auto gam = upper_connection(pi, inverse_metric(g));
  Gen gen(68);
  for (int k = 0; k < 10; ++k) {
    const Point q{gen.uniform(0.5, 1.5), gen.uniform(-1, 1)};
    for (int i = 0; i < 2; ++i) CHECK(std::abs(r.gamma[i](q) - gam[i](q)) < 1e-8);
    CHECK(std::isfinite(r.theta(q)));
  }

  // relabelling the coordinates relabels γ and leaves θ alone
  const TransitionMap swap(fields({"x1", "x0"}, 2), fields({"x1", "x0"}, 2));
  for (int trial = 0; trial < 3; ++trial) {
    const Connection conn = gen.polynomial_connection(2);
    const UpperMetric S = gen.polynomial_upper_metric(2);
    const auto ra = symbol_to_operator_report(S, pi_symbols(conn));
    const auto rb = symbol_to_operator_report(pushforward(S, swap), pi_symbols(pushforward(conn, swap)));
    const Point q = gen.point(2);
    const Point qs{q[1], q[0]};
    CHECK(rel_diff(ra.theta(q), rb.theta(qs)) < 1e-11);
    CHECK(rel_diff(ra.gamma[0](q), rb.gamma[1](qs)) < 1e-11);
    CHECK(rel_diff(ra.gamma[1](q), rb.gamma[0](qs)) < 1e-11);
  }
}
