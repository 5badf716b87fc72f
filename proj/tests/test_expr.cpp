#include <cmath>
#include <thread>

#include <doctest.h>

#include "projdens/errors.hpp"
#include "projdens/field.hpp"
#include "support/generators.hpp"

using namespace projdens;
using projdens::testing::Gen;
using projdens::testing::rel_diff;

namespace {

// Central-difference oracle on a plain C++ lambda, independent of the tape.
template <class F>
void fd_oracle(F f, const Point& p, double h, std::vector<double>& grad, std::vector<double>& hess) {
  const int n = static_cast<int>(p.size());
  grad.assign(n, 0.0);
  hess.assign(n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    Point a = p, b = p;
    a[i] += h;
    b[i] -= h;
    grad[i] = (f(a) - f(b)) / (2 * h);
    hess[i * n + i] = (f(a) - 2 * f(p) + f(b)) / (h * h);
    for (int j = 0; j < i; ++j) {
      Point pp = p, pm = p, mp = p, mm = p;
      pp[i] += h, pp[j] += h;
      pm[i] += h, pm[j] -= h;
      mp[i] -= h, mp[j] += h;
      mm[i] -= h, mm[j] -= h;
      hess[i * n + j] = hess[j * n + i] = (f(pp) - f(pm) - f(mp) + f(mm)) / (4 * h * h);
    }
  }
}

}  // namespace

TEST_CASE("parse and evaluate") {
  const auto f = parse("x0^2 + sin(x1)", 2);
  CHECK(f(Point{1.0, 0.0}) == 1.0);
  CHECK(parse("2^3", 1)(Point{0.0}) == 8.0);
  CHECK(parse("-x0^2", 1)(Point{3.0}) == -9.0);
  CHECK(parse("x0^(1/2)", 1)(Point{4.0}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(parse("atan(x0)", 1)(Point{1.0}) == doctest::Approx(std::atan(1.0)));
  CHECK(parse("1.5e1 - 2*x1/4", 2)(Point{0.0, 2.0}) == 14.0);
}

TEST_CASE("parse errors carry positions") {
  try {
    parse("1/(x0", 2);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 6);
  }
  try {
    parse("x0 + * x1", 2);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 6);
  }
  CHECK_THROWS_AS(parse("x3", 2), DimensionError);
  CHECK_THROWS_AS(parse("tan(x0)", 2), UnknownIdentifierError);
  CHECK_THROWS_AS(parse("y", 2), UnknownIdentifierError);
  CHECK_THROWS_AS(parse("", 2), ParseError);
  CHECK_THROWS_AS(parse("2^3^2", 2), ParseError);
  CHECK_THROWS_AS(parse("x0 x1", 2), ParseError);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(parse("1/x0", 1)(Point{0.0}), DomainError);
  CHECK_THROWS_AS(parse("log(x0)", 1)(Point{0.0}), DomainError);
  CHECK_THROWS_AS(parse("log(x0)", 1)(Point{-1.0}), DomainError);
  CHECK_THROWS_AS(parse("sqrt(x0)", 1)(Point{-1.0}), DomainError);
  CHECK_THROWS_AS(parse("x0^(1/2)", 1)(Point{-1.0}), DomainError);
  CHECK_THROWS_AS(parse("x0^-1", 1)(Point{0.0}), DomainError);
  CHECK_THROWS_AS(parse("exp(x0)", 1)(Point{1000.0}), DomainError);
  CHECK_THROWS_AS(parse("sqrt(x0)", 1).jet(Point{0.0}), DomainError);
  CHECK(parse("x0^3", 1)(Point{-2.0}) == -8.0);
  CHECK_THROWS_AS(parse("x0", 2)(Point{1.0}), DimensionError);
}

TEST_CASE("jet of a product") {
  const auto j = eval_jet(parse("x0*x1", 2), Point{2.0, 3.0});
  CHECK(j.value == 6.0);
  CHECK(j.d(0) == 3.0);
  CHECK(j.d(1) == 2.0);
  CHECK(j.dd(0, 0) == 0.0);
  CHECK(j.dd(0, 1) == 1.0);
  CHECK(j.dd(1, 0) == 1.0);
  CHECK(j.dd(1, 1) == 0.0);
}

TEST_CASE("jet of exp at the origin") {
  const auto j = eval_jet(parse("exp(x0)", 1), Point{0.0});
  CHECK(j.value == 1.0);
  CHECK(j.d(0) == 1.0);
  CHECK(j.dd(0, 0) == 1.0);
}

TEST_CASE("quadratic polynomials differentiate exactly") {
  const auto f = parse("3*x0^2 + 2*x0*x1 - x1 + 4", 2);
  for (const Point& p : {Point{0.75, -1.25}, Point{0.1, 0.3}, Point{-2.7, 5.9}}) {
    const auto j = f.jet(p);
    CHECK(j.d(0) == 6 * p[0] + 2 * p[1]);
    CHECK(j.d(1) == 2 * p[0] - 1);
    CHECK(j.dd(0, 0) == 6.0);
    CHECK(j.dd(0, 1) == 2.0);
    CHECK(j.dd(1, 1) == 0.0);
  }
}

TEST_CASE("jets agree with an independent finite-difference oracle") {
  const auto f = parse("sin(x0)*x1^2 + exp(x0*x1)/(1 + x1^2) + log(x0 + 2)*sqrt(x1)", 2);
  auto plain = [](const Point& p) {
    return std::sin(p[0]) * p[1] * p[1] + std::exp(p[0] * p[1]) / (1 + p[1] * p[1]) +
           std::log(p[0] + 2) * std::sqrt(p[1]);
  };
  for (const Point& p : {Point{0.7, 1.3}, Point{-0.4, 0.6}, Point{1.1, 2.2}}) {
    std::vector<double> g, h;
    fd_oracle(plain, p, 1e-4, g, h);
    const auto j = f.jet(p);
    CHECK(j.value == doctest::Approx(plain(p)).epsilon(1e-14));
    for (int i = 0; i < 2; ++i) {
      CHECK(std::abs(j.d(i) - g[i]) < 1e-7);
      for (int k = 0; k < 2; ++k) CHECK(std::abs(j.dd(i, k) - h[i * 2 + k]) < 1e-5);
    }
  }
}

TEST_CASE("fd_crosscheck") {
  CHECK(fd_crosscheck(parse("x0^3", 1), Point{1.0}, 1e-4) < 1e-6);
  CHECK(fd_crosscheck(parse("5", 2), Point{0.3, 0.4}, 1e-3) == 0.0);
  CHECK(fd_crosscheck(parse("sin(x0)*cos(x1)", 2), Point{0.3, 0.4}, 1e-4) < 1e-6);
  CHECK_THROWS_AS(fd_crosscheck(parse("log(x0)", 1), Point{1e-9}, 1e-4), DomainError);
}

TEST_CASE("hessians are symmetric and products follow the product rule") {
  Gen g(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = g.integer(2, 4);
    const Expr a = g.smooth(n), b = g.smooth(n);
    const Point p = g.point(n);
    const ScalarField fa(a, n), fb(b, n), fab(a * b, n);
    const Jet2 ja = fa.jet(p), jb = fb.jet(p), jab = fab.jet(p);
    const Jet2 prod = ja * jb;
    CHECK(jab.value == prod.value);
    for (int i = 0; i < n; ++i) {
      CHECK(jab.d(i) == prod.d(i));
      for (int k = 0; k < n; ++k) {
        CHECK(jab.dd(i, k) == jab.dd(k, i));
        CHECK(jab.dd(i, k) == prod.dd(i, k));
      }
    }
  }
}

TEST_CASE("symbolic derivatives match jets") {
  Gen g(12);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = g.integer(2, 4);
    const ScalarField f = g.smooth_field(n, 3);
    const Point p = g.point(n);
    const Jet2 j = f.jet(p);
    for (int i = 0; i < n; ++i) {
      const ScalarField di = f.derivative(i);
      CHECK(rel_diff(di(p), j.d(i)) < 1e-12);
      const Jet2 dj = di.jet(p);
      for (int k = 0; k < n; ++k) CHECK(rel_diff(dj.d(k), j.dd(i, k)) < 1e-11);
    }
    CHECK(fd_crosscheck(f, p, 1e-4) < 1e-5);
  }
}

TEST_CASE("printing round-trips through the parser") {
  Gen g(13);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = g.integer(2, 4);
    const ScalarField f = g.smooth_field(n, 3);
    const ScalarField back = parse(f.to_string(), n);
    for (int k = 0; k < 3; ++k) {
      const Point p = g.point(n);
      CHECK(rel_diff(f(p), back(p)) < 1e-14);
    }
  }
  CHECK(parse(to_string(parse_expr("-(x0 - x1)", 2)), 2)(Point{1.0, 5.0}) == 4.0);
  CHECK(parse("x0 - (x1 - x0)", 2)(Point{1.0, 5.0}) == -3.0);
  CHECK(parse(to_string(parse_expr("x0 - (x1 - x0)", 2)), 2)(Point{1.0, 5.0}) == -3.0);
  CHECK(parse(to_string(parse_expr("x0 / (x1 * x0)", 2)), 2)(Point{2.0, 4.0}) == 0.25);
  CHECK(parse(to_string(parse_expr("(x0^2)^(1/2)", 2)), 2)(Point{-3.0, 0.0}) == doctest::Approx(3.0));
}

TEST_CASE("simplification keeps identities") {
  const Expr x = Expr::variable(0);
  CHECK((x * 0.0).is_constant(0.0));
  CHECK((x + 0.0).same_node(x));
  CHECK((1.0 * x).same_node(x));
  CHECK((-(-x)).same_node(x));
  CHECK(derive(Expr::constant(3.0), 0).is_constant(0.0));
  CHECK(derive(x, 1).is_constant(0.0));
  CHECK((Expr::constant(2.0) * Expr::constant(3.5)).is_constant(7.0));
}

TEST_CASE("substitution and variable shifts") {
  const Expr f = parse_expr("x0*x1 + sin(x0)", 2);
  const std::vector<Expr> vals = {parse_expr("x1 + 1", 2), parse_expr("2*x0", 2)};
  const ScalarField s(substitute(f, vals), 2);
  const Point p{0.3, 0.8};
  CHECK(s(p) == doctest::Approx((0.8 + 1) * 0.6 + std::sin(1.8)).epsilon(1e-15));
  const ScalarField sh(shift_variables(f, 1), 3);
  CHECK(sh(Point{99.0, 0.3, 0.8}) == doctest::Approx(0.3 * 0.8 + std::sin(0.3)).epsilon(1e-15));
}

TEST_CASE("shared subexpressions stay shared") {
  Expr e = Expr::variable(0);
  for (int i = 0; i < 40; ++i) e = e * e + 1.0;
  CHECK(node_count(e) < 200);
  const Expr d = derive(e, 0);
  CHECK(node_count(d) < 1000);
}

TEST_CASE("concurrent evaluation is consistent") {
  const auto f = parse("sin(x0)*exp(x1) + x0^3/(1 + x1^2)", 2);
  const Point p{0.4, 0.9};
  const double ref = f(p);
  const Jet2 jref = f.jet(p);
  std::vector<int> ok(4, 0);
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t) {
    pool.emplace_back([&, t] {
      int good = 1;
      for (int k = 0; k < 2000; ++k) {
        if (f(p) != ref) good = 0;
        if (f.jet(p).d(1) != jref.d(1)) good = 0;
      }
      ok[t] = good;
    });
  }
  for (auto& th : pool) th.join();
  for (int v : ok) CHECK(v == 1);
}

TEST_CASE("directional jets follow the chain rule") {
  const auto f = parse("x0^2*x1 + cos(x1)", 2);
  const Point p{0.7, 0.2};
  // seed along v = (1, 2): the 1-d jet value/derivatives are d/ds f(p + s v)
  const std::vector<double> seeds = {1.0, 2.0};
  const Jet2 j = f.tape().evaluate_jet(p, seeds, 1);
  const Jet2 full = f.jet(p);
  CHECK(j.dim == 1);
  CHECK(j.d(0) == doctest::Approx(full.d(0) + 2 * full.d(1)).epsilon(1e-15));
  CHECK(j.dd(0, 0) ==
        doctest::Approx(full.dd(0, 0) + 4 * full.dd(0, 1) + 4 * full.dd(1, 1)).epsilon(1e-14));
}
