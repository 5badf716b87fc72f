#include <cmath>

#include <doctest.h>

#include "projdens/errors.hpp"
#include "projdens/thomas.hpp"
#include "support/generators.hpp"

using namespace projdens;
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

TransitionMap linear_det2() { return {fields({"2*x0 + x1", "x1"}, 2), fields({"(x0 - x1)/2", "x1"}, 2)}; }

Point lifted(double fibre, const Point& x) {
  Point p{fibre};
  p.insert(p.end(), x.begin(), x.end());
  return p;
}

const std::vector<Point> kPolarPts = {{1.0, 0.3}, {1.5, -0.6}, {0.7, 0.9}};

}  // namespace

TEST_CASE("lifted transitions") {
  const auto id = lift_transition(identity_map(2), kPolarPts);
  const Point p{0.4, 1.1, 0.2};
  CHECK(id.tilde.apply(p) == p);
  CHECK(id.hat.apply(Point{2.5, 1.1, 0.2}) == Point{2.5, 1.1, 0.2});

  const auto lin = lift_transition(linear_det2(), kPolarPts);
  const auto q = lin.tilde.apply(p);
  CHECK(q[0] == doctest::Approx(0.4 + std::log(2.0)).epsilon(1e-15));
  CHECK(q[1] == doctest::Approx(2 * 1.1 + 0.2));
  CHECK(lin.hat.apply(Point{1.5, 1.1, 0.2})[0] == 3.0);
  CHECK(lin.tilde.roundtrip_defect(std::vector<Point>{p}) < 1e-15);

  const auto pol = lift_transition(polar_to_cartesian(), kPolarPts);
  CHECK(pol.hat.apply(Point{1.0, 2.0, 0.3})[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(pol.hat.roundtrip_defect(std::vector<Point>{{1.3, 1.2, 0.4}}) < 1e-14);

  // orientation-reversing maps use |det|
  const TransitionMap flip(fields({"x1", "x0"}, 2), fields({"x1", "x0"}, 2));
  CHECK(lift_transition(flip, kPolarPts).hat.apply(Point{1.5, 0.3, 0.4})[0] == 1.5);

  const TransitionMap collapse(fields({"x0", "x0"}, 2), fields({"x0", "x1"}, 2));
  CHECK_THROWS_AS(lift_transition(collapse, kPolarPts), SingularJacobianError);
}

TEST_CASE("fibre map") {
  CHECK(F_map(Point{1.0, 0.3, 0.4}) == Point{0.0, 0.3, 0.4});
  CHECK(F_map(Point{std::exp(1.0), 0.3, 0.4})[0] == 1.0);
  CHECK_THROWS_AS(F_map(Point{0.0, 0.3, 0.4}), FibreError);
  CHECK_THROWS_AS(F_map(Point{-1.0, 0.3, 0.4}), FibreError);
  const Point p{0.37, -1.0, 2.0};
  CHECK(F_map(F_inverse(p))[0] == doctest::Approx(0.37).epsilon(1e-15));

  // F ∘ T̂ = T̃ ∘ F
  const auto lin = lift_transition(linear_det2(), kPolarPts);
  const auto pol = lift_transition(polar_to_cartesian(), kPolarPts);
  Gen g(41);
  for (int k = 0; k < 20; ++k) {
    const Point ph{g.uniform(0.1, 5.0), g.uniform(0.5, 2.0), g.uniform(-1.0, 1.0)};
    for (const auto* L : {&lin, &pol}) {
      const auto a = F_map(L->hat.apply(ph));
      const auto b = L->tilde.apply(F_map(ph));
      for (int i = 0; i < 3; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-13);
    }
  }
}

TEST_CASE("weight vector field") {
  for (double t : {1.0, 7.3, 0.01, 123.0}) {
    const auto w = weight_vector_field_check(Point{t, 0.5, 0.6});
    CHECK(w[0] == 1.0);
    CHECK(w[1] == 0.0);
    CHECK(w[2] == 0.0);
  }
  const auto d = pushforward_vector(Point{2.0, 0.5, 0.6}, Point{1.0, 0.0, 0.0});
  CHECK(d[0] == 0.5);
  CHECK(d[1] == 0.0);
}

TEST_CASE("thomas lift of the flat class") {
  const auto L = thomas_lift(pi_symbols(Connection::zero(2)));
  const Point p{0.3, 1.0, 1.0};
  const auto v = L.gamma.values(p);
  for (int K = 0; K < 3; ++K)
    for (int I = 0; I < 3; ++I)
      for (int J = 0; J < 3; ++J) {
        double expect = 0.0;
        if (J == 0 && I == K) expect = -1.0 / 3.0;
        if (I == 0 && J == K) expect = -1.0 / 3.0;
        CHECK(v[idx3(3, K, I, J)] == expect);
      }
  CHECK_THROWS_AS(thomas_lift(pi_symbols(Connection::zero(1))), DimensionError);
}

TEST_CASE("thomas lift of the sphere") {
  const Metric g(2, fields({"1", "0", "0", "sin(x0)^2"}, 2));
  const auto L = thomas_lift(pi_symbols(levi_civita(g)));
  // closed-form trace-free symbols of the round sphere in (θ, φ)
  auto pi = [](double th) {
    const double s = std::sin(th), c = std::cos(th);
    std::vector<double> v(8, 0.0);
    v[idx3(2, 0, 0, 0)] = -2 * c / (3 * s);
    v[idx3(2, 0, 1, 1)] = -s * c;
    v[idx3(2, 1, 0, 1)] = v[idx3(2, 1, 1, 0)] = 2 * c / (3 * s);
    return v;
  };
  Gen gen(42);
  for (int k = 0; k < 10; ++k) {
    const Point x{gen.uniform(0.5, 1.5), gen.uniform(-1, 1)};
    const double h = 1e-5;
    const auto P = pi(x[0]), Pp = pi(x[0] + h), Pm = pi(x[0] - h);
    const auto v = L.gamma.values(lifted(gen.uniform(-1, 1), x));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double s = (Pp[idx3(2, 0, i, j)] - Pm[idx3(2, 0, i, j)]) / (2 * h);
        for (int r = 0; r < 2; ++r)
          for (int t = 0; t < 2; ++t) s -= P[idx3(2, r, t, i)] * P[idx3(2, t, r, j)];
        CHECK(std::abs(v[idx3(3, 0, i + 1, j + 1)] - 3 * s) < 1e-8);
        for (int kk = 0; kk < 2; ++kk)
          CHECK(std::abs(v[idx3(3, kk + 1, i + 1, j + 1)] - P[idx3(2, kk, i, j)]) < 1e-13);
      }
  }
}

TEST_CASE("hat connection of the flat class") {
  const auto H = hat_connection(pi_symbols(Connection::zero(2)));
  for (double t : {1.0, 2.5}) {
    const auto v = H.gamma.values(Point{t, 0.8, 0.2});
    CHECK(v[idx3(3, 0, 0, 0)] == doctest::Approx(-4.0 / (3.0 * t)).epsilon(1e-14));
    CHECK(v[idx3(3, 1, 1, 0)] == doctest::Approx(-1.0 / (3.0 * t)).epsilon(1e-14));
    CHECK(v[idx3(3, 2, 0, 2)] == doctest::Approx(-1.0 / (3.0 * t)).epsilon(1e-14));
    CHECK(v[idx3(3, 1, 0, 0)] == 0.0);
    CHECK(v[idx3(3, 0, 1, 0)] == 0.0);
    CHECK(v[idx3(3, 1, 2, 0)] == 0.0);
    CHECK(v[idx3(3, 0, 1, 2)] == 0.0);
  }
  CHECK_THROWS_AS(H.gamma.values(Point{-1.0, 0.8, 0.2}), DomainError);
}

TEST_CASE("hat and tilde connections correspond under F") {
  Gen g(43);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = g.integer(2, 3);
    const auto pi = pi_symbols(g.polynomial_connection(n));
    const auto T = thomas_lift(pi);
    const auto H = hat_connection(pi);
    const auto F = fibre_map(n);
    for (int k = 0; k < 3; ++k) {
      Point ph = g.point(n);
      ph.insert(ph.begin(), g.uniform(0.2, 3.0));
      const auto a = transform_connection(H.gamma, F, ph);
      const auto b = T.gamma.values(F_map(ph));
      for (std::size_t r = 0; r < a.size(); ++r) CHECK(std::abs(a[r] - b[r]) < 1e-10 * (1 + std::abs(b[r])));
    }
  }
}

TEST_CASE("lifted connections are covariant across charts") {
  Gen g(44);
  const TransitionMap T = polar_to_cartesian();
  const auto L = lift_transition(T, kPolarPts);
  for (int trial = 0; trial < 4; ++trial) {
    const auto pa = pi_symbols(g.polynomial_connection(2));
    const auto pb = pi_symbols(pushforward(pa.as_connection(), T));
    const auto tilde_a = thomas_lift(pa), tilde_b = thomas_lift(pb);
    const auto hat_a = hat_connection(pa), hat_b = hat_connection(pb);
    for (int k = 0; k < 4; ++k) {
      const Point x{g.uniform(0.6, 1.8), g.uniform(-0.9, 0.9)};

      const Point pt = lifted(g.uniform(-1, 1), x);
      const auto moved = transform_connection(tilde_a.gamma, L.tilde, pt);
      const auto direct = tilde_b.gamma.values(L.tilde.apply(pt));
      for (std::size_t r = 0; r < moved.size(); ++r) CHECK(std::abs(moved[r] - direct[r]) < 1e-8 * (1 + std::abs(direct[r])));
      // the fibre block stays −δ/(n+1)
      for (int K = 0; K < 3; ++K)
        for (int I = 0; I < 3; ++I)
          CHECK(std::abs(moved[idx3(3, K, I, 0)] - (K == I ? -1.0 / 3.0 : 0.0)) < 1e-8);

      const Point ph = lifted(g.uniform(0.2, 3.0), x);
      const auto hmoved = transform_connection(hat_a.gamma, L.hat, ph);
      const auto hdirect = hat_b.gamma.values(L.hat.apply(ph));
      for (std::size_t r = 0; r < hmoved.size(); ++r)
        CHECK(std::abs(hmoved[r] - hdirect[r]) < 1e-8 * (1 + std::abs(hdirect[r])));
    }
  }
}
