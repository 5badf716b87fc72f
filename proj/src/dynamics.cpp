#include "projdens/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "projdens/errors.hpp"

namespace projdens {

namespace {

using State = std::vector<double>;

State axpy(const State& y, double a, const State& k) {
  State out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + a * k[i];
  return out;
}

bool finite(const State& s) {
  return std::all_of(s.begin(), s.end(), [](double v) { return std::isfinite(v); });
}

// Generic fixed-step RK4. `check` runs after each accepted step.
template <class Rhs, class Check>
std::vector<std::pair<double, State>> rk4(Rhs rhs, State y, double T, double h, Check check) {
  if (!(h > 0.0) || !(T >= 0.0)) throw std::invalid_argument("RK4 needs h > 0 and T >= 0");
  std::vector<std::pair<double, State>> out;
  out.emplace_back(0.0, y);
  const auto steps = static_cast<long>(std::ceil(T / h - 1e-9));
  double t = 0.0;
  for (long s = 0; s < steps; ++s) {
    const double dt = std::min(h, T - t);
    try {
      const State k1 = rhs(t, y);
      const State k2 = rhs(t + dt / 2, axpy(y, dt / 2, k1));
      const State k3 = rhs(t + dt / 2, axpy(y, dt / 2, k2));
      const State k4 = rhs(t + dt, axpy(y, dt, k3));
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    } catch (const DomainError& e) {
      throw IntegrationError(std::string("coefficient evaluation failed: ") + e.what(), t);
    }
    t = (s + 1 == steps) ? T : t + dt;
    if (!finite(y)) throw IntegrationError("non-finite state", t);
    check(t, y);
    out.emplace_back(t, y);
  }
  return out;
}

CurvePath geodesic(const Connection& conn, const FieldMatrix* omega0, const Point& x0, const Point& v0,
                   double T, double h) {
  const int n = conn.dim();
  if (static_cast<int>(x0.size()) != n || static_cast<int>(v0.size()) != n)
    throw DimensionError("initial data do not match the connection");
  if (omega0 && omega0->dim() != n) throw DimensionError("omega0 has wrong shape");
  auto rhs = [&](double, const State& y) {
    const std::span<const double> x(y.data(), n);
    const double* v = y.data() + n;
    const auto G = conn.values(x);
    State d(2 * n);
    double cubic = 0.0;
    if (omega0) {
      const auto w = omega0->values(x);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cubic += w[i * n + j] * v[i] * v[j];
    }
    for (int k = 0; k < n; ++k) {
      d[k] = v[k];
      double a = -cubic * v[k];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a -= G[idx3(n, k, i, j)] * v[i] * v[j];
      d[n + k] = a;
    }
    return d;
  };
  State y(x0);
  y.insert(y.end(), v0.begin(), v0.end());
  const auto raw = rk4(rhs, y, T, h, [](double, const State&) {});
  CurvePath path;
  for (const auto& [t, s] : raw) path.push_back({t, Point(s.begin(), s.begin() + n), Point(s.begin() + n, s.end())});
  return path;
}

std::vector<double> chord_lengths(std::span<const Point> p) {
  std::vector<double> c(p.size(), 0.0);
  for (std::size_t i = 1; i < p.size(); ++i) {
    double d = 0.0;
    for (std::size_t k = 0; k < p[i].size(); ++k) d += (p[i][k] - p[i - 1][k]) * (p[i][k] - p[i - 1][k]);
    c[i] = c[i - 1] + std::sqrt(d);
  }
  return c;
}

double point_segment(const Point& q, const Point& a, const Point& b) {
  double ab2 = 0.0, t = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    ab2 += (b[k] - a[k]) * (b[k] - a[k]);
    t += (q[k] - a[k]) * (b[k] - a[k]);
  }
  t = ab2 > 0.0 ? std::clamp(t / ab2, 0.0, 1.0) : 0.0;
  double d = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    const double e = q[k] - (a[k] + t * (b[k] - a[k]));
    d += e * e;
  }
  return std::sqrt(d);
}

// mean distance from vertices of `a` within chord length L to the polyline `b`
double one_sided(std::span<const Point> a, const std::vector<double>& ca, std::span<const Point> b,
                 double L) {
  double sum = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < a.size() && ca[i] <= L; ++i) {
    double best = INFINITY;
    for (std::size_t j = 1; j < b.size(); ++j) best = std::min(best, point_segment(a[i], b[j - 1], b[j]));
    sum += best;
    ++count;
  }
  return sum / count;
}

}  // namespace

CurvePath integrate_linear_geodesic(const Connection& conn, const Point& x0, const Point& v0, double T,
                                    double h) {
  return geodesic(conn, nullptr, x0, v0, T, h);
}

CurvePath integrate_projective_geodesic(const Connection& conn, const FieldMatrix& omega0, const Point& x0,
                                        const Point& v0, double T, double h) {
  return geodesic(conn, &omega0, x0, v0, T, h);
}

double unparametrized_distance(std::span<const Point> a, std::span<const Point> b) {
  if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("paths need at least two points");
  if (a.front().size() != b.front().size()) throw DimensionError("paths live in different dimensions");
  const auto ca = chord_lengths(a), cb = chord_lengths(b);
  const double L = std::min(ca.back(), cb.back());
  if (!(L > 0.0)) throw std::invalid_argument("path has zero length");
  return std::max(one_sided(a, ca, b, L), one_sided(b, cb, a, L));
}

double unparametrized_distance(const CurvePath& a, const CurvePath& b) {
  std::vector<Point> pa, pb;
  for (const auto& s : a) pa.push_back(s.x);
  for (const auto& s : b) pb.push_back(s.x);
  return unparametrized_distance(pa, pb);
}

ProjectiveEhresmannData ProjectiveEhresmannData::zero(int m, int n) {
  const ScalarField z(Expr(), n);
  return {m, n, std::vector<ScalarField>(m * n, z), std::vector<ScalarField>(m * m * n, z),
          std::vector<ScalarField>(m * n, z)};
}

void ProjectiveEhresmannData::validate() const {
  if (m < 1 || n < 1) throw DimensionError("Ehresmann data need m, n >= 1");
  if (static_cast<int>(phi.size()) != m * n || static_cast<int>(psi.size()) != m * m * n ||
      static_cast<int>(eta.size()) != m * n)
    throw DimensionError("Ehresmann data have wrong shape");
  check_uniform_dim(phi, n);
  check_uniform_dim(psi, n);
  check_uniform_dim(eta, n);
}

std::vector<Point> integrate_fibre_flow(const FibreFlow& f, const Point& xi0, double T, double h) {
  auto guard = [](double t, const State& y) {
    double norm = 0.0;
    for (double v : y) norm += v * v;
    if (std::sqrt(norm) > kBlowUp) throw BlowUpError("fibre point left the affine chart (|xi| > 1e8)", t);
  };
  const auto raw = rk4([&](double t, const State& y) { return f(t, y); }, xi0, T, h, guard);
  std::vector<Point> out;
  for (const auto& [t, s] : raw) out.push_back(s);
  return out;
}

FibrePath parallel_transport(const ProjectiveEhresmannData& data, const BasePath& path, const Point& xi0,
                             double T, double h) {
  data.validate();
  const int m = data.m, n = data.n;
  if (static_cast<int>(path.size()) != n) throw DimensionError("base path has wrong number of components");
  if (static_cast<int>(xi0.size()) != m) throw DimensionError("fibre point has wrong dimension");
  for (const auto& c : path)
    if (c.dim() != 1) throw DimensionError("base path components must be fields of one variable");

  auto base = [&](double t, Point& x, Point& dx) {
    const double tt[1] = {t};
    for (int i = 0; i < n; ++i) {
      const Jet2 j = path[i].jet(tt);
      x[i] = j.value;
      dx[i] = j.d(0);
    }
  };
  auto rhs = [&](double t, const Point& xi) {
    Point x(n), dx(n);
    base(t, x, dx);
    Point d(m, 0.0);
    for (int i = 0; i < n; ++i) {
      double quad = 0.0;
      for (int b = 0; b < m; ++b) quad += data.eta[b * n + i](x) * xi[b];
      for (int a = 0; a < m; ++a) {
        double c = data.phi[a * n + i](x) + quad * xi[a];
        for (int b = 0; b < m; ++b) c += data.psi[(a * m + b) * n + i](x) * xi[b];
        d[a] += c * dx[i];
      }
    }
    return d;
  };
  const auto xis = integrate_fibre_flow(rhs, xi0, T, h);
  FibrePath out;
  const long steps = static_cast<long>(xis.size()) - 1;
  for (long s = 0; s <= steps; ++s) {
    const double t = s == steps ? T : s * h;
    Point x(n), dx(n);
    base(t, x, dx);
    out.push_back({t, x, xis[s]});
  }
  return out;
}

Point FractionalLinearMap::operator()(std::span<const double> xi) const {
  const int mm = m();
  if (static_cast<int>(xi.size()) != mm) throw DimensionError("fibre point has wrong dimension");
  const Eigen::Map<const Eigen::VectorXd> v(xi.data(), mm);
  const double den = gamma.dot(v) + delta;
  if (den == 0.0) throw DomainError("point maps to infinity");
  const Eigen::VectorXd r = (alpha * v + beta) / den;
  return Point(r.data(), r.data() + mm);
}

Eigen::MatrixXd FractionalLinearMap::block() const {
  const int mm = m();
  Eigen::MatrixXd b(mm + 1, mm + 1);
  b.topLeftCorner(mm, mm) = alpha;
  b.topRightCorner(mm, 1) = beta;
  b.bottomLeftCorner(1, mm) = gamma;
  b(mm, mm) = delta;
  return b;
}

FractionalLinearFit fit_fractional_linear(std::span<const std::pair<Point, Point>> pairs, int m, int holdout) {
  if (m < 1) throw DimensionError("fibre dimension must be positive");
  if (holdout < 1) throw std::invalid_argument("at least one holdout pair is required");
  const int unknowns = (m + 1) * (m + 1);
  const int fit_count = static_cast<int>(pairs.size()) - holdout;
  if (fit_count * m < unknowns - 1) throw DegenerateFitError("too few pairs to determine a fractional linear map");
  for (const auto& [in, out] : pairs)
    if (static_cast<int>(in.size()) != m || static_cast<int>(out.size()) != m)
      throw DimensionError("pair has wrong fibre dimension");

  // parameter layout: α (row-major), β, γ, δ
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(fit_count * m, unknowns);
  for (int p = 0; p < fit_count; ++p) {
    const auto& [in, out] = pairs[p];
    for (int a = 0; a < m; ++a) {
      const int row = p * m + a;
      for (int b = 0; b < m; ++b) {
        A(row, a * m + b) = -in[b];
        A(row, m * m + m + b) = out[a] * in[b];
      }
      A(row, m * m + a) = -1.0;
      A(row, unknowns - 1) = out[a];
    }
  }
  // scale columns for conditioning; undone below
  Eigen::VectorXd scale = A.colwise().norm().transpose();
  for (int c = 0; c < unknowns; ++c)
    if (scale(c) == 0.0) scale(c) = 1.0;
  const Eigen::MatrixXd As = A * scale.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(As, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const int rank_needed = unknowns - 1;
  if (sv.size() < rank_needed || sv(rank_needed - 1) <= 1e-10 * sv(0))
    throw DegenerateFitError("pairs do not determine a unique fractional linear map");
  Eigen::VectorXd x = scale.cwiseInverse().asDiagonal() * svd.matrixV().col(unknowns - 1);
  Eigen::Index big = 0;
  x.cwiseAbs().maxCoeff(&big);
  x /= x(big);

  FractionalLinearMap map;
  map.alpha = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(x.data(), m, m);
  map.beta = x.segment(m * m, m);
  map.gamma = x.segment(m * m + m, m).transpose();
  map.delta = x(unknowns - 1);
  const Eigen::MatrixXd blk = map.block();
  if (std::abs(blk.determinant()) <= 1e-12 * std::pow(blk.norm(), m + 1))
    throw DegenerateFitError("fitted block matrix is singular");

  double worst = 0.0;
  for (std::size_t p = fit_count; p < pairs.size(); ++p) {
    const auto& [in, out] = pairs[p];
    const Point y = map(in);
    double e = 0.0;
    for (int a = 0; a < m; ++a) e += (y[a] - out[a]) * (y[a] - out[a]);
    worst = std::max(worst, std::sqrt(e));
  }
  return {map, worst};
}

}  // namespace projdens
