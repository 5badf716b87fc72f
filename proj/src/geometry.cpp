#include "projdens/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "projdens/errors.hpp"

namespace projdens {

Chart::Chart(int dim, Box box) : dim_(dim), box_(std::move(box)) {
  if (dim < 2) throw DimensionError("charts need dimension n >= 2");
  if (static_cast<int>(box_.lo.size()) != dim || static_cast<int>(box_.hi.size()) != dim)
    throw DimensionError("sample box does not match chart dimension");
  for (int i = 0; i < dim; ++i)
    if (!(box_.lo[i] < box_.hi[i])) throw DimensionError("empty sample box along axis " + std::to_string(i));
}

bool Chart::contains(std::span<const double> p) const {
  if (static_cast<int>(p.size()) != dim_) return false;
  for (int i = 0; i < dim_; ++i)
    if (p[i] < box_.lo[i] || p[i] > box_.hi[i]) return false;
  return true;
}

std::vector<Point> Chart::sample(std::uint64_t seed, int count) const {
  UniformStream u(seed);
  std::vector<Point> pts(count, Point(dim_));
  for (auto& p : pts)
    for (int i = 0; i < dim_; ++i) p[i] = u.next(box_.lo[i], box_.hi[i]);
  return pts;
}

UniformStream::UniformStream(std::uint64_t seed) : state_(seed) {}

double UniformStream::next() {
  // splitmix64
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

Expr symbolic_det(const ExprMatrix& m) {
  const int n = static_cast<int>(m.size());
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  Expr det;
  for (int c = 0; c < n; ++c) {
    if (m[0][c].is_constant(0.0)) continue;
    ExprMatrix minor(n - 1);
    for (int r = 1; r < n; ++r)
      for (int k = 0; k < n; ++k)
        if (k != c) minor[r - 1].push_back(m[r][k]);
    const Expr term = m[0][c] * symbolic_det(minor);
    det = (c % 2 == 0) ? det + term : det - term;
  }
  return det;
}

ExprMatrix symbolic_inverse(const ExprMatrix& m) {
  const int n = static_cast<int>(m.size());
  const Expr det = symbolic_det(m);
  ExprMatrix inv(n, std::vector<Expr>(n));
  if (n == 1) {
    inv[0][0] = 1.0 / det;
    return inv;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // cofactor C_ji goes to inv(i, j)
      ExprMatrix minor(n - 1);
      for (int r = 0, rr = 0; r < n; ++r) {
        if (r == j) continue;
        for (int k = 0; k < n; ++k)
          if (k != i) minor[rr].push_back(m[r][k]);
        ++rr;
      }
      const Expr cof = symbolic_det(minor);
      inv[i][j] = ((i + j) % 2 == 0 ? cof : -cof) / det;
    }
  }
  return inv;
}

TransitionMap::TransitionMap(std::vector<ScalarField> forward, std::vector<ScalarField> inverse)
    : forward_(std::move(forward)), inverse_(std::move(inverse)) {
  const int n = static_cast<int>(forward_.size());
  if (n == 0 || static_cast<int>(inverse_.size()) != n)
    throw DimensionError("transition and declared inverse need the same number of components");
  for (const auto& f : forward_)
    if (f.dim() != n) throw DimensionError("transition component on wrong chart dimension");
  for (const auto& f : inverse_)
    if (f.dim() != n) throw DimensionError("inverse component on wrong chart dimension");
}

namespace {

Point apply_components(const std::vector<ScalarField>& comps, std::span<const double> x) {
  Point y(comps.size());
  for (std::size_t i = 0; i < comps.size(); ++i) y[i] = comps[i](x);
  return y;
}

std::vector<Expr> exprs_of(const std::vector<ScalarField>& comps) {
  std::vector<Expr> e;
  e.reserve(comps.size());
  for (const auto& c : comps) e.push_back(c.expr());
  return e;
}

std::vector<ScalarField> substituted(const std::vector<ScalarField>& outer,
                                     const std::vector<ScalarField>& inner) {
  const auto xs = exprs_of(inner);
  std::vector<ScalarField> r;
  for (const auto& f : outer) r.emplace_back(substitute(f.expr(), xs), static_cast<int>(inner.size()));
  return r;
}

}  // namespace

Point TransitionMap::apply(std::span<const double> x) const { return apply_components(forward_, x); }

Point TransitionMap::apply_inverse(std::span<const double> y) const {
  return apply_components(inverse_, y);
}

ExprMatrix TransitionMap::jacobian_exprs() const {
  const int n = dim();
  ExprMatrix J(n, std::vector<Expr>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) J[i][j] = derive(forward_[i].expr(), j);
  return J;
}

ExprMatrix TransitionMap::inverse_jacobian_exprs() const {
  const int n = dim();
  ExprMatrix J(n, std::vector<Expr>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) J[i][j] = derive(inverse_[i].expr(), j);
  return J;
}

Expr TransitionMap::jacobian_det_expr() const { return symbolic_det(jacobian_exprs()); }

double TransitionMap::roundtrip_defect(std::span<const Point> source_points) const {
  double worst = 0.0;
  for (const auto& x : source_points) {
    const Point y = apply(x);
    const Point back = apply_inverse(y);
    const Point again = apply(back);
    for (int i = 0; i < dim(); ++i) {
      worst = std::max(worst, std::abs(back[i] - x[i]));
      worst = std::max(worst, std::abs(again[i] - y[i]));
    }
  }
  return worst;
}

TransitionMap compose(const TransitionMap& second, const TransitionMap& first) {
  if (second.dim() != first.dim()) throw DimensionError("cannot compose maps of different dimension");
  return {substituted(second.forward(), first.forward()),
          substituted(first.inverse(), second.inverse())};
}

TransitionMap identity_map(int n) {
  std::vector<ScalarField> id;
  for (int i = 0; i < n; ++i) id.emplace_back(Expr::variable(i), n);
  return {id, id};
}

JacobianData jacobian(const TransitionMap& T, std::span<const double> p) {
  const int n = T.dim();
  JacobianData out;
  out.J.resize(n, n);
  for (int i = 0; i < n; ++i) {
    const Jet2 j = T.forward()[i].jet(p);
    for (int c = 0; c < n; ++c) out.J(i, c) = j.d(c);
  }
  out.det = out.J.determinant();
  out.mod = std::abs(out.det);
  if (!(out.mod >= 1e-12))
    throw SingularJacobianError("singular Jacobian (|det J| = " + std::to_string(out.mod) + ")");
  return out;
}

namespace {

// Jacobian of f at x, and first/second derivatives of the declared inverse at f(x).
struct ChangeOfVariables {
  int n;
  Eigen::MatrixXd J;     // ∂y/∂x
  Eigen::MatrixXd Jinv;  // ∂x/∂y
  std::vector<double> H; // ∂²x^c/∂y^i∂y^j, [c][i][j]
};

ChangeOfVariables change_at(const TransitionMap& T, std::span<const double> p, bool need_hessian) {
  const int n = T.dim();
  ChangeOfVariables cv{n, jacobian(T, p).J, Eigen::MatrixXd(n, n), {}};
  const Point y = T.apply(p);
  if (need_hessian) cv.H.resize(n * n * n);
  for (int c = 0; c < n; ++c) {
    const Jet2 j = T.inverse()[c].jet(y);
    for (int i = 0; i < n; ++i) {
      cv.Jinv(c, i) = j.d(i);
      if (need_hessian)
        for (int k = 0; k < n; ++k) cv.H[idx3(n, c, i, k)] = j.dd(i, k);
    }
  }
  return cv;
}

}  // namespace

std::vector<double> transform_connection(const Connection& conn, const TransitionMap& T,
                                         std::span<const double> p) {
  const int n = T.dim();
  if (conn.dim() != n) throw DimensionError("connection and transition dimensions differ");
  const auto cv = change_at(T, p, true);
  const auto G = conn.values(p);
  std::vector<double> out(n * n * n, 0.0);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int c = 0; c < n; ++c) {
          double inner = cv.H[idx3(n, c, i, j)];
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) inner += cv.Jinv(a, i) * cv.Jinv(b, j) * G[idx3(n, c, a, b)];
          s += cv.J(k, c) * inner;
        }
        out[idx3(n, k, i, j)] = out[idx3(n, k, j, i)] = s;
      }
    }
  }
  return out;
}

std::vector<double> transform_tensor2(const SymmetricFieldMatrix& S, const TransitionMap& T,
                                      std::span<const double> p) {
  const int n = T.dim();
  const auto J = jacobian(T, p).J;
  const auto s = S.values(p);
  std::vector<double> out(n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double v = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) v += J(i, a) * J(j, b) * s[a * n + b];
      out[i * n + j] = out[j * n + i] = v;
    }
  }
  return out;
}

std::vector<double> transform_oneform(const OneForm& form, const TransitionMap& T,
                                      std::span<const double> p) {
  const int n = T.dim();
  const auto cv = change_at(T, p, false);
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a) out[i] += cv.Jinv(a, i) * form[a](p);
  return out;
}

// ---------------------------------------------------------------------------
// symbolic laws

namespace {

struct SymbolicChange {
  int n;
  std::vector<Expr> xs;  // x(y)
  ExprMatrix J;          // ∂y/∂x at x(y)
  ExprMatrix Jinv;       // ∂x/∂y
};

SymbolicChange symbolic_change(const TransitionMap& T) {
  SymbolicChange sc{T.dim(), exprs_of(T.inverse()), {}, T.inverse_jacobian_exprs()};
  sc.J = T.jacobian_exprs();
  for (auto& row : sc.J)
    for (auto& e : row) e = substitute(e, sc.xs);
  return sc;
}

}  // namespace

ScalarField pushforward(const ScalarField& f, const TransitionMap& T) {
  return {substitute(f.expr(), exprs_of(T.inverse())), T.dim()};
}

Connection pushforward(const Connection& conn, const TransitionMap& T) {
  const int n = T.dim();
  if (conn.dim() != n) throw DimensionError("connection and transition dimensions differ");
  const auto sc = symbolic_change(T);
  std::vector<Expr> G(n * n * n);
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b)
        G[idx3(n, c, a, b)] = G[idx3(n, c, b, a)] = substitute(conn(c, a, b).expr(), sc.xs);

  std::vector<ScalarField> out(n * n * n, ScalarField(Expr(), n));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      // inner^c = Jinv^a_i Jinv^b_j Γ^c_ab + ∂²x^c/∂y^i∂y^j
      std::vector<Expr> inner(n);
      for (int c = 0; c < n; ++c) {
        Expr s = derive(sc.Jinv[c][i], j);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) s = s + sc.Jinv[a][i] * sc.Jinv[b][j] * G[idx3(n, c, a, b)];
        inner[c] = s;
      }
      for (int k = 0; k < n; ++k) {
        Expr s;
        for (int c = 0; c < n; ++c) s = s + sc.J[k][c] * inner[c];
        out[idx3(n, k, i, j)] = ScalarField(s, n);
      }
    }
  }
  return Connection::from_upper(n, std::move(out));
}

UpperMetric pushforward(const UpperMetric& S, const TransitionMap& T) {
  const int n = T.dim();
  const auto sc = symbolic_change(T);
  std::vector<ScalarField> out(n * n, ScalarField(Expr(), n));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Expr v;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          v = v + sc.J[i][a] * sc.J[j][b] * substitute(S(a, b).expr(), sc.xs);
      out[i * n + j] = ScalarField(v, n);
    }
  }
  return UpperMetric(SymmetricFieldMatrix::from_upper(n, std::move(out)));
}

Metric pushforward(const Metric& g, const TransitionMap& T) {
  const int n = T.dim();
  const auto sc = symbolic_change(T);
  std::vector<ScalarField> out(n * n, ScalarField(Expr(), n));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Expr v;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          v = v + sc.Jinv[a][i] * sc.Jinv[b][j] * substitute(g(a, b).expr(), sc.xs);
      out[i * n + j] = ScalarField(v, n);
    }
  }
  return Metric(SymmetricFieldMatrix::from_upper(n, std::move(out)));
}

OneForm pushforward(const OneForm& form, const TransitionMap& T) {
  const int n = T.dim();
  const auto sc = symbolic_change(T);
  OneForm out;
  for (int i = 0; i < n; ++i) {
    Expr v;
    for (int a = 0; a < n; ++a) v = v + sc.Jinv[a][i] * substitute(form[a].expr(), sc.xs);
    out.emplace_back(v, n);
  }
  return out;
}

}  // namespace projdens
