#include "projdens/connections.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "projdens/errors.hpp"
#include "projdens/geometry.hpp"

namespace projdens {

namespace {

ExprMatrix exprs_of(const SymmetricFieldMatrix& m) {
  const int n = m.dim();
  ExprMatrix e(n, std::vector<Expr>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) e[i][j] = m(i, j).expr();
  return e;
}

double delta(int a, int b) { return a == b ? 1.0 : 0.0; }

}  // namespace

ProjectiveClass::ProjectiveClass(Connection symbols) : symbols_(std::move(symbols)) {
  static constexpr std::array<double, 4> kBase = {0.57, 1.13, 0.83, 1.41};
  const int n = symbols_.dim();
  for (int probe = 0; probe < 4; ++probe) {
    Point p(n);
    for (int i = 0; i < n; ++i) p[i] = kBase[(probe + i) % kBase.size()] + 0.03 * i;
    std::vector<double> v;
    try {
      v = symbols_.values(p);
    } catch (const DomainError&) {
      continue;
    }
    for (int j = 0; j < n; ++j) {
      double tr = 0.0;
      for (int l = 0; l < n; ++l) tr += v[idx3(n, l, l, j)];
      if (std::abs(tr) > 1e-10)
        throw std::invalid_argument("projective symbols are not trace-free (trace " +
                                    std::to_string(tr) + ")");
    }
  }
}

ProjectiveClass ProjectiveClass::trusted(Connection symbols) {
  ProjectiveClass pc;
  pc.symbols_ = std::move(symbols);
  return pc;
}

UpperMetric inverse_metric(const Metric& g) {
  const int n = g.dim();
  const ExprMatrix inv = symbolic_inverse(exprs_of(g));
  std::vector<ScalarField> e(n * n, ScalarField(Expr(), n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) e[i * n + j] = ScalarField(inv[i][j], n);
  return UpperMetric(SymmetricFieldMatrix::from_upper(n, std::move(e)));
}

Connection levi_civita(const Metric& g) {
  const int n = g.dim();
  const UpperMetric ginv = inverse_metric(g);
  // dg[l][i][j] = ∂_l g_ij
  std::vector<Expr> dg(n * n * n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) dg[idx3(n, l, i, j)] = dg[idx3(n, l, j, i)] = derive(g(i, j).expr(), l);

  std::vector<ScalarField> out(n * n * n, ScalarField(Expr(), n));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        Expr s;
        for (int l = 0; l < n; ++l) {
          const Expr bracket = dg[idx3(n, i, j, l)] + dg[idx3(n, j, i, l)] - dg[idx3(n, l, i, j)];
          s = s + ginv(k, l).expr() * bracket;
        }
        out[idx3(n, k, i, j)] = ScalarField(0.5 * s, n);
      }
    }
  }
  return Connection::from_upper(n, std::move(out));
}

Connection levi_civita(const Metric& g, std::span<const Point> check_points) {
  const int n = g.dim();
  for (const auto& p : check_points) {
    const auto v = g.values(p);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = v[i * n + j];
    if (!(std::abs(m.determinant()) >= 1e-12)) throw SingularMetricError("metric is singular at a sample point");
  }
  return levi_civita(g);
}

ProjectiveClass pi_symbols(const Connection& conn) {
  const int n = conn.dim();
  // trace τ_j = Γ^l_lj
  std::vector<Expr> tau(n);
  for (int j = 0; j < n; ++j) {
    Expr t;
    for (int l = 0; l < n; ++l) t = t + conn(l, l, j).expr();
    tau[j] = t;
  }
  const double w = 1.0 / (n + 1);
  std::vector<ScalarField> out(n * n * n, ScalarField(Expr(), n));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        Expr corr;
        if (k == i) corr = corr + tau[j];
        if (k == j) corr = corr + tau[i];
        out[idx3(n, k, i, j)] = ScalarField(conn(k, i, j).expr() - w * corr, n);
      }
    }
  }
  return ProjectiveClass::trusted(Connection::from_upper(n, std::move(out)));
}

Connection projective_shift(const Connection& conn, const OneForm& theta) {
  const int n = conn.dim();
  if (static_cast<int>(theta.size()) != n) throw DimensionError("1-form has wrong number of components");
  std::vector<ScalarField> out(n * n * n, ScalarField(Expr(), n));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        Expr e = conn(k, i, j).expr();
        if (k == i) e = e + theta[j].expr();
        if (k == j) e = e + theta[i].expr();
        out[idx3(n, k, i, j)] = ScalarField(e, n);
      }
    }
  }
  return Connection::from_upper(n, std::move(out));
}

CurvatureData curvature(const Connection& conn, const FieldMatrix& omega0,
                        std::span<const double> p, CurvatureSign sign) {
  const int n = conn.dim();
  if (n < 2) throw DimensionError("curvature needs n >= 2");
  if (omega0.dim() != n) throw DimensionError("omega0 has wrong shape");
  const double q = sign == CurvatureSign::kDisplayed ? -1.0 : 1.0;

  std::vector<Jet2> G(n * n * n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) G[idx3(n, k, i, j)] = G[idx3(n, k, j, i)] = conn(k, i, j).jet(p);
  const auto w0 = omega0.values(p);

  CurvatureData cd;
  cd.n = n;
  cd.A.assign(n * n * n * n, 0.0);
  cd.A0.assign(n * n * n, 0.0);
  cd.trace.assign(n * n, 0.0);

  // B[k][l]: coefficient of dx^k ⊗ dx^l before antisymmetrisation
  std::vector<double> B(n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          double b = G[idx3(n, i, j, l)].d(k);  // dω^i_j
          for (int m = 0; m < n; ++m) b += q * G[idx3(n, i, m, k)].value * G[idx3(n, m, j, l)].value;
          b -= w0[j * n + k] * delta(i, l);  // ω^0_j ∧ dx^i
          b -= delta(i, j) * w0[l * n + k];  // δ^i_j ω^0_k ∧ dx^k
          B[k * n + l] = b;
        }
      }
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          cd.A[((i * n + j) * n + k) * n + l] = 0.5 * (B[k * n + l] - B[l * n + k]);
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        double b_kl = 0.0, b_lk = 0.0;
        for (int j = 0; j < n; ++j) {
          b_kl += w0[j * n + k] * G[idx3(n, j, i, l)].value;
          b_lk += w0[j * n + l] * G[idx3(n, j, i, k)].value;
        }
        cd.A0[(i * n + k) * n + l] = 0.5 * (b_kl - b_lk);
      }
    }
  }
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) cd.trace[j * n + k] += cd.a(i, j, k, i);
  return cd;
}

std::vector<double> ricci(const Connection& conn, std::span<const double> p, CurvatureSign sign) {
  return curvature(conn, FieldMatrix::zero(conn.dim()), p, sign).trace;
}

FieldMatrix ricci_fields(const Connection& conn, CurvatureSign sign) {
  const int n = conn.dim();
  const double q = sign == CurvatureSign::kDisplayed ? -1.0 : 1.0;
  std::vector<ScalarField> out;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      // ½ Σ_i (B_ki − B_ik) with B_kl = ∂_kΓ^i_jl + q Γ^i_mk Γ^m_jl
      Expr s;
      for (int i = 0; i < n; ++i) {
        s = s + derive(conn(i, j, i).expr(), k) - derive(conn(i, j, k).expr(), i);
        for (int m = 0; m < n; ++m) {
          s = s + q * (conn(i, m, k).expr() * conn(m, j, i).expr() -
                       conn(i, m, i).expr() * conn(m, j, k).expr());
        }
      }
      out.emplace_back(0.5 * s, n);
    }
  }
  return {n, std::move(out)};
}

FieldMatrix normal_omega0(const Connection& conn, std::span<const Point> check_points) {
  const int n = conn.dim();
  if (n < 2) throw DimensionError("normal omega0 needs n >= 2");
  const FieldMatrix R = ricci_fields(conn);
  for (const auto& p : check_points) {
    const auto v = R.values(p);
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        if (std::abs(v[j * n + k] - v[k * n + j]) > 1e-8)
          throw AsymmetricRicciError("Ricci tensor is not symmetric (R_" + std::to_string(j) +
                                     std::to_string(k) + " - R_" + std::to_string(k) +
                                     std::to_string(j) + " = " +
                                     std::to_string(v[j * n + k] - v[k * n + j]) + ")");
  }
  const double c = 2.0 / (n - 1);
  std::vector<ScalarField> out;
  for (const auto& r : R.entries()) out.emplace_back(c * r.expr(), n);
  return {n, std::move(out)};
}

double normality_defect(const Connection& conn, const FieldMatrix& omega0,
                        std::span<const Point> points) {
  double worst = 0.0;
  for (const auto& p : points)
    for (double a : curvature(conn, omega0, p).trace) worst = std::max(worst, std::abs(a));
  return worst;
}

}  // namespace projdens
