#include "projdens/densities.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "projdens/errors.hpp"

namespace projdens {

Weight::Weight(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("weight with zero denominator");
  if (den < 0) num = -num, den = -den;
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

Weight Weight::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  auto integer = [&](std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
      throw std::invalid_argument("malformed weight '" + std::string(text) + "'");
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return {integer(text), 1};
  return {integer(text.substr(0, slash)), integer(text.substr(slash + 1))};
}

std::string Weight::to_string() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Weight operator+(Weight a, Weight b) {
  const std::int64_t g = std::gcd(a.den_, b.den_);
  return {a.num_ * (b.den_ / g) + b.num_ * (a.den_ / g), a.den_ / g * b.den_};
}

Weight operator*(Weight a, Weight b) { return {a.num_ * b.num_, a.den_ * b.den_}; }

std::strong_ordering operator<=>(Weight a, Weight b) {
  return a.num_ * b.den_ <=> b.num_ * a.den_;
}

DensityElement DensityElement::term(Weight w, ScalarField coeff) {
  DensityElement d(coeff.dim());
  d.add(w, coeff.expr());
  return d;
}

DensityElement DensityElement::constant(int dim, double c) {
  return term(Weight(0), ScalarField(Expr::constant(c), dim));
}

ScalarField DensityElement::coeff(Weight w) const {
  const auto it = terms_.find(w);
  return it == terms_.end() ? ScalarField(Expr(), dim_) : it->second;
}

std::vector<Weight> DensityElement::weights() const {
  std::vector<Weight> out;
  for (const auto& [w, f] : terms_) out.push_back(w);
  return out;
}

void DensityElement::add(Weight w, const Expr& coeff) {
  const auto it = terms_.find(w);
  const Expr sum = it == terms_.end() ? coeff : it->second.expr() + coeff;
  if (sum.is_constant(0.0)) {
    if (it != terms_.end()) terms_.erase(it);
    return;
  }
  terms_.insert_or_assign(w, ScalarField(sum, dim_));
}

DensityElement operator+(const DensityElement& a, const DensityElement& b) {
  if (a.dim_ != b.dim_) throw DimensionError("densities on charts of different dimension");
  DensityElement out = a;
  for (const auto& [w, f] : b.terms_) out.add(w, f.expr());
  return out;
}

DensityElement operator-(const DensityElement& a, const DensityElement& b) { return a + (-1.0) * b; }

DensityElement operator*(double c, const DensityElement& a) {
  DensityElement out(a.dim_);
  for (const auto& [w, f] : a.terms_) out.add(w, c * f.expr());
  return out;
}

DensityElement density_mul(const DensityElement& a, const DensityElement& b) {
  if (a.dim() != b.dim()) throw DimensionError("densities on charts of different dimension");
  DensityElement out(a.dim());
  for (const auto& [wa, fa] : a.terms())
    for (const auto& [wb, fb] : b.terms()) out.add(wa + wb, fa.expr() * fb.expr());
  return out;
}

DensityElement weight_op(const DensityElement& a) {
  DensityElement out(a.dim());
  for (const auto& [w, f] : a.terms()) out.add(w, w.value() * f.expr());
  return out;
}

Expr hat_expr(const DensityElement& a) {
  const Expr t = Expr::variable(0);
  Expr s;
  for (const auto& [w, f] : a.terms()) s = s + shift_variables(f.expr(), 1) * pow(t, w.value());
  return s;
}

double as_hat_function(const DensityElement& a, std::span<const double> p_hat) {
  if (static_cast<int>(p_hat.size()) != a.dim() + 1) throw DimensionError("HAT point has wrong dimension");
  if (!(p_hat[0] > 0.0)) throw FibreError("HAT points need t > 0");
  const auto x = p_hat.subspan(1);
  double s = 0.0;
  for (const auto& [w, f] : a.terms()) s += f(x) * std::pow(p_hat[0], w.value());
  return s;
}

void BracketData::validate() const {
  const int n = S.dim();
  if (static_cast<int>(gamma.size()) != n) throw DimensionError("bracket γ has wrong length");
  check_uniform_dim(gamma, n);
  if (theta.dim() != n) throw DimensionError("bracket θ lives on a chart of wrong dimension");
}

DensityElement bracket_eval(const BracketData& B, const DensityElement& a, const DensityElement& b) {
  B.validate();
  const int n = B.dim();
  if (a.dim() != n || b.dim() != n) throw DimensionError("densities and bracket differ in dimension");
  DensityElement out(n);
  for (const auto& [mu, phi] : a.terms()) {
    std::vector<Expr> dphi(n);
    for (int i = 0; i < n; ++i) dphi[i] = derive(phi.expr(), i);
    for (const auto& [nu, chi] : b.terms()) {
      std::vector<Expr> dchi(n);
      for (int i = 0; i < n; ++i) dchi[i] = derive(chi.expr(), i);
      Expr s, g_dchi, g_dphi;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s = s + B.S(i, j).expr() * dphi[i] * dchi[j];
      for (int j = 0; j < n; ++j) {
        g_dchi = g_dchi + B.gamma[j].expr() * dchi[j];
        g_dphi = g_dphi + B.gamma[j].expr() * dphi[j];
      }
      s = s + mu.value() * phi.expr() * g_dchi + nu.value() * chi.expr() * g_dphi;
      s = s + (mu * nu).value() * phi.expr() * chi.expr() * B.theta.expr();
      out.add(B.weight + mu + nu, s);
    }
  }
  return out;
}

VectorField upper_connection(const ProjectiveClass& pi, const UpperMetric& S) {
  const int n = pi.dim();
  if (S.dim() != n) throw DimensionError("S and Π differ in dimension");
  const double c = static_cast<double>(n + 1) / (n + 3);
  VectorField out;
  for (int i = 0; i < n; ++i) {
    Expr s;
    for (int j = 0; j < n; ++j) s = s + derive(S(i, j).expr(), j);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) s = s + S(j, k).expr() * pi(i, j, k).expr();
    out.emplace_back(c * s, n);
  }
  return out;
}

VectorField trace_upper_connection(const Metric& g) {
  const int n = g.dim();
  const Connection lc = levi_civita(g);
  const UpperMetric ginv = inverse_metric(g);
  VectorField out;
  for (int i = 0; i < n; ++i) {
    Expr s;
    for (int j = 0; j < n; ++j) {
      Expr tr;
      for (int k = 0; k < n; ++k) tr = tr + lc(k, k, j).expr();
      s = s - ginv(i, j).expr() * tr;
    }
    out.emplace_back(s, n);
  }
  return out;
}

ScalarField upper_covariant_derivative(const VectorField& gamma, const UpperMetric& S,
                                       const OneForm& omega, const ScalarField& sigma) {
  const int n = S.dim();
  if (static_cast<int>(gamma.size()) != n || static_cast<int>(omega.size()) != n)
    throw DimensionError("upper connection data differ in dimension");
  Expr s;
  for (int i = 0; i < n; ++i) {
    Expr w;
    for (int j = 0; j < n; ++j) w = w + S(j, i).expr() * omega[j].expr();
    s = s + w * derive(sigma.expr(), i) + gamma[i].expr() * omega[i].expr() * sigma.expr();
  }
  return {s, n};
}

double upper_connection_axioms_check(const VectorField& gamma, const UpperMetric& S,
                                     const OneForm& omega, const ScalarField& sigma,
                                     const ScalarField& f, std::span<const Point> points) {
  const int n = S.dim();
  OneForm f_omega;
  for (const auto& w : omega) f_omega.emplace_back(f.expr() * w.expr(), n);
  const ScalarField f_sigma(f.expr() * sigma.expr(), n);
  const ScalarField base = upper_covariant_derivative(gamma, S, omega, sigma);
  const ScalarField scaled_form = upper_covariant_derivative(gamma, S, f_omega, sigma);
  const ScalarField scaled_section = upper_covariant_derivative(gamma, S, omega, f_sigma);

  double worst = 0.0;
  const auto sv_size = static_cast<std::size_t>(n);
  for (const auto& p : points) {
    const double fv = f(p), sv = sigma(p), nv = base(p);
    const Jet2 fj = f.jet(p);
    const auto Sv = S.values(p);
    double sharp_f = 0.0;
    for (std::size_t i = 0; i < sv_size; ++i)
      for (std::size_t j = 0; j < sv_size; ++j) sharp_f += omega[j](p) * Sv[j * n + i] * fj.d(static_cast<int>(i));
    worst = std::max(worst, std::abs(scaled_form(p) - fv * nv));
    worst = std::max(worst, std::abs(scaled_section(p) - fv * nv - sharp_f * sv));
  }
  return worst;
}

}  // namespace projdens
