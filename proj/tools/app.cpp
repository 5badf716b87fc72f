#include "app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "projdens/connections.hpp"
#include "projdens/densities.hpp"
#include "projdens/dynamics.hpp"
#include "projdens/errors.hpp"
#include "projdens/operators.hpp"
#include "projdens/thomas.hpp"

namespace projdens::app {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// |a - b| measured relative to max(1, |b|)
double gap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double max_gap(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, gap(a[i], b[i]));
  return worst;
}

// Trace-free part of connection values [k][i][j].
std::vector<double> project(const std::vector<double>& g, int n) {
  std::vector<double> tr(n, 0.0), out(g);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) tr[j] += g[idx3(n, l, l, j)];
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out[idx3(n, k, i, j)] -= ((k == i ? tr[j] : 0.0) + (k == j ? tr[i] : 0.0)) / (n + 1);
  return out;
}

std::string upper_lower(const char* sym, int k, int i, int j) {
  return std::string(sym) + "^" + std::to_string(k) + "_" + std::to_string(i) + std::to_string(j);
}

Report coefficients3(const char* sym, const std::vector<double>& v, int n) {
  Report r = Report::object();
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) r[upper_lower(sym, k, i, j)] = v[idx3(n, k, i, j)];
  return r;
}

Report density_terms(const DensityElement& d) {
  Report r = Report::object();
  for (const auto& [w, f] : d.terms()) r[w.to_string()] = f.to_string();
  return r;
}

struct Options {
  std::vector<Point> at;
  std::string flavor = "tilde";
  std::optional<double> fibre;
  std::string omega0 = "none";
  bool shift = false;
  std::vector<double> xi;
  std::string suite = "all";
};

const std::vector<Point>& points(const Scenario& s, const Options& o) { return o.at.empty() ? s.points : o.at; }

Report header(const char* command, const Scenario& s) {
  Report r;
  r["command"] = command;
  r["scenario"] = s.name;
  return r;
}

// --- point-wise reports

Report cmd_pi(const Scenario& s, const Options& o) {
  const ProjectiveClass pi = pi_symbols(s.require_connection());
  Report r = header("pi", s);
  for (const Point& p : points(s, o)) r["points"].push_back({{"x", p}, {"values", coefficients3("Pi", pi.values(p), s.dim)}});
  return r;
}

Report cmd_lift(const Scenario& s, const Options& o) {
  const bool hat = o.flavor == "hat";
  const ProjectiveClass pi = pi_symbols(s.require_connection());
  const LiftedConnection L = hat ? hat_connection(pi) : thomas_lift(pi);
  const double fibre = o.fibre.value_or(hat ? 1.0 : 0.0);
  Report r = header("lift", s);
  r["flavor"] = o.flavor;
  for (const Point& p : points(s, o)) {
    Point q{fibre};
    q.insert(q.end(), p.begin(), p.end());
    r["points"].push_back({{"x", q}, {"values", coefficients3("Gamma", L.gamma.values(q), s.dim + 1)}});
  }
  return r;
}

Report cmd_laplacian(const Scenario& s, const Options& o) {
  const int n = s.dim;
  const SecondOrderOperator L = projective_laplacian(pi_symbols(s.require_connection()), s.require_upper_metric());
  Report r = header("laplacian", s);
  for (const Point& p : points(s, o)) {
    Report v = Report::object();
    const auto S = L.principal.values(p);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) v["S^" + std::to_string(i) + std::to_string(j)] = S[i * n + j];
    for (int i = 0; i < n; ++i) v["d^" + std::to_string(i)] = L.drift[i](p);
    if (s.function) v["Lf"] = apply(L, *s.function, p);
    r["points"].push_back({{"x", p}, {"values", v}});
  }
  return r;
}

Report cmd_upper(const Scenario& s, const Options& o) {
  const VectorField g = upper_connection(pi_symbols(s.require_connection()), s.require_upper_metric());
  Report r = header("upper", s);
  for (const Point& p : points(s, o)) {
    Report v = Report::object();
    for (int i = 0; i < s.dim; ++i) v["gamma^" + std::to_string(i)] = g[i](p);
    r["points"].push_back({{"x", p}, {"values", v}});
  }
  return r;
}

Report cmd_bracket(const Scenario& s, const Options& o) {
  const BracketData& B = s.require_bracket();
  if (s.densities.empty()) throw SchemaError("/densities", "missing required key");
  Report r = header("bracket", s);
  for (std::size_t a = 0; a < s.densities.size(); ++a) {
    for (std::size_t b = a; b < s.densities.size(); ++b) {
      const DensityElement c = bracket_eval(B, s.densities[a], s.densities[b]);
      Report entry{{"pair", {a, b}}, {"terms", density_terms(c)}};
      for (const Point& p : points(s, o)) {
        Report v = Report::object();
        for (const auto& [w, f] : c.terms()) v[w.to_string()] = f(p);
        entry["points"].push_back({{"x", p}, {"values", v}});
      }
      r["brackets"].push_back(entry);
    }
  }
  return r;
}

Report cmd_extend(const Scenario& s, const Options& o) {
  const ProjectiveClass pi = pi_symbols(s.require_connection());
  const OperatorReport rep = symbol_to_operator_report(s.require_upper_metric(), pi);
  Report r = header("extend", s);
  for (const Point& p : points(s, o)) {
    Report v = Report::object();
    for (int i = 0; i < s.dim; ++i) v["gamma^" + std::to_string(i)] = rep.gamma[i](p);
    v["theta"] = rep.theta(p);
    r["points"].push_back({{"x", p}, {"values", v}});
  }
  if (s.bracket) {
    const HatOperator L = extend_to_densities(*s.bracket, pi);
    for (const auto& d : s.densities) r["images"].push_back({{"density", density_terms(d)}, {"image", density_terms(apply(L, d))}});
  }
  return r;
}

// --- trajectories

Report cmd_geodesic(const Scenario& s, const Options& o) {
  const GeodesicSpec& g = s.require_geodesic();
  Connection conn = s.require_connection();
  if (o.shift) conn = projective_shift(conn, s.require_oneform());
  CurvePath path;
  if (o.omega0 == "none") {
    path = integrate_linear_geodesic(conn, g.x0, g.v0, g.T, g.h);
  } else {
    const FieldMatrix w = o.omega0 == "normal" ? normal_omega0(conn, s.points) : FieldMatrix::zero(s.dim);
    path = integrate_projective_geodesic(conn, w, g.x0, g.v0, g.T, g.h);
  }
  Report r = header("geodesic", s);
  r["columns"].push_back("t");
  for (int i = 0; i < s.dim; ++i) r["columns"].push_back("x" + std::to_string(i));
  for (const auto& st : path) {
    Report row{st.t};
    for (double x : st.x) row.push_back(x);
    r["rows"].push_back(row);
  }
  return r;
}

Report cmd_transport(const Scenario& s, const Options& o) {
  const TransportSpec& t = s.require_transport();
  const Point xi0 = o.xi.empty() ? Point(t.data.m, 0.0) : o.xi;
  if (static_cast<int>(xi0.size()) != t.data.m)
    throw CLI::ValidationError("--xi", "expected " + std::to_string(t.data.m) + " components");
  const FibrePath path = parallel_transport(t.data, t.path, xi0, t.T, t.h);
  Report r = header("transport", s);
  r["columns"].push_back("t");
  for (int i = 0; i < s.dim; ++i) r["columns"].push_back("x" + std::to_string(i));
  for (int a = 0; a < t.data.m; ++a) r["columns"].push_back("xi" + std::to_string(a));
  for (const auto& st : path) {
    Report row{st.t};
    for (double x : st.x) row.push_back(x);
    for (double x : st.xi) row.push_back(x);
    r["rows"].push_back(row);
  }
  return r;
}

// --- check suites

struct Check {
  std::string name;
  double tolerance;
  std::function<double()> defect;
};

Report run_checks(const std::string& suite, const std::vector<Check>& checks) {
  Report r{{"suite", suite}};
  bool pass = true;
  for (const auto& c : checks) {
    Report e{{"name", c.name}};
    try {
      const double d = c.defect();
      const bool ok = d <= c.tolerance;
      e["defect"] = d;
      e["tolerance"] = c.tolerance;
      e["pass"] = ok;
      pass = pass && ok;
    } catch (const SchemaError&) {
      throw;
    } catch (const std::exception& ex) {
      e["defect"] = nullptr;
      e["tolerance"] = c.tolerance;
      e["pass"] = false;
      e["error"] = ex.what();
      pass = false;
    }
    r["checks"].push_back(e);
  }
  r["pass"] = pass;
  return r;
}

std::vector<Check> shift_invariance(const Scenario& s) {
  const Connection& conn = s.require_connection();
  const Connection shifted = projective_shift(conn, s.require_oneform());
  const ProjectiveClass a = pi_symbols(conn), b = pi_symbols(shifted);
  std::vector<Check> out{{"pi", s.tol.algebraic, [&s, a, b] {
                            double d = 0.0;
                            for (const Point& p : s.points) d = std::max(d, max_gap(b.values(p), a.values(p)));
                            return d;
                          }}};
  if (s.upper_metric) {
    out.push_back({"laplacian", s.tol.algebraic, [&s, a, b] {
                     const auto La = projective_laplacian(a, *s.upper_metric), Lb = projective_laplacian(b, *s.upper_metric);
                     double d = 0.0;
                     for (const Point& p : s.points)
                       for (int i = 0; i < s.dim; ++i) d = std::max(d, gap(Lb.drift[i](p), La.drift[i](p)));
                     return d;
                   }});
  }
  return out;
}

std::vector<Check> two_chart(const Scenario& s) {
  const TransitionMap& T = s.require_transition();
  const Connection& conn = s.require_connection();
  const int n = s.dim;
  const ProjectiveClass pa = pi_symbols(conn);
  const ProjectiveClass pb = pi_symbols(pushforward(conn, T));
  std::vector<Check> out;
  out.push_back({"pi", s.tol.two_chart, [&s, &T, pa, pb, n] {
                   double d = 0.0;
                   for (const Point& p : s.points)
                     d = std::max(d, max_gap(project(transform_connection(pa.as_connection(), T, p), n),
                                             pb.values(T.apply(p))));
                   return d;
                 }});
  if (s.upper_metric && s.function) {
    out.push_back({"laplacian", s.tol.two_chart, [&s, &T, pa, pb] {
                     const auto La = projective_laplacian(pa, *s.upper_metric);
                     const auto Lb = projective_laplacian(pb, pushforward(*s.upper_metric, T));
                     const ScalarField fb = pushforward(*s.function, T);
                     double d = 0.0;
                     for (const Point& p : s.points) d = std::max(d, gap(apply(La, *s.function, p), apply(Lb, fb, T.apply(p))));
                     return d;
                   }});
  }
  out.push_back({"thomas-lift", s.tol.two_chart, [&s, &T, pa, pb] {
                   const auto L = lift_transition(T, s.points);
                   const auto a = thomas_lift(pa), b = thomas_lift(pb);
                   UniformStream u(s.seed);
                   double d = 0.0;
                   for (const Point& p : s.points) {
                     Point q{u.next(-1.0, 1.0)};
                     q.insert(q.end(), p.begin(), p.end());
                     d = std::max(d, max_gap(transform_connection(a.gamma, L.tilde, q), b.gamma.values(L.tilde.apply(q))));
                   }
                   return d;
                 }});
  out.push_back({"fibre-block", s.tol.two_chart, [&s, &T, pa, n] {
                   const auto L = lift_transition(T, s.points);
                   const auto a = thomas_lift(pa);
                   UniformStream u(s.seed + 1);
                   double d = 0.0;
                   for (const Point& p : s.points) {
                     Point q{u.next(-1.0, 1.0)};
                     q.insert(q.end(), p.begin(), p.end());
                     const auto moved = transform_connection(a.gamma, L.tilde, q);
                     for (int K = 0; K <= n; ++K)
                       for (int I = 0; I <= n; ++I)
                         d = std::max(d, gap(moved[idx3(n + 1, K, I, 0)], K == I ? -1.0 / (n + 1) : 0.0));
                   }
                   return d;
                 }});
  out.push_back({"hat-lift", s.tol.two_chart, [&s, &T, pa, pb] {
                   const auto L = lift_transition(T, s.points);
                   const auto a = hat_connection(pa), b = hat_connection(pb);
                   UniformStream u(s.seed + 2);
                   double d = 0.0;
                   for (const Point& p : s.points) {
                     Point q{u.next(0.5, 2.0)};
                     q.insert(q.end(), p.begin(), p.end());
                     d = std::max(d, max_gap(transform_connection(a.gamma, L.hat, q), b.gamma.values(L.hat.apply(q))));
                   }
                   return d;
                 }});
  return out;
}

std::vector<Check> volume_form_equality(const Scenario& s) {
  const Metric& g = s.require_metric();
  return {{"upper-connection", s.tol.algebraic, [&s, g] {
             const VectorField a = upper_connection(pi_symbols(levi_civita(g)), inverse_metric(g));
             const VectorField b = trace_upper_connection(g);
             double d = 0.0;
             for (const Point& p : s.points)
               for (int i = 0; i < s.dim; ++i) d = std::max(d, gap(a[i](p), b[i](p)));
             return d;
           }}};
}

std::vector<Check> normality(const Scenario& s) {
  const Connection& conn = s.require_connection();
  return {{"normal-omega0", s.tol.algebraic, [&s, conn] {
             return normality_defect(conn, normal_omega0(conn, s.points), s.points);
           }}};
}

std::vector<Check> weight_derivation(const Scenario& s) {
  if (s.densities.empty()) throw SchemaError("/densities", "missing required key");
  std::vector<Check> out;
  out.push_back({"t-d/dt", s.tol.algebraic, [&s] {
                   UniformStream u(s.seed);
                   double d = 0.0;
                   for (const auto& a : s.densities) {
                     const ScalarField h(hat_expr(a), s.dim + 1);
                     const DensityElement wa = weight_op(a);
                     for (const Point& p : s.points) {
                       Point q{u.next(0.5, 2.0)};
                       q.insert(q.end(), p.begin(), p.end());
                       d = std::max(d, gap(q[0] * h.jet(q).d(0), as_hat_function(wa, q)));
                     }
                   }
                   return d;
                 }});
  out.push_back({"F-pushforward", 0.0, [&s] {
                   UniformStream u(s.seed + 1);
                   double d = 0.0;
                   for (const Point& p : s.points) {
                     Point q{u.next(0.5, 2.0)};
                     q.insert(q.end(), p.begin(), p.end());
                     const Point v = weight_vector_field_check(q);
                     for (std::size_t i = 0; i < v.size(); ++i) d = std::max(d, std::abs(v[i] - (i == 0 ? 1.0 : 0.0)));
                   }
                   return d;
                 }});
  return out;
}

std::vector<Check> fractional_linearity(const Scenario& s) {
  const TransportSpec& t = s.require_transport();
  return {{"holdout-residual", s.tol.fractional_linear, [&s, &t] {
             UniformStream u(s.seed);
             std::vector<std::pair<Point, Point>> pairs;
             for (int k = 0; k < t.samples; ++k) {
               Point xi(t.data.m);
               for (auto& v : xi) v = u.next(-t.xi_range, t.xi_range);
               pairs.emplace_back(xi, parallel_transport(t.data, t.path, xi, t.T, t.h).back().xi);
             }
             return fit_fractional_linear(pairs, t.data.m, std::max(1, t.samples / 5)).holdout_residual;
           }}};
}

std::vector<Check> geodesic_equivalence(const Scenario& s) {
  const GeodesicSpec& g = s.require_geodesic();
  const Connection& conn = s.require_connection();
  const Connection shifted = projective_shift(conn, s.require_oneform());
  return {{"unparametrized-distance", s.tol.ode, [g, conn, shifted] {
             return unparametrized_distance(integrate_linear_geodesic(conn, g.x0, g.v0, g.T, g.h),
                                            integrate_linear_geodesic(shifted, g.x0, g.v0, g.T, g.h));
           }}};
}

using SuiteFn = std::vector<Check> (*)(const Scenario&);

const std::vector<std::pair<std::string, SuiteFn>>& suites() {
  static const std::vector<std::pair<std::string, SuiteFn>> table{
      {"fractional-linearity", fractional_linearity},
      {"geodesic-equivalence", geodesic_equivalence},
      {"normality", normality},
      {"shift-invariance", shift_invariance},
      {"two-chart", two_chart},
      {"volume-form-equality", volume_form_equality},
      {"weight-derivation", weight_derivation},
  };
  return table;
}

Report cmd_check(const Scenario& s, const Options& o) {
  Report r = header("check", s);
  r["suites"] = Report::array();
  r["skipped"] = Report::array();
  bool pass = true;
  for (const auto& [name, fn] : suites()) {
    if (o.suite != "all" && o.suite != name) continue;
    if (o.suite == "all") {
      try {
        const Report rep = run_suite(s, name);
        pass = pass && rep["pass"].get<bool>();
        r["suites"].push_back(rep);
      } catch (const SchemaError& e) {
        r["skipped"].push_back({{"suite", name}, {"reason", e.what()}});
      }
    } else {
      const Report rep = run_suite(s, name);
      pass = pass && rep["pass"].get<bool>();
      r["suites"].push_back(rep);
    }
  }
  r["pass"] = pass;
  return r;
}

// --- rendering

void render_value(const Report& v, std::ostream& out) {
  if (v.is_number_float()) {
    out << fmt(v.get<double>());
  } else if (v.is_string()) {
    out << v.get<std::string>();
  } else if (v.is_array() && std::all_of(v.begin(), v.end(), [](const Report& e) { return e.is_primitive(); })) {
    out << "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out << ", ";
      render_value(v[i], out);
    }
    out << ")";
  } else {
    out << v.dump();
  }
}

void render_text(const Report& v, std::ostream& out, int indent) {
  const std::string pad(indent, ' ');
  for (auto it = v.begin(); it != v.end(); ++it) {
    const Report& e = *it;
    const std::string key = v.is_object() ? it.key() : std::string("-");
    const bool leaf = e.is_primitive() ||
                      (e.is_array() && std::all_of(e.begin(), e.end(), [](const Report& x) { return x.is_primitive(); }));
    if (leaf) {
      out << pad << key << (v.is_object() ? " = " : " ");
      render_value(e, out);
      out << "\n";
    } else {
      out << pad << key << (v.is_object() ? ":" : "") << "\n";
      render_text(e, out, indent + 2);
    }
  }
}

void render_check(const Report& r, std::ostream& out) {
  for (const auto& suite : r["suites"]) {
    for (const auto& c : suite["checks"]) {
      out << (c["pass"].get<bool>() ? "PASS " : "FAIL ") << suite["suite"].get<std::string>() << "/"
          << c["name"].get<std::string>();
      if (c.contains("error")) {
        out << " error: " << c["error"].get<std::string>();
      } else {
        out << " defect=" << fmt(c["defect"].get<double>()) << " tolerance=" << fmt(c["tolerance"].get<double>());
      }
      out << "\n";
    }
  }
  for (const auto& s : r["skipped"]) out << "SKIP " << s["suite"].get<std::string>() << " (" << s["reason"].get<std::string>() << ")\n";
  out << (r["pass"].get<bool>() ? "overall: PASS" : "overall: FAIL") << "\n";
}

void render_csv(const Report& r, std::ostream& out) {
  const auto& cols = r["columns"];
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i].get<std::string>();
  out << "\n";
  for (const auto& row : r["rows"]) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt(row[i].get<double>());
    out << "\n";
  }
}

Point parse_point(const std::string& text) {
  Point p;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      p.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--at", "not a number: '" + item + "'");
    }
  }
  return p;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v{"all"};
    for (const auto& [name, fn] : suites()) v.push_back(name);
    return v;
  }();
  return names;
}

Report run_suite(const Scenario& s, const std::string& suite) {
  for (const auto& [name, fn] : suites())
    if (name == suite) return run_checks(name, fn(s));
  throw std::invalid_argument("unknown suite '" + suite + "'");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Projective connections, densities and their operators on coordinate charts", "projdens"};
  app.require_subcommand(1);
  bool json_out = false;
  std::string scenario_path;
  std::vector<std::string> at;
  Options o;
  app.add_flag("--json", json_out, "Machine-readable JSON report");

  using Command = Report (*)(const Scenario&, const Options&);
  std::vector<std::pair<CLI::App*, Command>> commands;
  auto add = [&](const char* name, const char* help, Command fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    sub->add_flag("--json", json_out, "Machine-readable JSON report");
    commands.emplace_back(sub, fn);
    return sub;
  };
  for (auto* sub : {add("pi", "Projective symbols at the sample points", cmd_pi),
                    add("laplacian", "Projective Laplacian coefficients and its value on the scenario function",
                        cmd_laplacian),
                    add("upper", "Upper connection on volume forms", cmd_upper),
                    add("bracket", "Brackets of the scenario densities", cmd_bracket),
                    add("extend", "Extension to densities and the recovered (gamma, theta)", cmd_extend)})
    sub->add_option("--at", at, "Evaluation point, comma separated (repeatable)");
  CLI::App* lift = add("lift", "Coefficients of the lifted connection", cmd_lift);
  lift->add_option("--at", at, "Evaluation point, comma separated (repeatable)");
  lift->add_option("--flavor", o.flavor, "tilde (fibre log t) or hat (fibre t)")
      ->check(CLI::IsMember({"tilde", "hat"}));
  lift->add_option("--fibre", o.fibre, "Fibre coordinate of the lifted points");
  CLI::App* geo = add("geodesic", "Geodesic trajectory as CSV", cmd_geodesic);
  geo->add_option("--omega0", o.omega0, "none (linear), zero or normal cubic term")
      ->check(CLI::IsMember({"none", "zero", "normal"}));
  geo->add_flag("--shift", o.shift, "Use the connection shifted by the scenario one-form");
  CLI::App* tr = add("transport", "Projective parallel transport as CSV", cmd_transport);
  tr->add_option("--xi", o.xi, "Initial fibre point")->delimiter(',');
  CLI::App* check = add("check", "Run an invariance suite", cmd_check);
  check->add_option("--suite", o.suite, "Suite name")->check(CLI::IsMember(suite_names()));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  }

  try {
    for (const auto& s : at) o.at.push_back(parse_point(s));
    const Scenario s = load_scenario_file(scenario_path);
    for (const Point& p : o.at)
      if (static_cast<int>(p.size()) != s.dim) throw CLI::ValidationError("--at", "point dimension differs from the scenario");
    if (o.flavor == "hat" && o.fibre && !(*o.fibre > 0.0)) throw CLI::ValidationError("--fibre", "hat fibre must be positive");

    for (const auto& [sub, fn] : commands) {
      if (!sub->parsed()) continue;
      const Report r = fn(s, o);
      const std::string name = sub->get_name();
      if (json_out) {
        out << r.dump(2) << "\n";
      } else if (name == "check") {
        render_check(r, out);
      } else if (name == "geodesic" || name == "transport") {
        render_csv(r, out);
      } else {
        render_text(r, out, 0);
      }
      if (name == "check") return r["pass"].get<bool>() ? kPass : kCheckFailed;
    }
    return kPass;
  } catch (const SchemaError& e) {
    err << "schema error at " << e.what() << "\n";
    return kUsage;
  } catch (const CLI::Error& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
}

}  // namespace projdens::app
