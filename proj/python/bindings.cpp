#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "projdens/connections.hpp"
#include "projdens/densities.hpp"
#include "projdens/dynamics.hpp"
#include "projdens/errors.hpp"
#include "projdens/operators.hpp"
#include "projdens/thomas.hpp"

namespace py = pybind11;
using namespace projdens;

namespace {

using Strings = std::vector<std::string>;
using StringMatrix = std::vector<Strings>;

std::vector<ScalarField> parse_all(const Strings& texts, int dim) {
  std::vector<ScalarField> out;
  for (const auto& t : texts) out.push_back(parse(t, dim));
  return out;
}

std::vector<ScalarField> parse_matrix(const StringMatrix& rows) {
  const int n = static_cast<int>(rows.size());
  std::vector<ScalarField> out;
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != n) throw DimensionError("matrix rows must have length " + std::to_string(n));
    const auto f = parse_all(r, n);
    out.insert(out.end(), f.begin(), f.end());
  }
  return out;
}

Connection make_connection(const std::vector<StringMatrix>& blocks) {
  const int n = static_cast<int>(blocks.size());
  std::vector<ScalarField> coeffs;
  for (const auto& b : blocks) {
    if (static_cast<int>(b.size()) != n) throw DimensionError("connection must be n x n x n");
    const auto f = parse_matrix(b);
    coeffs.insert(coeffs.end(), f.begin(), f.end());
  }
  return Connection(n, std::move(coeffs));
}

py::array_t<double> to_array(const std::vector<Point>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  py::array_t<double> a({rows.size(), cols});
  auto v = a.mutable_unchecked<2>();
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) v(i, j) = rows[i][j];
  return a;
}

std::vector<Point> from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw DimensionError("expected a 2-d array of points");
  auto v = a.unchecked<2>();
  std::vector<Point> out(v.shape(0), Point(v.shape(1)));
  for (py::ssize_t i = 0; i < v.shape(0); ++i)
    for (py::ssize_t j = 0; j < v.shape(1); ++j) out[i][j] = v(i, j);
  return out;
}

std::map<std::string, std::string> density_terms(const DensityElement& d) {
  std::map<std::string, std::string> out;
  for (const auto& [w, f] : d.terms()) out[w.to_string()] = f.to_string();
  return out;
}

DensityElement make_density(int dim, const std::map<std::string, std::string>& terms) {
  DensityElement d(dim);
  for (const auto& [w, text] : terms) d.add(Weight::parse(w), parse(text, dim).expr());
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Projective connections, densities and their invariant operators";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<UnknownIdentifierError>(m, "UnknownIdentifierError", error.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", error.ptr());
  py::register_exception<DomainError>(m, "DomainError", error.ptr());
  py::register_exception<SingularJacobianError>(m, "SingularJacobianError", error.ptr());
  py::register_exception<SingularMetricError>(m, "SingularMetricError", error.ptr());
  py::register_exception<TorsionError>(m, "TorsionError", error.ptr());
  py::register_exception<AsymmetricRicciError>(m, "AsymmetricRicciError", error.ptr());
  py::register_exception<FibreError>(m, "FibreError", error.ptr());
  auto integration = py::register_exception<IntegrationError>(m, "IntegrationError", error.ptr());
  py::register_exception<BlowUpError>(m, "BlowUpError", integration.ptr());
  py::register_exception<DegenerateFitError>(m, "DegenerateFitError", error.ptr());

  py::class_<ScalarField>(m, "ScalarField")
      .def(py::init([](const std::string& text, int dim) { return parse(text, dim); }), py::arg("text"), py::arg("dim"))
      .def_property_readonly("dim", &ScalarField::dim)
      .def("__call__", [](const ScalarField& f, const Point& p) { return f(p); })
      .def("jet",
           [](const ScalarField& f, const Point& p) {
             const Jet2 j = f.jet(p);
             const int n = f.dim();
             Point grad(n);
             std::vector<Point> hess(n, Point(n));
             for (int i = 0; i < n; ++i) {
               grad[i] = j.d(i);
               for (int k = 0; k < n; ++k) hess[i][k] = j.dd(i, k);
             }
             return py::make_tuple(j.value, grad, hess);
           },
           "Value, gradient and Hessian at a point")
      .def("derivative", &ScalarField::derivative)
      .def("__str__", &ScalarField::to_string)
      .def("__repr__", [](const ScalarField& f) { return "ScalarField('" + f.to_string() + "', " + std::to_string(f.dim()) + ")"; });

  py::class_<Metric>(m, "Metric")
      .def(py::init([](const StringMatrix& rows) { return Metric(static_cast<int>(rows.size()), parse_matrix(rows)); }))
      .def_property_readonly("dim", &Metric::dim)
      .def("values", [](const Metric& o, const Point& p) { return o.values(p); });

  py::class_<UpperMetric>(m, "UpperMetric")
      .def(py::init([](const StringMatrix& rows) { return UpperMetric(static_cast<int>(rows.size()), parse_matrix(rows)); }))
      .def_property_readonly("dim", &UpperMetric::dim)
      .def("values", [](const UpperMetric& o, const Point& p) { return o.values(p); });

  py::class_<FieldMatrix>(m, "FieldMatrix")
      .def(py::init([](const StringMatrix& rows) { return FieldMatrix(static_cast<int>(rows.size()), parse_matrix(rows)); }))
      .def_static("zero", &FieldMatrix::zero)
      .def_property_readonly("dim", &FieldMatrix::dim)
      .def("values", [](const FieldMatrix& o, const Point& p) { return o.values(p); });

  py::class_<Connection>(m, "Connection")
      .def(py::init(&make_connection), "Nested [k][i][j] list of expressions")
      .def_static("zero", &Connection::zero)
      .def_property_readonly("dim", &Connection::dim)
      .def("values", [](const Connection& o, const Point& p) { return o.values(p); }, "Values at a point, flattened [k][i][j]");

  py::class_<ProjectiveClass>(m, "ProjectiveClass")
      .def_property_readonly("dim", &ProjectiveClass::dim)
      .def("values", [](const ProjectiveClass& o, const Point& p) { return o.values(p); })
      .def("as_connection", &ProjectiveClass::as_connection);

  m.def("levi_civita", py::overload_cast<const Metric&>(&levi_civita));
  m.def("inverse_metric", &inverse_metric);
  m.def("pi_symbols", &pi_symbols);
  m.def("projective_shift",
        [](const Connection& c, const Strings& theta) { return projective_shift(c, parse_all(theta, c.dim())); });
  m.def("normal_omega0", [](const Connection& c, const py::array_t<double>& pts) { return normal_omega0(c, from_array(pts)); });
  m.def("normality_defect", [](const Connection& c, const FieldMatrix& w, const py::array_t<double>& pts) {
    return normality_defect(c, w, from_array(pts));
  });

  m.def("thomas_lift", [](const ProjectiveClass& pi) { return thomas_lift(pi).gamma; },
        "Connection on (log t, x) with the fibre coordinate in slot 0");
  m.def("hat_connection", [](const ProjectiveClass& pi) { return hat_connection(pi).gamma; },
        "Connection on (t, x) with the fibre coordinate in slot 0");

  py::class_<Weight>(m, "Weight")
      .def(py::init(&Weight::parse))
      .def(py::init<std::int64_t, std::int64_t>(), py::arg("num"), py::arg("den") = 1)
      .def_property_readonly("value", &Weight::value)
      .def("__str__", &Weight::to_string)
      .def("__eq__", [](Weight a, Weight b) { return a == b; });

  py::class_<DensityElement>(m, "Density")
      .def(py::init(&make_density), py::arg("dim"), py::arg("terms"), "terms maps weight text to coefficient text")
      .def_property_readonly("dim", &DensityElement::dim)
      .def("terms", &density_terms)
      .def("coeff", [](const DensityElement& d, const std::string& w) { return d.coeff(Weight::parse(w)); })
      .def("__add__", [](const DensityElement& a, const DensityElement& b) { return a + b; })
      .def("__sub__", [](const DensityElement& a, const DensityElement& b) { return a - b; })
      .def("__mul__", &density_mul)
      .def("__rmul__", [](const DensityElement& a, double c) { return c * a; })
      .def("weight_op", &weight_op)
      .def("hat_value", [](const DensityElement& a, const Point& p) { return as_hat_function(a, p); },
           "Value of the density as a function of (t, x)");

  py::class_<BracketData>(m, "Bracket")
      .def(py::init([](const std::string& weight, const UpperMetric& S, const Strings& gamma, const std::string& theta) {
             BracketData B{Weight::parse(weight), S, parse_all(gamma, S.dim()), parse(theta, S.dim())};
             B.validate();
             return B;
           }),
           py::arg("weight"), py::arg("S"), py::arg("gamma"), py::arg("theta"))
      .def("__call__", [](const BracketData& B, const DensityElement& a, const DensityElement& b) { return bracket_eval(B, a, b); });

  m.def("upper_connection", &upper_connection);
  m.def("trace_upper_connection", &trace_upper_connection);

  py::class_<SecondOrderOperator>(m, "SecondOrderOperator")
      .def_readonly("principal", &SecondOrderOperator::principal)
      .def_readonly("drift", &SecondOrderOperator::drift)
      .def_readonly("zeroth", &SecondOrderOperator::zeroth)
      .def("__call__", [](const SecondOrderOperator& L, const ScalarField& f, const Point& p) { return apply(L, f, p); });
  m.def("projective_laplacian", &projective_laplacian);

  py::class_<HatOperator>(m, "HatOperator")
      .def_readonly("op", &HatOperator::op)
      .def("__call__", [](const HatOperator& L, const DensityElement& a) { return apply(L, a); });
  m.def("extend_to_densities", &extend_to_densities);
  m.def("symbol_to_operator_report", [](const UpperMetric& S, const ProjectiveClass& pi) {
    const OperatorReport r = symbol_to_operator_report(S, pi);
    return py::make_tuple(r.gamma, r.theta);
  });

  auto curve = [](const CurvePath& path) {
    std::vector<Point> t, x, v;
    for (const auto& s : path) {
      t.push_back({s.t});
      x.push_back(s.x);
      v.push_back(s.v);
    }
    return py::make_tuple(to_array(t).attr("ravel")(), to_array(x), to_array(v));
  };
  m.def("integrate_linear_geodesic",
        [curve](const Connection& c, const Point& x0, const Point& v0, double T, double h) {
          return curve(integrate_linear_geodesic(c, x0, v0, T, h));
        },
        py::arg("conn"), py::arg("x0"), py::arg("v0"), py::arg("T"), py::arg("h") = 1e-3, "Returns (t, x, v) arrays");
  m.def("integrate_projective_geodesic",
        [curve](const Connection& c, const FieldMatrix& w, const Point& x0, const Point& v0, double T, double h) {
          return curve(integrate_projective_geodesic(c, w, x0, v0, T, h));
        },
        py::arg("conn"), py::arg("omega0"), py::arg("x0"), py::arg("v0"), py::arg("T"), py::arg("h") = 1e-3);
  m.def("unparametrized_distance", [](const py::array_t<double>& a, const py::array_t<double>& b) {
    return unparametrized_distance(from_array(a), from_array(b));
  });

  m.def("parallel_transport",
        [](const StringMatrix& phi, const std::vector<StringMatrix>& psi, const StringMatrix& eta, const Strings& path,
           const Point& xi0, double T, double h) {
          const int fm = static_cast<int>(xi0.size());
          const int n = static_cast<int>(path.size());
          auto d = ProjectiveEhresmannData::zero(fm, n);
          auto fill = [&](const Strings& row, std::vector<ScalarField>& dst, int offset) {
            if (static_cast<int>(row.size()) != n) throw DimensionError("expected n expressions per row");
            const auto f = parse_all(row, n);
            std::copy(f.begin(), f.end(), dst.begin() + offset);
          };
          if (!phi.empty() && static_cast<int>(phi.size()) != fm) throw DimensionError("phi must be m x n");
          if (!eta.empty() && static_cast<int>(eta.size()) != fm) throw DimensionError("eta must be m x n");
          if (!psi.empty() && static_cast<int>(psi.size()) != fm) throw DimensionError("psi must be m x m x n");
          for (std::size_t a = 0; a < phi.size(); ++a) fill(phi[a], d.phi, a * n);
          for (std::size_t a = 0; a < eta.size(); ++a) fill(eta[a], d.eta, a * n);
          for (std::size_t a = 0; a < psi.size(); ++a) {
            if (static_cast<int>(psi[a].size()) != fm) throw DimensionError("psi must be m x m x n");
            for (int b = 0; b < fm; ++b) fill(psi[a][b], d.psi, (a * fm + b) * n);
          }
          BasePath base;
          for (const auto& p : path) base.push_back(parse(p, 1));
          const FibrePath out = parallel_transport(d, base, xi0, T, h);
          std::vector<Point> t, x, xi;
          for (const auto& s : out) {
            t.push_back({s.t});
            x.push_back(s.x);
            xi.push_back(s.xi);
          }
          return py::make_tuple(to_array(t).attr("ravel")(), to_array(x), to_array(xi));
        },
        py::arg("phi"), py::arg("psi"), py::arg("eta"), py::arg("path"), py::arg("xi0"), py::arg("T"),
        py::arg("h") = 1e-3,
        "phi, eta: m x n expressions; psi: m x m x n; path: n expressions in x0 (time). Returns (t, x, xi)");

  m.def("fit_fractional_linear",
        [](const py::array_t<double>& xin, const py::array_t<double>& xout, int holdout) {
          const auto a = from_array(xin), b = from_array(xout);
          if (a.size() != b.size()) throw DimensionError("input and output sample counts differ");
          std::vector<std::pair<Point, Point>> pairs;
          for (std::size_t i = 0; i < a.size(); ++i) pairs.emplace_back(a[i], b[i]);
          const int m_ = a.empty() ? 0 : static_cast<int>(a[0].size());
          const auto fit = fit_fractional_linear(pairs, m_, holdout);
          const Eigen::MatrixXd B = fit.map.block();
          std::vector<Point> block(B.rows(), Point(B.cols()));
          for (int i = 0; i < B.rows(); ++i)
            for (int j = 0; j < B.cols(); ++j) block[i][j] = B(i, j);
          return py::make_tuple(to_array(block), fit.holdout_residual);
        },
        py::arg("xi_in"), py::arg("xi_out"), py::arg("holdout") = 1,
        "Returns the block matrix [[alpha, beta], [gamma, delta]] and the holdout residual");
}
