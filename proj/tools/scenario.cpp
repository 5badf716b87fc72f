#include "scenario.hpp"

#include <fstream>

#include "projdens/connections.hpp"
#include "projdens/errors.hpp"

namespace projdens::app {

using nlohmann::json;

namespace {

// RFC 6901 escaping of one reference token.
std::string escape(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

// A JSON node together with its pointer, so every error names its location.
class Node {
 public:
  Node(const json& j, std::string ptr) : j_(j), ptr_(std::move(ptr)) {}

  const json& raw() const { return j_; }
  const std::string& ptr() const { return ptr_; }
  [[noreturn]] void fail(const std::string& what) const { throw SchemaError(ptr_, what); }

  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }
  Node at(const std::string& key) const {
    if (!has(key)) Node(j_, ptr_ + "/" + escape(key)).fail("missing required key");
    return {j_.at(key), ptr_ + "/" + escape(key)};
  }
  Node at(std::size_t i) const { return {j_.at(i), ptr_ + "/" + std::to_string(i)}; }

  const Node& object() const {
    if (!j_.is_object()) fail("expected an object");
    return *this;
  }
  std::size_t array(std::size_t expected = SIZE_MAX) const {
    if (!j_.is_array()) fail("expected an array");
    if (expected != SIZE_MAX && j_.size() != expected)
      fail("expected " + std::to_string(expected) + " entries, found " + std::to_string(j_.size()));
    return j_.size();
  }
  double number() const {
    if (!j_.is_number()) fail("expected a number");
    return j_.get<double>();
  }
  double positive() const {
    const double v = number();
    if (!(v > 0.0)) fail("expected a positive number");
    return v;
  }
  int integer(int lo, int hi) const {
    if (!j_.is_number_integer()) fail("expected an integer");
    const auto v = j_.get<std::int64_t>();
    if (v < lo || v > hi) fail("expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<int>(v);
  }
  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  ScalarField field(int dim) const {
    // bare numbers are accepted as constant fields
    if (j_.is_number()) return {Expr::constant(j_.get<double>()), dim};
    try {
      return parse(string(), dim);
    } catch (const Error& e) {
      fail(e.what());
    }
  }
  Point point(int dim) const {
    array(dim);
    Point p(dim);
    for (int i = 0; i < dim; ++i) p[i] = at(i).number();
    return p;
  }
  std::vector<ScalarField> fields(int count, int dim) const {
    array(count);
    std::vector<ScalarField> out;
    for (int i = 0; i < count; ++i) out.push_back(at(i).field(dim));
    return out;
  }
  /// count×count nested array, flattened row-major.
  std::vector<ScalarField> matrix(int count, int dim) const {
    array(count);
    std::vector<ScalarField> out;
    for (int i = 0; i < count; ++i) {
      const auto row = at(i).fields(count, dim);
      out.insert(out.end(), row.begin(), row.end());
    }
    return out;
  }

 private:
  const json& j_;
  std::string ptr_;
};

// Runs `make` and rewrites library errors as schema errors at `node`.
template <class F>
auto guarded(const Node& node, F make) {
  try {
    return make();
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception& e) {
    node.fail(e.what());
  }
}

DensityElement load_density(const Node& node, int dim) {
  node.object();
  DensityElement d(dim);
  for (const auto& [key, value] : node.raw().items()) {
    const Node item(value, node.ptr() + "/" + escape(key));
    const Weight w = guarded(item, [&] { return Weight::parse(key); });
    d.add(w, item.field(dim).expr());
  }
  return d;
}

TransportSpec load_transport(const Node& node, int n) {
  node.object();
  TransportSpec spec;
  const int m = node.at("m").integer(1, 6);
  spec.data = ProjectiveEhresmannData::zero(m, n);
  auto fill = [&](const char* key, std::vector<ScalarField>& dst, int rows) {
    if (!node.has(key)) return;
    const Node arr = node.at(key);
    arr.array(rows);
    for (int r = 0; r < rows; ++r) {
      const auto row = arr.at(r).fields(n, n);
      std::copy(row.begin(), row.end(), dst.begin() + r * n);
    }
  };
  fill("phi", spec.data.phi, m);
  fill("eta", spec.data.eta, m);
  if (node.has("psi")) {
    const Node arr = node.at("psi");
    arr.array(m);
    for (int a = 0; a < m; ++a) {
      const Node rows = arr.at(a);
      rows.array(m);
      for (int b = 0; b < m; ++b) {
        const auto row = rows.at(b).fields(n, n);
        std::copy(row.begin(), row.end(), spec.data.psi.begin() + (a * m + b) * n);
      }
    }
  }
  spec.path = node.at("path").fields(n, 1);
  if (node.has("T")) spec.T = node.at("T").positive();
  if (node.has("h")) spec.h = node.at("h").positive();
  if (node.has("samples")) spec.samples = node.at("samples").integer(m * m + 2 * m + 2, 10000);
  if (node.has("xi_range")) spec.xi_range = node.at("xi_range").positive();
  return spec;
}

}  // namespace

Scenario load_scenario(const json& doc) {
  const Node root(doc, "");
  root.object();
  Scenario s;
  s.name = root.has("name") ? root.at("name").string() : "unnamed";
  s.dim = root.at("dim").integer(2, 6);
  const int n = s.dim;
  if (root.has("seed")) {
    const Node seed = root.at("seed");
    if (!seed.raw().is_number_unsigned()) seed.fail("expected a non-negative integer");
    s.seed = seed.raw().get<std::uint64_t>();
  }

  const Node chart = root.at("chart");
  chart.object();
  s.box = {chart.at("lo").point(n), chart.at("hi").point(n)};
  for (int i = 0; i < n; ++i)
    if (!(s.box.lo[i] < s.box.hi[i])) chart.at("hi").at(i).fail("upper bound must exceed lower bound");

  if (root.has("transition")) {
    const Node t = root.at("transition");
    t.object();
    s.transition = TransitionMap(t.at("forward").fields(n, n), t.at("inverse").fields(n, n));
  }
  if (root.has("metric")) {
    const Node m = root.at("metric");
    s.metric = guarded(m, [&] { return Metric(n, m.matrix(n, n)); });
  }
  if (root.has("connection")) {
    const Node c = root.at("connection");
    c.array(n);
    std::vector<ScalarField> coeffs;
    for (int k = 0; k < n; ++k) {
      const auto block = c.at(k).matrix(n, n);
      coeffs.insert(coeffs.end(), block.begin(), block.end());
    }
    s.connection = guarded(c, [&] { return Connection(n, std::move(coeffs)); });
  } else if (s.metric) {
    s.connection = guarded(root.at("metric"), [&] { return levi_civita(*s.metric); });
  }
  if (root.has("upper_metric")) {
    const Node u = root.at("upper_metric");
    s.upper_metric = guarded(u, [&] { return UpperMetric(n, u.matrix(n, n)); });
  } else if (s.metric) {
    s.upper_metric = guarded(root.at("metric"), [&] { return inverse_metric(*s.metric); });
  }
  if (root.has("oneform")) s.oneform = root.at("oneform").fields(n, n);
  if (root.has("function")) s.function = root.at("function").field(n);

  if (root.has("bracket")) {
    const Node b = root.at("bracket");
    b.object();
    const Weight w = b.has("weight") ? guarded(b.at("weight"), [&] { return Weight::parse(b.at("weight").string()); })
                                     : Weight(0);
    const Node sn = b.at("S");
    UpperMetric S = guarded(sn, [&] { return UpperMetric(n, sn.matrix(n, n)); });
    VectorField gamma = b.has("gamma") ? b.at("gamma").fields(n, n) : VectorField(n, ScalarField(Expr(), n));
    ScalarField theta = b.has("theta") ? b.at("theta").field(n) : ScalarField(Expr(), n);
    s.bracket = BracketData{w, std::move(S), std::move(gamma), std::move(theta)};
  }
  if (root.has("densities")) {
    const Node d = root.at("densities");
    const std::size_t count = d.array();
    for (std::size_t i = 0; i < count; ++i) s.densities.push_back(load_density(d.at(i), n));
  }

  const Chart ch(n, s.box);
  if (root.has("points")) {
    const Node p = root.at("points");
    if (p.raw().is_array()) {
      const std::size_t count = p.array();
      if (count == 0) p.fail("expected at least one point");
      for (std::size_t i = 0; i < count; ++i) s.points.push_back(p.at(i).point(n));
    } else {
      p.object();
      s.points = ch.sample(s.seed, p.at("count").integer(1, 100000));
    }
  } else {
    s.points = ch.sample(s.seed, 20);
  }

  if (root.has("tolerances")) {
    const Node t = root.at("tolerances");
    t.object();
    if (t.has("algebraic")) s.tol.algebraic = t.at("algebraic").positive();
    if (t.has("two_chart")) s.tol.two_chart = t.at("two_chart").positive();
    if (t.has("ode")) s.tol.ode = t.at("ode").positive();
    if (t.has("fractional_linear")) s.tol.fractional_linear = t.at("fractional_linear").positive();
  }
  if (root.has("geodesic")) {
    const Node g = root.at("geodesic");
    g.object();
    GeodesicSpec spec{g.at("x0").point(n), g.at("v0").point(n)};
    if (g.has("T")) spec.T = g.at("T").positive();
    if (g.has("h")) spec.h = g.at("h").positive();
    s.geodesic = spec;
  }
  if (root.has("transport")) s.transport = load_transport(root.at("transport"), n);
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("", "cannot open scenario file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  return load_scenario(doc);
}

namespace {
template <class T>
const T& need(const std::optional<T>& v, const char* key) {
  if (!v) throw SchemaError(std::string("/") + key, "missing required key");
  return *v;
}
}  // namespace

const Connection& Scenario::require_connection() const { return need(connection, "connection"); }
const UpperMetric& Scenario::require_upper_metric() const { return need(upper_metric, "upper_metric"); }
const Metric& Scenario::require_metric() const { return need(metric, "metric"); }
const TransitionMap& Scenario::require_transition() const { return need(transition, "transition"); }
const OneForm& Scenario::require_oneform() const { return need(oneform, "oneform"); }
const ScalarField& Scenario::require_function() const { return need(function, "function"); }
const BracketData& Scenario::require_bracket() const { return need(bracket, "bracket"); }
const GeodesicSpec& Scenario::require_geodesic() const { return need(geodesic, "geodesic"); }
const TransportSpec& Scenario::require_transport() const { return need(transport, "transport"); }

}  // namespace projdens::app
