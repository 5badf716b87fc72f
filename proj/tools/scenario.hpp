#pragma once

// Scenario files: one JSON document describing a chart, the geometric data on
// it and the parameters of the numerical runs.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "projdens/densities.hpp"
#include "projdens/dynamics.hpp"
#include "projdens/geometry.hpp"

namespace projdens::app {

/// Invalid scenario content; `pointer()` is the JSON pointer of the offending node.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string pointer, const std::string& what)
      : std::runtime_error((pointer.empty() ? std::string("/") : pointer) + ": " + what),
        pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

struct Tolerances {
  double algebraic = 1e-10;
  double two_chart = 1e-8;
  double ode = 1e-4;
  double fractional_linear = 1e-6;
};

struct GeodesicSpec {
  Point x0;
  Point v0;
  double T = 0.5;
  double h = 1e-3;
};

struct TransportSpec {
  ProjectiveEhresmannData data;
  BasePath path;
  double T = 1.0;
  double h = 1e-3;
  int samples = 15;
  double xi_range = 0.5;
};

struct Scenario {
  std::string name;
  int dim = 0;
  std::uint64_t seed = 0;
  Box box;
  std::optional<TransitionMap> transition;
  std::optional<Metric> metric;
  std::optional<Connection> connection;
  std::optional<UpperMetric> upper_metric;
  std::optional<OneForm> oneform;
  std::optional<ScalarField> function;
  std::optional<BracketData> bracket;
  std::vector<DensityElement> densities;
  std::vector<Point> points;
  Tolerances tol;
  std::optional<GeodesicSpec> geodesic;
  std::optional<TransportSpec> transport;

  /// The connection, or the Levi-Civita connection of the metric.
  const Connection& require_connection() const;
  /// The upper metric, or the inverse of the metric.
  const UpperMetric& require_upper_metric() const;
  const Metric& require_metric() const;
  const TransitionMap& require_transition() const;
  const OneForm& require_oneform() const;
  const ScalarField& require_function() const;
  const BracketData& require_bracket() const;
  const GeodesicSpec& require_geodesic() const;
  const TransportSpec& require_transport() const;
};

/// Throws SchemaError for every structural or content problem.
Scenario load_scenario(const nlohmann::json& doc);
Scenario load_scenario_file(const std::string& path);

}  // namespace projdens::app
