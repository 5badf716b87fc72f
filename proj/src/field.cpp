#include "projdens/field.hpp"

#include <algorithm>
#include <cmath>

#include "projdens/errors.hpp"

namespace projdens {

ScalarField::ScalarField(Expr expr, int dim)
    : expr_(std::move(expr)), dim_(dim), tape_(std::make_shared<const Tape>(expr_)) {
  if (dim <= 0) throw DimensionError("field dimension must be positive");
  if (expr_.arity() > dim)
    throw DimensionError("expression uses x" + std::to_string(expr_.arity() - 1) +
                         " but the chart has dimension " + std::to_string(dim));
}

double ScalarField::operator()(std::span<const double> p) const {
  if (static_cast<int>(p.size()) != dim_)
    throw DimensionError("point dimension " + std::to_string(p.size()) + " != field dimension " +
                         std::to_string(dim_));
  return tape_->evaluate(p);
}

Jet2 ScalarField::jet(std::span<const double> p) const {
  if (static_cast<int>(p.size()) != dim_)
    throw DimensionError("point dimension " + std::to_string(p.size()) + " != field dimension " +
                         std::to_string(dim_));
  return tape_->evaluate_jet(p);
}

ScalarField parse(std::string_view text, int dim) { return {parse_expr(text, dim), dim}; }

Jet2 eval_jet(const ScalarField& f, std::span<const double> p) { return f.jet(p); }

double fd_crosscheck(const ScalarField& f, std::span<const double> p, double h) {
  const Jet2 j = f.jet(p);
  const int n = f.dim();
  std::vector<double> q(p.begin(), p.end());
  auto at = [&](int i, double si, int k, double sk) {
    q.assign(p.begin(), p.end());
    q[i] += si;
    q[k] += sk;
    return f(q);
  };
  const double f0 = f(p);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double fp = at(i, h, i, 0.0);
    const double fm = at(i, -h, i, 0.0);
    worst = std::max(worst, std::abs((fp - fm) / (2.0 * h) - j.d(i)));
    worst = std::max(worst, std::abs((fp - 2.0 * f0 + fm) / (h * h) - j.dd(i, i)));
    for (int k = i + 1; k < n; ++k) {
      const double mixed =
          (at(i, h, k, h) - at(i, h, k, -h) - at(i, -h, k, h) + at(i, -h, k, -h)) / (4.0 * h * h);
      worst = std::max(worst, std::abs(mixed - j.dd(i, k)));
    }
  }
  return worst;
}

}  // namespace projdens
