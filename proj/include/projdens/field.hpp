#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "projdens/expr.hpp"
#include "projdens/jet.hpp"

namespace projdens {

/// A closed-form function on an n-dimensional chart. Immutable; the
/// evaluation tape is compiled once at construction and shared by copies.
class ScalarField {
 public:
  ScalarField() : ScalarField(Expr(), 1) {}
  /// Throws DimensionError if `expr` uses a variable x_i with i >= dim.
  ScalarField(Expr expr, int dim);

  const Expr& expr() const { return expr_; }
  int dim() const { return dim_; }
  bool is_zero() const { return expr_.is_constant(0.0); }

  double operator()(std::span<const double> p) const;
  Jet2 jet(std::span<const double> p) const;
  const Tape& tape() const { return *tape_; }

  ScalarField derivative(int var) const { return {derive(expr_, var), dim_}; }
  std::string to_string() const { return projdens::to_string(expr_); }

 private:
  Expr expr_;
  int dim_;
  std::shared_ptr<const Tape> tape_;
};

/// parse(text, dim): a ScalarField whose free variables lie in x0..x{dim-1}.
ScalarField parse(std::string_view text, int dim);

/// Value, gradient and Hessian of f at p by forward-mode jets.
Jet2 eval_jet(const ScalarField& f, std::span<const double> p);

/// Largest absolute difference between the jet gradient/Hessian and central
/// differences of step h. Throws DomainError if the stencil leaves the domain.
double fd_crosscheck(const ScalarField& f, std::span<const double> p, double h);

}  // namespace projdens
