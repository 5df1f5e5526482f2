/**
 * @file convex_scalar.hpp
 * @brief Convex functions of one real variable with a subgradient oracle.
 */
#pragma once

#include <functional>
#include <string>
#include <vector>

namespace tvg {

/// A convex function phi: R -> R. Nonsmooth members also carry a proximal
/// map, which the separable minimizer uses to smooth them (Moreau envelope).
class ConvexScalar {
 public:
  using Fn = std::function<double(double)>;
  /// prox(x, mu) = argmin_y phi(y) + (y - x)^2 / (2 mu)
  using Prox = std::function<double(double, double)>;

  ConvexScalar(std::string name, Fn value, Fn subgradient, bool smooth, Prox prox = {});

  double operator()(double x) const { return value_(x); }
  double subgradient(double x) const { return subgradient_(x); }
  bool smooth() const { return smooth_; }
  const std::string& name() const { return name_; }

  double prox(double x, double mu) const;
  /// Derivative of the Moreau envelope with parameter mu; the exact
  /// derivative when the function is smooth.
  double smoothed_derivative(double x, double mu) const;
  /// Value of the Moreau envelope; the exact value when smooth.
  double smoothed_value(double x, double mu) const;

 private:
  std::string name_;
  Fn value_;
  Fn subgradient_;
  bool smooth_;
  Prox prox_;
};

ConvexScalar linear_phi();
ConvexScalar square_phi();
/// |x|^p for p >= 1.
ConvexScalar power_phi(double p);
/// sqrt(1 + x^2)
ConvexScalar arclength_phi();
/// Huber function with threshold delta: x^2/(2 delta) near zero, |x| - delta/2 beyond.
ConvexScalar huber_phi(double delta);
/// exp((x - shift) / scale)
ConvexScalar exp_phi(double shift, double scale);
/// Continuous piecewise-linear convex function with phi(knots[0]) = value_at_first_knot.
/// `slopes` has knots.size() + 1 strictly increasing entries.
ConvexScalar piecewise_linear_phi(std::vector<double> knots, std::vector<double> slopes,
                                  double value_at_first_knot = 0.0);

}  // namespace tvg
