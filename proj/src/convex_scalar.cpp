#include "tvgraph/convex_scalar.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "tvgraph/graph.hpp"

namespace tvg {

namespace {

std::string fmt_param(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

// Solves y + mu * g(y) = x for monotone g by bisection.
double generic_prox(const ConvexScalar& phi, double x, double mu) {
  auto residual = [&](double y) { return y + mu * phi.subgradient(y) - x; };
  double lo = x, hi = x;
  double step = 1.0 + std::abs(x);
  while (residual(lo) > 0) lo -= (step *= 2);
  step = 1.0 + std::abs(x);
  while (residual(hi) < 0) hi += (step *= 2);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(x)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (residual(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

ConvexScalar::ConvexScalar(std::string name, Fn value, Fn subgradient, bool smooth, Prox prox)
    : name_(std::move(name)),
      value_(std::move(value)),
      subgradient_(std::move(subgradient)),
      smooth_(smooth),
      prox_(std::move(prox)) {}

double ConvexScalar::prox(double x, double mu) const {
  return prox_ ? prox_(x, mu) : generic_prox(*this, x, mu);
}

double ConvexScalar::smoothed_derivative(double x, double mu) const {
  if (smooth_) return subgradient_(x);
  return (x - prox(x, mu)) / mu;
}

double ConvexScalar::smoothed_value(double x, double mu) const {
  if (smooth_) return value_(x);
  const double y = prox(x, mu);
  return value_(y) + (y - x) * (y - x) / (2.0 * mu);
}

ConvexScalar linear_phi() {
  return ConvexScalar("linear", [](double x) { return x; }, [](double) { return 1.0; }, true);
}

ConvexScalar square_phi() {
  return ConvexScalar(
      "square", [](double x) { return x * x; }, [](double x) { return 2.0 * x; }, true,
      [](double x, double mu) { return x / (1.0 + 2.0 * mu); });
}

ConvexScalar power_phi(double p) {
  if (!(p >= 1.0)) throw InvalidArgument("power_phi needs p >= 1");
  if (p == 1.0) return piecewise_linear_phi({0.0}, {-1.0, 1.0});
  if (p == 2.0) {
    ConvexScalar sq = square_phi();
    return ConvexScalar("power_2", [sq](double x) { return sq(x); },
                        [sq](double x) { return sq.subgradient(x); }, true);
  }
  return ConvexScalar(
      "power_" + fmt_param(p), [p](double x) { return std::pow(std::abs(x), p); },
      [p](double x) {
        if (x == 0.0) return 0.0;
        return p * std::pow(std::abs(x), p - 1.0) * (x > 0 ? 1.0 : -1.0);
      },
      true);
}

ConvexScalar arclength_phi() {
  return ConvexScalar(
      "arclength", [](double x) { return std::hypot(1.0, x); },
      [](double x) { return x / std::hypot(1.0, x); }, true);
}

ConvexScalar huber_phi(double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("huber_phi needs delta > 0");
  return ConvexScalar(
      "softabs_" + fmt_param(delta),
      [delta](double x) {
        const double a = std::abs(x);
        return a <= delta ? x * x / (2.0 * delta) : a - 0.5 * delta;
      },
      [delta](double x) { return std::clamp(x / delta, -1.0, 1.0); }, true);
}

ConvexScalar exp_phi(double shift, double scale) {
  if (!(scale > 0.0)) throw InvalidArgument("exp_phi needs scale > 0");
  return ConvexScalar(
      "exp_clip", [shift, scale](double x) { return std::exp((x - shift) / scale); },
      [shift, scale](double x) { return std::exp((x - shift) / scale) / scale; }, true);
}

ConvexScalar piecewise_linear_phi(std::vector<double> knots, std::vector<double> slopes,
                                  double value_at_first_knot) {
  if (knots.empty() || slopes.size() != knots.size() + 1)
    throw InvalidArgument("piecewise_linear_phi: need k knots and k+1 slopes");
  for (std::size_t i = 1; i < knots.size(); ++i)
    if (!(knots[i] > knots[i - 1])) throw InvalidArgument("piecewise_linear_phi: knots must increase");
  for (std::size_t i = 1; i < slopes.size(); ++i)
    if (!(slopes[i] > slopes[i - 1]))
      throw InvalidArgument("piecewise_linear_phi: slopes must increase");

  // Values at the knots, for evaluation.
  std::vector<double> at(knots.size());
  at[0] = value_at_first_knot;
  for (std::size_t i = 1; i < knots.size(); ++i)
    at[i] = at[i - 1] + slopes[i] * (knots[i] - knots[i - 1]);

  auto data = std::make_shared<const std::tuple<std::vector<double>, std::vector<double>,
                                                std::vector<double>>>(knots, slopes, at);

  // Segment s covers (knots[s-1], knots[s]) with slope slopes[s].
  auto value = [data](double x) {
    const auto& [k, s, v] = *data;
    const std::size_t i = std::upper_bound(k.begin(), k.end(), x) - k.begin();
    if (i == 0) return v[0] + s[0] * (x - k[0]);
    return v[i - 1] + s[i] * (x - k[i - 1]);
  };
  auto sub = [data](double x) {
    const auto& [k, s, v] = *data;
    const std::size_t i = std::upper_bound(k.begin(), k.end(), x) - k.begin();
    return s[i];
  };
  auto prox = [data](double x, double mu) {
    const auto& [k, s, v] = *data;
    for (std::size_t i = 0; i <= k.size(); ++i) {
      const double y = x - mu * s[i];
      const bool above = i == 0 || y > k[i - 1];
      const bool below = i == k.size() || y < k[i];
      if (above && below) return y;
      // Kink at k[i]: x - k[i] in mu * [s[i], s[i+1]].
      if (i < k.size() && x - k[i] >= mu * s[i] && x - k[i] <= mu * s[i + 1]) return k[i];
    }
    return k.back();
  };

  std::string name = "piecewise_linear";
  if (knots.size() == 1 && knots[0] == 0.0 && slopes[0] == -1.0 && slopes[1] == 1.0 &&
      value_at_first_knot == 0.0)
    name = "power_1";
  return ConvexScalar(std::move(name), value, sub, false, prox);
}

}  // namespace tvg
