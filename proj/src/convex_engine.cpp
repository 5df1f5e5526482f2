#include "tvgraph/convex_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace tvg {

// ── Flow sets ───────────────────────────────────────────────────────────────

BoxSpec BoxSpec::uniform(std::size_t edges, double radius) {
  if (!(radius >= 0.0)) throw InvalidArgument("box radius must be nonnegative");
  return BoxSpec{std::vector<double>(edges, -radius), std::vector<double>(edges, radius)};
}

BoxSpec BoxSpec::for_pattern(const SignPattern& pattern, double radius) {
  BoxSpec box = uniform(pattern.labels.size(), radius);
  for (std::size_t e = 0; e < pattern.labels.size(); ++e) {
    if (pattern.labels[e] != 0) box.lower[e] = box.upper[e] = -radius * pattern.labels[e];
  }
  return box;
}

void BoxSpec::validate() const {
  if (lower.size() != upper.size()) throw InvalidArgument("box bound lengths differ");
  for (std::size_t e = 0; e < lower.size(); ++e) {
    if (!std::isfinite(lower[e]) || !std::isfinite(upper[e]))
      throw InvalidArgument("box bounds must be finite");
    if (lower[e] > upper[e]) throw InvalidArgument("box lower bound exceeds upper bound");
  }
}

void BoxSpec::project(std::span<double> h) const {
  for (std::size_t e = 0; e < h.size(); ++e) h[e] = std::clamp(h[e], lower[e], upper[e]);
}

bool BoxSpec::contains(std::span<const double> h, double slack) const {
  if (h.size() != lower.size()) return false;
  for (std::size_t e = 0; e < h.size(); ++e)
    if (h[e] < lower[e] - slack || h[e] > upper[e] + slack) return false;
  return true;
}

std::size_t GroupedBall::edge_count() const {
  std::size_t n = 0;
  for (const auto& grp : groups) n += grp.size();
  return n;
}

void GroupedBall::validate(std::size_t edges) const {
  if (!(radius >= 0.0)) throw InvalidArgument("grouped ball radius must be nonnegative");
  std::vector<int> seen(edges, 0);
  for (const auto& grp : groups)
    for (std::size_t e : grp) {
      if (e >= edges) throw InvalidArgument("grouped ball refers to a missing edge");
      ++seen[e];
    }
  for (int c : seen)
    if (c != 1) throw InvalidArgument("every edge must belong to exactly one group");
}

void GroupedBall::project(std::span<double> h) const {
  for (const auto& grp : groups) {
    double n2 = 0.0;
    for (std::size_t e : grp) n2 += h[e] * h[e];
    const double n = std::sqrt(n2);
    if (n > radius) {
      const double s = radius / n;
      for (std::size_t e : grp) h[e] *= s;
    }
  }
}

double GroupedBall::gauge(std::span<const double> h) const {
  double m = 0.0;
  for (const auto& grp : groups) {
    double n2 = 0.0;
    for (std::size_t e : grp) n2 += h[e] * h[e];
    m = std::max(m, std::sqrt(n2));
  }
  return m;
}

bool GroupedBall::contains(std::span<const double> h, double slack) const {
  return gauge(h) <= radius + slack;
}

namespace {

void project_into(const FlowSet& set, std::span<double> h) {
  std::visit([&](const auto& s) { s.project(h); }, set);
}

void validate_set(const FlowSet& set, std::size_t edges) {
  if (const auto* box = std::get_if<BoxSpec>(&set)) {
    box->validate();
    if (box->size() != edges) throw InvalidArgument("box length does not match edge count");
  } else {
    std::get<GroupedBall>(set).validate(edges);
  }
}

// Residual target - div h.
VertexField residual(const OrientedGraph& g, const VertexField& target, const EdgeField& h) {
  VertexField r = target;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    r[ed.head] -= h[e];
    r[ed.tail] += h[e];
  }
  return r;
}

// Gradient of 1/2 |target - div h|^2 given the residual r: -(r(head) - r(tail)).
void quadratic_gradient(const OrientedGraph& g, const VertexField& r, EdgeField& grad) {
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    grad[e] = r[ed.tail] - r[ed.head];
  }
}

double projected_gradient_norm(const FlowSet& set, const EdgeField& h, const EdgeField& grad) {
  EdgeField step = h;
  for (std::size_t e = 0; e < h.size(); ++e) step[e] -= grad[e];
  project_into(set, step.span());
  double s = 0.0;
  for (std::size_t e = 0; e < h.size(); ++e) s += (h[e] - step[e]) * (h[e] - step[e]);
  return std::sqrt(s);
}

// Bounded-variable least squares started from a feasible point. Returns
// true when the KKT conditions hold to `eps`; h is then the exact solution.
bool active_set_finish(const OrientedGraph& g, const VertexField& target, const BoxSpec& box,
                       EdgeField& h, double eps) {
  enum class State { Free, Lower, Upper, Fixed };
  const std::size_t m = g.edge_count();
  const std::size_t n = g.vertex_count();
  std::vector<State> state(m, State::Free);
  for (std::size_t e = 0; e < m; ++e) {
    const double width = box.upper[e] - box.lower[e];
    const double near = 1e-7 * std::max(1.0, width);
    if (width == 0.0) {
      state[e] = State::Fixed;
      h[e] = box.lower[e];
    } else if (h[e] - box.lower[e] <= near) {
      state[e] = State::Lower;
      h[e] = box.lower[e];
    } else if (box.upper[e] - h[e] <= near) {
      state[e] = State::Upper;
      h[e] = box.upper[e];
    }
  }

  EdgeField grad(m);
  const std::size_t max_rounds = 4 * m + 20;
  for (std::size_t round = 0; round < max_rounds; ++round) {
    std::vector<std::size_t> free;
    for (std::size_t e = 0; e < m; ++e)
      if (state[e] == State::Free) free.push_back(e);

    Eigen::VectorXd x(free.size());
    if (!free.empty()) {
      EdgeField pinned = h;
      for (std::size_t e : free) pinned[e] = 0.0;
      const VertexField rhs = residual(g, target, pinned);
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                static_cast<Eigen::Index>(free.size()));
      for (std::size_t k = 0; k < free.size(); ++k) {
        const Edge& ed = g.edge(free[k]);
        a(static_cast<Eigen::Index>(ed.head), static_cast<Eigen::Index>(k)) += 1.0;
        a(static_cast<Eigen::Index>(ed.tail), static_cast<Eigen::Index>(k)) -= 1.0;
      }
      Eigen::VectorXd b(static_cast<Eigen::Index>(n));
      for (std::size_t v = 0; v < n; ++v) b(static_cast<Eigen::Index>(v)) = rhs[v];
      x = a.completeOrthogonalDecomposition().solve(b);
    }

    // Step from the current free values toward x, stopping at the first bound.
    double step = 1.0;
    std::size_t blocking = m;
    for (std::size_t k = 0; k < free.size(); ++k) {
      const std::size_t e = free[k];
      const double xe = x(static_cast<Eigen::Index>(k));
      if (xe < box.lower[e] || xe > box.upper[e]) {
        const double bound = xe < box.lower[e] ? box.lower[e] : box.upper[e];
        const double denom = xe - h[e];
        const double s = denom == 0.0 ? 0.0 : std::clamp((bound - h[e]) / denom, 0.0, 1.0);
        if (s < step) {
          step = s;
          blocking = e;
        }
      }
    }
    for (std::size_t k = 0; k < free.size(); ++k) {
      const std::size_t e = free[k];
      h[e] = std::clamp(h[e] + step * (x(static_cast<Eigen::Index>(k)) - h[e]), box.lower[e],
                        box.upper[e]);
    }
    if (blocking < m) {
      const bool at_lower = h[blocking] - box.lower[blocking] <= box.upper[blocking] - h[blocking];
      state[blocking] = at_lower ? State::Lower : State::Upper;
      h[blocking] = at_lower ? box.lower[blocking] : box.upper[blocking];
      continue;
    }

    quadratic_gradient(g, residual(g, target, h), grad);
    std::size_t worst = m;
    double worst_violation = eps;
    for (std::size_t e = 0; e < m; ++e) {
      double violation = 0.0;
      if (state[e] == State::Lower) violation = -grad[e];
      if (state[e] == State::Upper) violation = grad[e];
      if (violation > worst_violation) {
        worst_violation = violation;
        worst = e;
      }
    }
    if (worst == m) return true;
    state[worst] = State::Free;
  }
  return false;
}

}  // namespace

// ── Projection ──────────────────────────────────────────────────────────────

FlowSolution project_onto_div_set(const OrientedGraph& g, const VertexField& target,
                                  const FlowSet& set, const Tolerances& tol,
                                  const EdgeField* warm_start,
                                  const ProjectionOptions& options) {
  require_size(g, target);
  tol.validate();
  validate_set(set, g.edge_count());

  const std::size_t m = g.edge_count();
  const double scale = std::max(1.0, norm_inf(target.span()));
  const double lipschitz = 2.0 * static_cast<double>(std::max<std::size_t>(g.max_degree(), 1));
  const BoxSpec* box = std::get_if<BoxSpec>(&set);

  EdgeField x(m);
  if (warm_start) {
    require_size(g, *warm_start);
    x = *warm_start;
  }
  project_into(set, x.span());

  auto objective = [&](const VertexField& r) { return 0.5 * dot(r.span(), r.span()); };

  EdgeField y = x, x_new(m), grad(m);
  VertexField rx = residual(g, target, x);
  double fx = objective(rx);
  double t = 1.0;
  SolveReport report;
  std::size_t next_polish = 20;

  auto finish = [&](EdgeField flow, std::size_t iterations, bool polished) {
    const VertexField r = residual(g, target, flow);
    quadratic_gradient(g, r, grad);
    report.iterations = iterations;
    report.objective = objective(r);
    report.optimality = projected_gradient_norm(set, flow, grad) / scale;
    report.converged = report.optimality <= tol.solve_tol;
    report.polished = polished;
    return FlowSolution{std::move(flow), report};
  };

  if (m == 0) return finish(x, 0, false);

  for (std::size_t k = 1; k <= options.max_iterations; ++k) {
    quadratic_gradient(g, residual(g, target, y), grad);
    for (std::size_t e = 0; e < m; ++e) x_new[e] = y[e] - grad[e] / lipschitz;
    project_into(set, x_new.span());
    const VertexField r_new = residual(g, target, x_new);
    const double f_new = objective(r_new);

    if (f_new > fx && t > 1.0) {
      // Restart: drop momentum and retake the step from x.
      t = 1.0;
      y = x;
      continue;
    }
    const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta = (t - 1.0) / t_new;
    for (std::size_t e = 0; e < m; ++e) y[e] = x_new[e] + beta * (x_new[e] - x[e]);
    std::swap(x, x_new);
    fx = f_new;
    t = t_new;

    if (box && options.polish && k >= next_polish) {
      next_polish *= 2;
      EdgeField candidate = x;
      if (active_set_finish(g, target, *box, candidate, 1e-11 * scale)) {
        FlowSolution polished = finish(std::move(candidate), k, true);
        if (polished.report.converged) return polished;
      }
    }
    if (k % 16 == 0) {
      quadratic_gradient(g, residual(g, target, x), grad);
      if (projected_gradient_norm(set, x, grad) / scale <= tol.solve_tol) return finish(x, k, false);
    }
  }
  return finish(x, options.max_iterations, false);
}

FlowSolution project_onto_div_box(const OrientedGraph& g, const VertexField& target,
                                  const BoxSpec& box, const Tolerances& tol,
                                  const EdgeField* warm_start, const ProjectionOptions& options) {
  return project_onto_div_set(g, target, FlowSet{box}, tol, warm_start, options);
}

FlowSolution min_norm_divergence(const OrientedGraph& g, const BoxSpec& box,
                                 const Tolerances& tol, const EdgeField* warm_start) {
  return project_onto_div_box(g, VertexField(g.vertex_count()), box, tol, warm_start);
}

// ── Separable convex objectives ─────────────────────────────────────────────

double separable_objective(const ConvexScalar& phi, const VertexField& u) {
  double s = 0.0;
  for (double x : u) s += phi(x);
  return s;
}

SeparableSolution min_separable_convex_over_polytope(const OrientedGraph& g,
                                                     const VertexField& base, const FlowSet& set,
                                                     const ConvexScalar& phi,
                                                     const Tolerances& tol,
                                                     const SeparableOptions& options) {
  require_size(g, base);
  tol.validate();
  validate_set(set, g.edge_count());
  const std::size_t m = g.edge_count();
  const std::size_t n = g.vertex_count();

  auto field_at = [&](const EdgeField& h) { return residual(g, base, h); };

  EdgeField x(m);
  project_into(set, x.span());
  VertexField best_u = field_at(x);
  EdgeField best_h = x;
  double best = separable_objective(phi, best_u);

  SeparableSolution out;
  if (m == 0) {
    out.u = best_u;
    out.flow = best_h;
    out.report = SolveReport{0, best, 0.0, true, false};
    return out;
  }

  const double data_scale = 1.0 + field_range(base.span()) + norm_inf(base.span());
  std::vector<double> mus;
  if (phi.smooth()) {
    mus.push_back(0.0);
  } else {
    for (double mu = 1e-2 * data_scale; mu >= 1e-11 * data_scale; mu /= 10.0) mus.push_back(mu);
  }

  const double degree_bound = 2.0 * static_cast<double>(std::max<std::size_t>(g.max_degree(), 1));
  double lipschitz = degree_bound;
  std::size_t iterations = 0;
  double last_mapping = 0.0;
  bool budget_left = true;

  VertexField dphi(n);
  EdgeField grad(m), y(m), x_new(m);

  for (double mu : mus) {
    auto smooth_obj = [&](const VertexField& u) {
      double s = 0.0;
      for (double v : u) s += phi.smoothed_value(v, mu);
      return s;
    };
    auto smooth_grad = [&](const VertexField& u, EdgeField& out_grad) {
      for (std::size_t v = 0; v < n; ++v) dphi[v] = phi.smoothed_derivative(u[v], mu);
      // d/dH sum phi(base - div H) = -(dphi(head) - dphi(tail)).
      for (std::size_t e = 0; e < m; ++e) {
        const Edge& ed = g.edge(e);
        out_grad[e] = dphi[ed.tail] - dphi[ed.head];
      }
    };
    if (mu > 0.0) lipschitz = std::max(lipschitz, degree_bound / mu * 1e-3);

    x = best_h;
    y = x;
    double t = 1.0;
    double fx = smooth_obj(field_at(x));
    double stage_best = fx;
    std::size_t stall = 0;

    while (iterations < options.max_iterations) {
      ++iterations;
      const VertexField uy = field_at(y);
      const double fy = smooth_obj(uy);
      smooth_grad(uy, grad);

      double f_new = 0.0;
      for (int bt = 0; bt < 60; ++bt) {
        for (std::size_t e = 0; e < m; ++e) x_new[e] = y[e] - grad[e] / lipschitz;
        project_into(set, x_new.span());
        f_new = smooth_obj(field_at(x_new));
        double lin = 0.0, quad = 0.0;
        for (std::size_t e = 0; e < m; ++e) {
          const double d = x_new[e] - y[e];
          lin += grad[e] * d;
          quad += d * d;
        }
        if (f_new <= fy + lin + 0.5 * lipschitz * quad + 1e-14 * std::abs(fy)) {
          last_mapping = lipschitz * std::sqrt(quad);
          break;
        }
        lipschitz *= 2.0;
      }

      if (f_new > fx && t > 1.0) {
        t = 1.0;
        y = x;
        continue;
      }
      const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      const double beta = (t - 1.0) / t_new;
      for (std::size_t e = 0; e < m; ++e) y[e] = x_new[e] + beta * (x_new[e] - x[e]);
      std::swap(x, x_new);
      fx = f_new;
      t = t_new;
      lipschitz = std::max(degree_bound * 1e-6, lipschitz * 0.98);

      const VertexField ux = field_at(x);
      const double true_obj = separable_objective(phi, ux);
      if (true_obj < best) {
        best = true_obj;
        best_u = ux;
        best_h = x;
      }
      if (fx < stage_best - options.objective_tol * 1e-3 * (1.0 + std::abs(stage_best))) {
        stage_best = fx;
        stall = 0;
      } else if (++stall > 300) {
        break;
      }
    }
    if (iterations >= options.max_iterations) {
      budget_left = false;
      break;
    }
  }

  out.u = best_u;
  out.flow = best_h;
  out.report.iterations = iterations;
  out.report.objective = best;
  out.report.optimality = last_mapping / std::max(1.0, std::abs(best));
  out.report.converged = budget_left;
  return out;
}

}  // namespace tvg
