#include "tvgraph/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tvgraph/subdifferential.hpp"

namespace tvg {

MinimalSection minimal_section(const OrientedGraph& g, const VertexField& u, const Tolerances& tol) {
  require_size(g, u);
  FlowSolution sol = min_norm_divergence(g, subdifferential_box(g, u, tol), tol);
  if (!sol.report.converged) throw NonConvergence("minimal section did not converge", sol.report);
  MinimalSection out;
  out.value = divergence(g, sol.flow);
  out.witness = std::move(sol.flow);
  out.report = sol.report;
  return out;
}

EdgeField FlowTrajectory::antiderivative_at(double t) const {
  const std::size_t k = path.segment_index(t);
  const double dt = t - path.breakpoints()[k];
  return antiderivative[k] - dt * witnesses[k];
}

namespace {

// Sets every connected group of flat edges to its average value.
void snap_flat_groups(const OrientedGraph& g, const std::vector<std::int8_t>& labels,
                      VertexField& u) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t e = 0; e < labels.size(); ++e)
    if (labels[e] == 0) parent[find(g.edge(e).tail)] = find(g.edge(e).head);
  std::vector<double> total(n, 0.0);
  std::vector<std::size_t> count(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    total[find(v)] += u[v];
    ++count[find(v)];
  }
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t r = find(v);
    if (count[r] > 1) u[v] = total[r] / static_cast<double>(count[r]);
  }
}

BoxSpec box_from_labels(const std::vector<std::int8_t>& labels) {
  return BoxSpec::for_pattern(SignPattern{labels}, 1.0);
}

}  // namespace

FlowTrajectory flow_solve(const OrientedGraph& g, const VertexField& f, const Tolerances& tol) {
  require_size(g, f);
  tol.validate();
  const std::size_t m = g.edge_count();
  const double range = field_range(f.span());
  const VertexField zero(g.vertex_count());

  FlowTrajectory traj;
  if (range == 0.0) {
    traj.path = PiecewiseAffinePath({AffineSegment{0.0, f, zero}}, f);
    traj.directions.push_back(zero);
    traj.witnesses.emplace_back(m);
    traj.antiderivative.emplace_back(m);
    return traj;
  }

  Tolerances t = tol;
  if (t.flat_scale == 0.0) t.flat_scale = range;
  const double flat_thr = t.flat_tol * t.flat_scale;

  std::vector<std::int8_t> labels = sign_pattern(g, f, t).labels;
  VertexField u = f;
  EdgeField anti(m);
  double time = 0.0;
  std::vector<AffineSegment> segments;
  const std::size_t max_segments = 100 * (m + 1) + 1000;

  auto solve_direction = [&](const EdgeField* warm) {
    FlowSolution sol = min_norm_divergence(g, box_from_labels(labels), t, warm);
    if (!sol.report.converged)
      throw NonConvergence("minimal section did not converge at t = " + std::to_string(time),
                           sol.report);
    return sol;
  };

  while (true) {
    if (segments.size() >= max_segments)
      throw NonConvergence("flow did not become stationary", SolveReport{});
    snap_flat_groups(g, labels, u);

    // Direction with the pattern refined until flat edges that split are pinned.
    FlowSolution sol = solve_direction(nullptr);
    VertexField d = -divergence(g, sol.flow);
    bool fixed_point = false;
    for (std::size_t round = 0; round <= m; ++round) {
      const double split_tol = 1e-9 * std::max(1.0, norm_inf(d.span()));
      bool split = false;
      for (std::size_t e = 0; e < m; ++e) {
        if (labels[e] != 0) continue;
        const double rate = d[g.edge(e).tail] - d[g.edge(e).head];
        if (std::abs(rate) > split_tol) {
          labels[e] = rate > 0 ? 1 : -1;
          split = true;
        }
      }
      if (!split) {
        fixed_point = true;
        break;
      }
      const EdgeField previous = sol.flow;
      sol = solve_direction(&previous);
      const VertexField refined = -divergence(g, sol.flow);
      if (max_abs_diff(refined.span(), d.span()) > 1e-7 * std::max(1.0, norm_inf(d.span())))
        traj.diagnostics.push_back("direction changed under pattern refinement at t = " +
                                   std::to_string(time));
      d = refined;
    }
    if (!fixed_point) {
      traj.diagnostics.push_back("pattern refinement did not settle at t = " +
                                 std::to_string(time) + "; stepping by event_tol");
    }

    if (norm_inf(d.span()) <= 1e-10) {
      segments.push_back(AffineSegment{time, u, zero});
      traj.directions.push_back(zero);
      traj.witnesses.push_back(sol.flow);
      traj.antiderivative.push_back(anti);
      break;
    }

    // Earliest time at which a nonflat edge difference reaches zero.
    double tau = std::numeric_limits<double>::infinity();
    std::vector<double> crossing(m, std::numeric_limits<double>::infinity());
    for (std::size_t e = 0; e < m; ++e) {
      if (labels[e] == 0) continue;
      const Edge& ed = g.edge(e);
      const double diff = u[ed.tail] - u[ed.head];
      const double rate = d[ed.tail] - d[ed.head];
      if (diff * rate < 0.0) {
        crossing[e] = -diff / rate;
        tau = std::min(tau, crossing[e]);
      }
    }
    if (!fixed_point) tau = std::min(tau, t.event_tol);
    if (!std::isfinite(tau))
      throw NonConvergence("flow direction is nonzero but no event ahead", sol.report);

    segments.push_back(AffineSegment{time, u, d});
    traj.directions.push_back(d);
    traj.witnesses.push_back(sol.flow);
    traj.antiderivative.push_back(anti);

    for (std::size_t v = 0; v < u.size(); ++v) u[v] += tau * d[v];
    for (std::size_t e = 0; e < m; ++e) anti[e] -= tau * sol.flow[e];
    time += tau;

    for (std::size_t e = 0; e < m; ++e) {
      if (labels[e] == 0) continue;
      const Edge& ed = g.edge(e);
      const double diff = u[ed.tail] - u[ed.head];
      const double rate = d[ed.tail] - d[ed.head];
      const bool closing = diff * rate < 0.0 && std::abs(diff) <= flat_thr;
      if (crossing[e] <= tau * (1.0 + 1e-12) || closing) labels[e] = 0;
    }
  }

  traj.path = PiecewiseAffinePath(std::move(segments), u);
  return traj;
}

VertexField flow_backward_euler(const OrientedGraph& g, const VertexField& f, double t_end,
                                double h, const Tolerances& tol) {
  require_size(g, f);
  if (!(h > 0.0)) throw InvalidArgument("backward Euler step must be positive");
  if (!(t_end >= 0.0)) throw InvalidArgument("t_end must be nonnegative");
  if (t_end == 0.0) return f;
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / h - 1e-9));
  const double step = t_end / static_cast<double>(steps);
  VertexField u = f;
  EdgeField warm(g.edge_count());
  for (std::size_t k = 0; k < steps; ++k) {
    RofSolution s = rof_solve(g, u, step, tol, &warm);
    warm = -s.dual_flow;
    u = std::move(s.u);
  }
  return u;
}

}  // namespace tvg
