/**
 * @file flow.hpp
 * @brief Total variation flow u' in -dJ(u), u(0) = f, integrated exactly.
 *
 * The right derivative of the flow is minus the minimal section of the
 * subdifferential, which is constant between the finitely many times at
 * which an edge difference reaches zero or a flat edge splits. The
 * integrator walks from event to event in closed form.
 */
#pragma once

#include <limits>
#include <string>
#include <vector>

#include "tvgraph/convex_engine.hpp"
#include "tvgraph/graph.hpp"
#include "tvgraph/rof.hpp"

namespace tvg {

struct MinimalSection {
  /// Least-norm element of dJ(u).
  VertexField value;
  /// A flow in B_{1,u} with divergence `value`.
  EdgeField witness;
  SolveReport report;
};

MinimalSection minimal_section(const OrientedGraph& g, const VertexField& u, const Tolerances& tol);

struct FlowTrajectory {
  PiecewiseAffinePath path;
  /// Right derivative on each segment (the last one is zero).
  std::vector<VertexField> directions;
  /// Per-segment subgradient flow in B_{1,u}; div witnesses[k] = -directions[k].
  std::vector<EdgeField> witnesses;
  /// F at each breakpoint, with u(t) = f + div F(t).
  std::vector<EdgeField> antiderivative;
  /// Notes about pattern refinement fallbacks, if any occurred.
  std::vector<std::string> diagnostics;

  VertexField at(double t) const { return path.evaluate(t); }
  EdgeField antiderivative_at(double t) const;
  /// Time from which the flow is stationary.
  double stationary_time() const { return path.last_breakpoint(); }
};

FlowTrajectory flow_solve(const OrientedGraph& g, const VertexField& f, const Tolerances& tol);

/// Iterated proximal steps u <- rof_solve(u, h'); h' = t_end / ceil(t_end / h).
VertexField flow_backward_euler(const OrientedGraph& g, const VertexField& f, double t_end,
                                double h, const Tolerances& tol);

}  // namespace tvg
