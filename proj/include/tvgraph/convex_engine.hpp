/**
 * @file convex_engine.hpp
 * @brief First-order solvers over images of flow sets under the divergence.
 *
 * Every problem here has the form "choose an edge flow H in a convex set K,
 * look at the vertex field base - div H". K is either a box (per-edge
 * interval, which covers B_alpha and the pinned sets B_{1,u}) or the grouped
 * Euclidean ball used by isotropic total variation on Cartesian graphs.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "tvgraph/convex_scalar.hpp"
#include "tvgraph/graph.hpp"

namespace tvg {

struct BoxSpec {
  std::vector<double> lower;
  std::vector<double> upper;

  /// [-radius, radius] on every edge.
  static BoxSpec uniform(std::size_t edges, double radius);
  /// The box encoding radius * B_{1,u}: pinned to -radius * label on
  /// nonflat edges, free in [-radius, radius] on flat ones.
  static BoxSpec for_pattern(const SignPattern& pattern, double radius = 1.0);

  std::size_t size() const { return lower.size(); }
  void validate() const;
  void project(std::span<double> h) const;
  bool contains(std::span<const double> h, double slack = 0.0) const;
};

/// Flows whose per-group Euclidean norm is at most `radius`. Every edge
/// belongs to exactly one group of one or two edges.
struct GroupedBall {
  double radius = 1.0;
  std::vector<std::vector<std::size_t>> groups;

  std::size_t edge_count() const;
  void validate(std::size_t edges) const;
  void project(std::span<double> h) const;
  bool contains(std::span<const double> h, double slack = 0.0) const;
  /// Largest group norm of h (the radius needed to contain h).
  double gauge(std::span<const double> h) const;
};

using FlowSet = std::variant<BoxSpec, GroupedBall>;

struct SolveReport {
  std::size_t iterations = 0;
  double objective = 0.0;
  /// Projected-gradient norm, relative to max(1, |target|_inf).
  double optimality = 0.0;
  bool converged = false;
  /// True when an exact active-set solve finished the iteration.
  bool polished = false;
};

struct FlowSolution {
  EdgeField flow;
  SolveReport report;
};

struct ProjectionOptions {
  std::size_t max_iterations = 1'000'000;
  /// Attempt an exact active-set finish on box problems.
  bool polish = true;
};

/// Minimizes |target - div H|_2 over H in the set. The result is the
/// Euclidean projection of target onto {div H : H in set}.
FlowSolution project_onto_div_set(const OrientedGraph& g, const VertexField& target,
                                  const FlowSet& set, const Tolerances& tol,
                                  const EdgeField* warm_start = nullptr,
                                  const ProjectionOptions& options = {});

FlowSolution project_onto_div_box(const OrientedGraph& g, const VertexField& target,
                                  const BoxSpec& box, const Tolerances& tol,
                                  const EdgeField* warm_start = nullptr,
                                  const ProjectionOptions& options = {});

/// Least-norm element of {div H : H in box}.
FlowSolution min_norm_divergence(const OrientedGraph& g, const BoxSpec& box,
                                 const Tolerances& tol, const EdgeField* warm_start = nullptr);

struct SeparableOptions {
  std::size_t max_iterations = 400'000;
  /// Relative objective accuracy aimed for.
  double objective_tol = 1e-9;
};

struct SeparableSolution {
  VertexField u;
  EdgeField flow;
  SolveReport report;
};

/// Minimizes sum_v phi(u(v)) over u = base - div H with H in the set, by
/// accelerated projected gradient with backtracking. Nonsmooth phi is
/// replaced by its Moreau envelope with a decreasing smoothing parameter;
/// the reported objective is the true sum of phi at the best iterate.
SeparableSolution min_separable_convex_over_polytope(const OrientedGraph& g,
                                                     const VertexField& base, const FlowSet& set,
                                                     const ConvexScalar& phi,
                                                     const Tolerances& tol,
                                                     const SeparableOptions& options = {});

double separable_objective(const ConvexScalar& phi, const VertexField& u);

}  // namespace tvg
