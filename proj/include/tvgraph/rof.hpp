/**
 * @file rof.hpp
 * @brief ROF regularization on graphs: single solves, the solution path in
 *        alpha, and the isotropic variant on Cartesian graphs.
 *
 * The minimizer of 1/2 |f - u|^2 + alpha J(u) is u = f - div H where div H is
 * the projection of f onto div B_alpha. The dual flow reported is
 * F_alpha = -H, so that u_alpha = f + div F_alpha with |F_alpha|_inf <= alpha.
 */
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tvgraph/convex_engine.hpp"
#include "tvgraph/graph.hpp"

namespace tvg {

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, SolveReport report)
      : std::runtime_error(what), report_(report) {}
  const SolveReport& report() const { return report_; }

 private:
  SolveReport report_;
};

class PathError : public std::runtime_error {
 public:
  PathError(const std::string& what, double lo, double hi)
      : std::runtime_error(what), lo_(lo), hi_(hi) {}
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double lo_, hi_;
};

struct RofSolution {
  double alpha = 0.0;
  VertexField u;
  EdgeField dual_flow;
  SolveReport report;
};

struct AffineSegment {
  double start = 0.0;
  VertexField value;  ///< value at `start`
  VertexField slope;
};

/// Continuous piecewise-affine vertex field over [0, inf). Segment k covers
/// [breakpoints[k], breakpoints[k+1]); the last one is constant and equal to
/// the terminal value.
class PiecewiseAffinePath {
 public:
  PiecewiseAffinePath() = default;
  PiecewiseAffinePath(std::vector<AffineSegment> segments, VertexField terminal);

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  /// Breakpoints other than the leading zero.
  std::vector<double> interior_breakpoints() const;
  const std::vector<AffineSegment>& segments() const { return segments_; }
  const VertexField& terminal_value() const { return terminal_; }
  /// Parameter from which the path is constant.
  double last_breakpoint() const { return breakpoints_.back(); }

  std::size_t segment_index(double s) const;
  VertexField evaluate(double s) const;
  /// Largest jump between adjacent segments at the breakpoints.
  double continuity_defect() const;

 private:
  std::vector<double> breakpoints_;
  std::vector<AffineSegment> segments_;
  VertexField terminal_;
};

RofSolution rof_solve(const OrientedGraph& g, const VertexField& f, double alpha,
                      const Tolerances& tol, const EdgeField* warm_start = nullptr);

PiecewiseAffinePath rof_path(const OrientedGraph& g, const VertexField& f, const Tolerances& tol);

/// B^iso_radius of a Cartesian graph as grouped edge flows.
GroupedBall isotropic_ball(const OrientedGraph& g, double radius);
double isotropic_total_variation(const OrientedGraph& g, const VertexField& u);

/// Minimizer of 1/2 |f - u|^2 + alpha J_iso(u). Requires a Cartesian tag.
RofSolution isotropic_rof_solve(const OrientedGraph& g, const VertexField& f, double alpha,
                                const Tolerances& tol);

}  // namespace tvg
