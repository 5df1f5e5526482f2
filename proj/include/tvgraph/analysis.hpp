/**
 * @file analysis.hpp
 * @brief Comparing ROF and the flow: jump sets, the equivalence test, the
 *        1-D taut string, and the 3x3 counterexample harness.
 */
#pragma once

#include <span>
#include <string>
#include <vector>

#include "tvgraph/flow.hpp"
#include "tvgraph/graph.hpp"
#include "tvgraph/rof.hpp"
#include "tvgraph/subdifferential.hpp"

namespace tvg {

struct JumpSet {
  /// Sorted edge indices.
  std::vector<std::size_t> edges;

  bool contains(std::size_t e) const;
  std::size_t size() const { return edges.size(); }
  /// True when every edge of this set is in `other`.
  bool subset_of(const JumpSet& other) const;
  friend bool operator==(const JumpSet&, const JumpSet&) = default;
};

/// Edges with |u(tail) - u(head)| above tol.flat_threshold(u).
JumpSet jump_set(const OrientedGraph& g, const VertexField& u, const Tolerances& tol);

struct EquivalenceReport {
  double alpha = 0.0;
  VertexField rof;
  VertexField flow;
  double linf_distance = 0.0;
  double l2_distance = 0.0;
  /// -(1/alpha) * integral of u' over [0, alpha], summed segment by segment.
  VertexField averaged_derivative;
  /// Is the averaged derivative in dJ(u(alpha))?
  Membership membership = Membership::NotMember;
  double membership_residual = 0.0;
  /// <-u'(t), u(alpha)> = J(u(alpha)) at every segment midpoint in (0, alpha).
  bool sufficient_condition = false;
  /// alpha <= t_1, the first flow breakpoint.
  bool first_segment = false;
};

EquivalenceReport equivalence_report(const OrientedGraph& g, const VertexField& f, double alpha,
                                     const Tolerances& tol);
/// Same, reusing a trajectory already computed for f.
EquivalenceReport equivalence_report(const OrientedGraph& g, const VertexField& f, double alpha,
                                     const FlowTrajectory& trajectory, const Tolerances& tol);

struct TautTube {
  /// cumulative[k] = f_1 + ... + f_k, cumulative[0] = 0.
  std::vector<double> cumulative;
  double radius = 0.0;

  TautTube(std::span<const double> f, double alpha);
  double lower(std::size_t k) const;
  double upper(std::size_t k) const;
  std::size_t knots() const { return cumulative.size(); }
};

/// The taut string through the tube, differentiated.
std::vector<double> taut_string_1d(std::span<const double> f, double alpha);

struct HarnessCheck {
  std::string name;
  double expected = 0.0;
  double actual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct HarnessReport {
  std::vector<HarnessCheck> checks;
  bool all_pass() const;
  std::size_t failures() const;
  /// One line per check, fixed 17-digit formatting.
  std::string to_text() const;
};

/// Reproduces the closed-form ROF and flow solutions of the 3x3
/// counterexample, its breakpoints, the special-edge dual values, the
/// jump-set behaviour, and the variant datum with equal solutions.
HarnessReport counterexample_harness(const Tolerances& tol);

/// Closed forms on the counterexample graph, in its vertex order.
VertexField counterexample_rof_closed_form(double alpha);
VertexField counterexample_flow_closed_form(double t);
/// Dual value on edge (v32, v22).
double counterexample_rof_special_edge(double alpha);
double counterexample_flow_special_edge(double t);
/// Variant datum: u_alpha = u(alpha) for alpha <= 4.
VertexField counterexample_variant_closed_form(double alpha);

}  // namespace tvg
