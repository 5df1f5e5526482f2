#pragma once

#include "tvgraph/convex_engine.hpp"
#include "tvgraph/graph.hpp"

namespace tvg {

enum class Membership { Member, NotMember, SolverFailure };

struct MembershipResult {
  Membership verdict = Membership::NotMember;
  /// Flow in B_{1,u} whose divergence is closest to the candidate.
  EdgeField witness;
  /// |div witness - candidate|_2
  double residual = 0.0;
  SolveReport report;

  bool member() const { return verdict == Membership::Member; }
};

/// Decides whether `candidate` lies in the subdifferential of total
/// variation at u, i.e. in div B_{1,u}, by a bounded least-squares solve.
MembershipResult subdifferential_membership(const OrientedGraph& g, const VertexField& u,
                                            const VertexField& candidate, const Tolerances& tol);

/// The pattern box for u: the set B_{1,u}.
BoxSpec subdifferential_box(const OrientedGraph& g, const VertexField& u, const Tolerances& tol);

}  // namespace tvg
