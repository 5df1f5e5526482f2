#include "tvgraph/subdifferential.hpp"

#include <algorithm>

namespace tvg {

BoxSpec subdifferential_box(const OrientedGraph& g, const VertexField& u, const Tolerances& tol) {
  return BoxSpec::for_pattern(sign_pattern(g, u, tol), 1.0);
}

MembershipResult subdifferential_membership(const OrientedGraph& g, const VertexField& u,
                                            const VertexField& candidate, const Tolerances& tol) {
  require_size(g, u);
  require_size(g, candidate);
  FlowSolution sol = project_onto_div_box(g, candidate, subdifferential_box(g, u, tol), tol);

  MembershipResult out;
  out.report = sol.report;
  out.residual = norm2((divergence(g, sol.flow) - candidate).span());
  out.witness = std::move(sol.flow);
  const double threshold = 10.0 * tol.solve_tol * std::max(1.0, norm_inf(candidate.span()));
  if (out.residual <= threshold) {
    out.verdict = Membership::Member;
  } else if (!out.report.converged) {
    out.verdict = Membership::SolverFailure;
  } else {
    out.verdict = Membership::NotMember;
  }
  return out;
}

}  // namespace tvg
