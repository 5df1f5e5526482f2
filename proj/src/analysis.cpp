#include "tvgraph/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "tvgraph/instances.hpp"

namespace tvg {

// ── Jump sets ───────────────────────────────────────────────────────────────

bool JumpSet::contains(std::size_t e) const {
  return std::binary_search(edges.begin(), edges.end(), e);
}

bool JumpSet::subset_of(const JumpSet& other) const {
  return std::includes(other.edges.begin(), other.edges.end(), edges.begin(), edges.end());
}

JumpSet jump_set(const OrientedGraph& g, const VertexField& u, const Tolerances& tol) {
  require_size(g, u);
  const double thr = tol.flat_threshold(u.span());
  JumpSet out;
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    if (std::abs(u[g.edge(e).tail] - u[g.edge(e).head]) > thr) out.edges.push_back(e);
  return out;
}

// ── Equivalence ─────────────────────────────────────────────────────────────

EquivalenceReport equivalence_report(const OrientedGraph& g, const VertexField& f, double alpha,
                                     const Tolerances& tol) {
  return equivalence_report(g, f, alpha, flow_solve(g, f, tol), tol);
}

EquivalenceReport equivalence_report(const OrientedGraph& g, const VertexField& f, double alpha,
                                     const FlowTrajectory& trajectory, const Tolerances& tol) {
  require_size(g, f);
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be > 0");
  EquivalenceReport rep;
  rep.alpha = alpha;
  rep.rof = rof_solve(g, f, alpha, tol).u;
  rep.flow = trajectory.at(alpha);
  const VertexField diff = rep.rof - rep.flow;
  rep.linf_distance = norm_inf(diff.span());
  rep.l2_distance = norm2(diff.span());

  const auto& segs = trajectory.path.segments();
  VertexField integral(g.vertex_count());
  for (std::size_t k = 0; k < segs.size() && segs[k].start < alpha; ++k) {
    const double end = k + 1 < segs.size() ? std::min(alpha, segs[k + 1].start) : alpha;
    integral += (end - segs[k].start) * trajectory.directions[k];
  }
  rep.averaged_derivative = (-1.0 / alpha) * integral;

  const MembershipResult m = subdifferential_membership(g, rep.flow, rep.averaged_derivative, tol);
  rep.membership = m.verdict;
  rep.membership_residual = m.residual;

  const double j = total_variation(g, rep.flow);
  rep.sufficient_condition = true;
  for (std::size_t k = 0; k < segs.size() && segs[k].start < alpha; ++k) {
    const VertexField minus_rate = -trajectory.directions[k];
    const double pairing = dot(minus_rate.span(), rep.flow.span());
    if (std::abs(pairing - j) > 1e-7 * (1.0 + std::abs(j))) rep.sufficient_condition = false;
  }

  const auto inner = trajectory.path.interior_breakpoints();
  const double t1 = inner.empty() ? trajectory.stationary_time() : inner.front();
  rep.first_segment = alpha <= t1 || t1 == 0.0;
  return rep;
}

// ── Taut string ─────────────────────────────────────────────────────────────

TautTube::TautTube(std::span<const double> f, double alpha) : radius(alpha) {
  if (!(alpha >= 0.0)) throw InvalidArgument("tube radius must be nonnegative");
  cumulative.assign(f.size() + 1, 0.0);
  for (std::size_t k = 0; k < f.size(); ++k) cumulative[k + 1] = cumulative[k] + f[k];
}

double TautTube::lower(std::size_t k) const {
  return k == 0 || k + 1 == knots() ? cumulative[k] : cumulative[k] - radius;
}

double TautTube::upper(std::size_t k) const {
  return k == 0 || k + 1 == knots() ? cumulative[k] : cumulative[k] + radius;
}

std::vector<double> taut_string_1d(std::span<const double> f, double alpha) {
  if (f.empty()) throw InvalidArgument("taut string needs at least one value");
  const TautTube tube(f, alpha);
  const std::size_t n = f.size();
  std::vector<double> string(n + 1, 0.0);

  std::size_t anchor = 0;
  double anchor_y = tube.cumulative[0];
  while (anchor < n) {
    // Funnel of slopes from the anchor that stay inside the tube so far.
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    std::size_t lo_at = anchor, hi_at = anchor;
    std::size_t next = n;
    double next_y = tube.cumulative[n];
    bool bent = false;
    for (std::size_t k = anchor + 1; k <= n; ++k) {
      const double run = static_cast<double>(k - anchor);
      const double s_lo = (tube.lower(k) - anchor_y) / run;
      const double s_hi = (tube.upper(k) - anchor_y) / run;
      if (s_hi < lo) {
        // The string must bend up at the lower point that set lo.
        next = lo_at;
        next_y = tube.lower(lo_at);
        bent = true;
        break;
      }
      if (s_lo > hi) {
        next = hi_at;
        next_y = tube.upper(hi_at);
        bent = true;
        break;
      }
      if (s_lo >= lo) {
        lo = s_lo;
        lo_at = k;
      }
      if (s_hi <= hi) {
        hi = s_hi;
        hi_at = k;
      }
    }
    if (!bent) {
      next = n;
      next_y = tube.cumulative[n];
    }
    const double slope = (next_y - anchor_y) / static_cast<double>(next - anchor);
    for (std::size_t k = anchor + 1; k <= next; ++k)
      string[k] = anchor_y + slope * static_cast<double>(k - anchor);
    string[next] = next_y;
    anchor = next;
    anchor_y = next_y;
  }

  std::vector<double> u(n);
  for (std::size_t k = 0; k < n; ++k) u[k] = string[k + 1] - string[k];
  return u;
}

// ── Counterexample ──────────────────────────────────────────────────────────

// Vertex order: v12, v22, v32, v23, v21, v13, v11, v31, v33.
VertexField counterexample_rof_closed_form(double a) {
  double v22 = 0.0, v32 = 0.0;
  if (a <= 0.4) {
    v22 = 18.0 + 4.0 * a;
    v32 = 20.0 - a;
  } else if (a <= 2.0) {
    v22 = v32 = 19.0 + 1.5 * a;
  } else {
    v22 = 18.0 + 2.0 * a;
    v32 = 20.0 + a;
  }
  const double corner = 200.0 - 2.0 * a;
  return VertexField{100.0 + a, v22, v32, 100.0 - a, 100.0 + a, corner, corner, corner, 2.0 * a};
}

VertexField counterexample_flow_closed_form(double t) {
  if (t <= 0.4) return counterexample_rof_closed_form(t);
  const double corner = 200.0 - 2.0 * t;
  return VertexField{100.0 + t, 94.0 / 5.0 + 2.0 * t, 96.0 / 5.0 + t, 100.0 - t, 100.0 + t,
                     corner,    corner,               corner,          2.0 * t};
}

double counterexample_rof_special_edge(double a) {
  if (a <= 0.4) return a;
  if (a <= 2.0) return (2.0 - 3.0 * a) / 2.0;
  return -a;
}

double counterexample_flow_special_edge(double t) { return t <= 0.4 ? t : 0.8 - t; }

VertexField counterexample_variant_closed_form(double a) {
  VertexField u = counterexample_rof_closed_form(a);
  u[1] = 20.0 + 2.0 * a;
  u[2] = 20.0 + a;
  return u;
}

bool HarnessReport::all_pass() const { return failures() == 0; }

std::size_t HarnessReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const HarnessCheck& c) { return !c.pass; }));
}

std::string HarnessReport::to_text() const {
  std::string out;
  char buf[512];
  for (const HarnessCheck& c : checks) {
    std::snprintf(buf, sizeof buf, "%s %s expected=%.17g actual=%.17g tol=%.3g\n",
                  c.pass ? "PASS" : "FAIL", c.name.c_str(), c.expected, c.actual, c.tolerance);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "checks=%zu failures=%zu\n", checks.size(), failures());
  out += buf;
  return out;
}

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

}  // namespace

HarnessReport counterexample_harness(const Tolerances& tol) {
  HarnessReport rep;
  auto check = [&](std::string name, double expected, double actual, double tolerance) {
    const bool pass = std::abs(expected - actual) <= tolerance;
    rep.checks.push_back(HarnessCheck{std::move(name), expected, actual, tolerance, pass});
  };
  auto flag = [&](std::string name, bool value) {
    rep.checks.push_back(HarnessCheck{std::move(name), 1.0, value ? 1.0 : 0.0, 0.0, value});
  };

  const Instance inst = counterexample_instance();
  const OrientedGraph& g = inst.graph;
  const std::size_t special = *g.find_edge(2, 1);  // (v32, v22)
  constexpr double value_tol = 1e-6;
  constexpr double breakpoint_tol = 1e-4;

  const PiecewiseAffinePath path = rof_path(g, inst.data, tol);
  const FlowTrajectory traj = flow_solve(g, inst.data, tol);

  for (double a : {0.2, 1.0, 3.0}) {
    const RofSolution s = rof_solve(g, inst.data, a, tol);
    const VertexField expect = counterexample_rof_closed_form(a);
    const VertexField from_path = path.evaluate(a);
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      check("rof alpha=" + num(a) + " " + g.vertex_name(v), expect[v], s.u[v], value_tol);
      check("rof_path alpha=" + num(a) + " " + g.vertex_name(v), expect[v], from_path[v],
            value_tol);
    }
    check("rof alpha=" + num(a) + " F(v32,v22)", counterexample_rof_special_edge(a),
          s.dual_flow[special], value_tol);
  }
  for (double t : {0.2, 1.0, 3.0}) {
    const VertexField u = traj.at(t);
    const VertexField expect = counterexample_flow_closed_form(t);
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
      check("flow t=" + num(t) + " " + g.vertex_name(v), expect[v], u[v], value_tol);
    check("flow t=" + num(t) + " F(v32,v22)", counterexample_flow_special_edge(t),
          traj.antiderivative_at(t)[special], value_tol);
    const VertexField recon = inst.data + divergence(g, traj.antiderivative_at(t));
    check("flow t=" + num(t) + " f+divF", 0.0, max_abs_diff(recon.span(), u.span()), value_tol);
  }

  std::vector<double> rof_bps, flow_bps;
  for (double b : path.interior_breakpoints())
    if (b <= 4.0) rof_bps.push_back(b);
  for (double b : traj.path.interior_breakpoints())
    if (b <= 4.0) flow_bps.push_back(b);
  check("rof_path breakpoints in [0,4]", 2.0, static_cast<double>(rof_bps.size()), 0.0);
  check("rof_path breakpoint 1", 0.4, rof_bps.size() > 0 ? rof_bps[0] : -1.0, breakpoint_tol);
  check("rof_path breakpoint 2", 2.0, rof_bps.size() > 1 ? rof_bps[1] : -1.0, breakpoint_tol);
  check("flow breakpoints in [0,4]", 1.0, static_cast<double>(flow_bps.size()), 0.0);
  check("flow breakpoint 1", 0.4, flow_bps.empty() ? -1.0 : flow_bps[0], breakpoint_tol);

  const VertexField r1 = rof_solve(g, inst.data, 1.0, tol).u;
  const VertexField r3 = rof_solve(g, inst.data, 3.0, tol).u;
  const JumpSet j1 = jump_set(g, r1, tol), j3 = jump_set(g, r3, tol);
  check("rof jump set size alpha=1", 11.0, static_cast<double>(j1.size()), 0.0);
  check("rof jump set size alpha=3", 12.0, static_cast<double>(j3.size()), 0.0);
  flag("rof jump set alpha=1 strictly inside alpha=3", j1.subset_of(j3) && j1.size() < j3.size());
  flag("rof alpha=1 (v32,v22) flat", !j1.contains(special));
  flag("rof alpha=3 (v32,v22) reversed", (r3[2] - r3[1]) * (inst.data[2] - inst.data[1]) < 0.0);

  const JumpSet jf_before = jump_set(g, traj.at(0.2), tol);
  const JumpSet jf_at = jump_set(g, traj.at(0.4), tol);
  const JumpSet jf_after = jump_set(g, traj.at(1.0), tol);
  const VertexField u_after = traj.at(1.0);
  flag("flow t=0.2 (v32,v22) jumps", jf_before.contains(special));
  flag("flow t=0.4 (v32,v22) flat", !jf_at.contains(special));
  flag("flow t=1 (v32,v22) reversed",
       jf_after.contains(special) && (u_after[2] - u_after[1]) * (inst.data[2] - inst.data[1]) < 0.0);
  flag("flow jump set t=0.4 strictly inside t=1",
       jf_at.subset_of(jf_after) && jf_at.size() < jf_after.size());

  const VertexField diff = r1 - traj.at(1.0);
  check("nonequivalence alpha=1 linf", 0.3, norm_inf(diff.span()), value_tol);
  for (double a : {0.1, 0.2, 0.4}) {
    const VertexField d = rof_solve(g, inst.data, a, tol).u - traj.at(a);
    check("equivalence alpha=" + num(a) + " linf", 0.0, norm_inf(d.span()), value_tol);
  }

  const Instance variant = counterexample_variant_instance();
  const FlowTrajectory vtraj = flow_solve(g, variant.data, tol);
  for (double a : {0.2, 1.0, 2.0, 3.0}) {
    const VertexField expect = counterexample_variant_closed_form(a);
    const VertexField ur = rof_solve(g, variant.data, a, tol).u;
    const VertexField uf = vtraj.at(a);
    check("variant rof alpha=" + num(a) + " v22", expect[1], ur[1], value_tol);
    check("variant rof alpha=" + num(a) + " v32", expect[2], ur[2], value_tol);
    check("variant rof=flow alpha=" + num(a), 0.0, max_abs_diff(ur.span(), uf.span()), value_tol);
  }
  flag("variant datum flat on (v32,v22)", !jump_set(g, variant.data, tol).contains(special));
  flag("variant alpha=2 jump created on (v32,v22)",
       jump_set(g, rof_solve(g, variant.data, 2.0, tol).u, tol).contains(special));

  const double mean = 938.0 / 9.0;
  const VertexField terminal = traj.path.terminal_value();
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    check("flow terminal " + g.vertex_name(v), mean, terminal[v], value_tol);
  check("rof stationary before flow", 1.0,
        path.last_breakpoint() <= traj.stationary_time() + breakpoint_tol ? 1.0 : 0.0, 0.0);
  return rep;
}

}  // namespace tvg
