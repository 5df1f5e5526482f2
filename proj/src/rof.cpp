#include "tvgraph/rof.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "tvgraph/subdifferential.hpp"

namespace tvg {

// ── PiecewiseAffinePath ─────────────────────────────────────────────────────

PiecewiseAffinePath::PiecewiseAffinePath(std::vector<AffineSegment> segments, VertexField terminal)
    : segments_(std::move(segments)), terminal_(std::move(terminal)) {
  if (segments_.empty()) throw InvalidArgument("path needs at least one segment");
  if (segments_.front().start != 0.0) throw InvalidArgument("path must start at zero");
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    if (k > 0 && !(segments_[k].start > segments_[k - 1].start))
      throw InvalidArgument("path breakpoints must increase");
    breakpoints_.push_back(segments_[k].start);
  }
}

std::vector<double> PiecewiseAffinePath::interior_breakpoints() const {
  return {std::next(breakpoints_.begin()), breakpoints_.end()};
}

std::size_t PiecewiseAffinePath::segment_index(double s) const {
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), s);
  return it == breakpoints_.begin() ? 0 : static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
}

VertexField PiecewiseAffinePath::evaluate(double s) const {
  const AffineSegment& seg = segments_[segment_index(s)];
  return seg.value + (s - seg.start) * seg.slope;
}

double PiecewiseAffinePath::continuity_defect() const {
  double worst = 0.0;
  for (std::size_t k = 1; k < segments_.size(); ++k) {
    const AffineSegment& prev = segments_[k - 1];
    const VertexField end = prev.value + (segments_[k].start - prev.start) * prev.slope;
    worst = std::max(worst, max_abs_diff(end.span(), segments_[k].value.span()));
  }
  return worst;
}

// ── Single solves ───────────────────────────────────────────────────────────

RofSolution rof_solve(const OrientedGraph& g, const VertexField& f, double alpha,
                      const Tolerances& tol, const EdgeField* warm_start) {
  require_size(g, f);
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be >= 0");
  RofSolution out;
  out.alpha = alpha;
  if (alpha == 0.0) {
    out.u = f;
    out.dual_flow = EdgeField(g.edge_count());
    out.report.converged = true;
    out.report.polished = true;
    return out;
  }
  FlowSolution sol =
      project_onto_div_box(g, f, BoxSpec::uniform(g.edge_count(), alpha), tol, warm_start);
  if (!sol.report.converged)
    throw NonConvergence("ROF projection did not converge at alpha = " + std::to_string(alpha),
                         sol.report);
  out.u = f - divergence(g, sol.flow);
  out.dual_flow = -sol.flow;
  out.report = sol.report;
  return out;
}

// ── Solution path ───────────────────────────────────────────────────────────

namespace {

struct Sample {
  double alpha;
  VertexField u;
  EdgeField h;  // projection flow, u = f - div h
  SignPattern pattern;
};

struct Line {
  VertexField at_zero;
  VertexField slope;
  VertexField at(double a) const { return at_zero + a * slope; }
};

}  // namespace

PiecewiseAffinePath rof_path(const OrientedGraph& g, const VertexField& f, const Tolerances& tol) {
  require_size(g, f);
  tol.validate();
  const VertexField fbar = mean_field(f);
  const double range = field_range(f.span());
  const VertexField zero(g.vertex_count());
  if (range == 0.0) return PiecewiseAffinePath({AffineSegment{0.0, f, zero}}, f);

  Tolerances t = tol;
  if (t.flat_scale == 0.0) t.flat_scale = range;
  const double value_scale = std::max(1.0, norm_inf(f.span()));
  const double affine_tol = 10.0 * t.solve_tol * value_scale;

  auto solve = [&](double alpha, const EdgeField* warm) {
    RofSolution s = rof_solve(g, f, alpha, t, warm);
    Sample out{alpha, std::move(s.u), -s.dual_flow, {}};
    out.pattern = sign_pattern(g, out.u, t);
    return out;
  };
  auto solve_near = [&](double alpha, const Sample& nb) {
    if (nb.alpha <= 0.0) return solve(alpha, nullptr);
    EdgeField warm = (std::min(alpha, nb.alpha) / nb.alpha) * nb.h;
    return solve(alpha, &warm);
  };
  auto is_terminal = [&](const Sample& s) {
    return std::all_of(s.pattern.labels.begin(), s.pattern.labels.end(),
                       [](std::int8_t l) { return l == 0; });
  };

  // Upper bound for the last breakpoint.
  const FlowSolution section = min_norm_divergence(g, subdifferential_box(g, f, t), t);
  const double section_norm = norm2(divergence(g, section.flow).span());
  double upper = norm2((f - fbar).span()) / std::max(section_norm, 1e-12);
  Sample top = solve(upper, nullptr);
  for (int k = 0; k < 80 && !is_terminal(top); ++k) {
    upper *= 2.0;
    top = solve_near(upper, top);
  }
  if (!is_terminal(top)) throw PathError("no terminal alpha found", 0.0, upper);

  std::vector<double> grid{0.0};
  for (int k = 1; k <= 32; ++k) grid.push_back(upper * k / 32.0);
  for (int k = 1; k <= 12; ++k) grid.push_back(upper * std::ldexp(1.0, -k));
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<Sample> samples;
  for (double a : grid) samples.push_back(samples.empty() ? solve(a, nullptr)
                                                          : solve_near(a, samples.back()));

  const double width = std::max(t.event_tol * std::max(1.0, upper), 1e-13 * upper);
  const double min_run = 1e-6 * upper;

  auto insert_sample = [&](Sample s) {
    auto it = std::lower_bound(samples.begin(), samples.end(), s.alpha,
                               [](const Sample& x, double a) { return x.alpha < a; });
    if (it != samples.end() && it->alpha == s.alpha) return;
    samples.insert(it, std::move(s));
  };

  struct Run {
    std::size_t first, last;  // sample indices
    Line line;
    bool terminal;
  };
  std::vector<Run> runs;

  for (int pass = 0;; ++pass) {
    if (pass == 12) throw PathError("could not resolve ROF path", 0.0, upper);
    // Bisect every pattern change down to `width`.
    for (std::size_t i = 0; i + 1 < samples.size();) {
      const Sample& a = samples[i];
      const Sample& b = samples[i + 1];
      if (a.pattern != b.pattern && b.alpha - a.alpha > width) {
        Sample mid = solve_near(0.5 * (a.alpha + b.alpha), a);
        samples.insert(samples.begin() + static_cast<std::ptrdiff_t>(i) + 1, std::move(mid));
      } else {
        ++i;
      }
    }

    runs.clear();
    for (std::size_t i = 0; i < samples.size();) {
      std::size_t j = i;
      while (j + 1 < samples.size() && samples[j + 1].pattern == samples[i].pattern) ++j;
      runs.push_back(Run{i, j, {}, is_terminal(samples[i])});
      i = j + 1;
    }

    // Fit and validate a line on every run long enough to carry one.
    std::vector<Sample> extra;
    std::vector<Run> kept;
    for (Run& run : runs) {
      const double lo = samples[run.first].alpha, hi = samples[run.last].alpha;
      if (run.terminal) {
        run.line = Line{fbar, zero};
        kept.push_back(run);
        continue;
      }
      if (hi - lo <= min_run) continue;
      Sample s1 = solve_near(lo + (hi - lo) / 3.0, samples[run.first]);
      Sample s2 = solve_near(lo + (hi - lo) / 2.0, samples[run.first]);
      Sample s3 = solve_near(lo + 2.0 * (hi - lo) / 3.0, samples[run.first]);
      const VertexField slope = (1.0 / (s3.alpha - s1.alpha)) * (s3.u - s1.u);
      run.line = Line{s1.u - s1.alpha * slope, slope};
      const bool same = s1.pattern == samples[run.first].pattern &&
                        s2.pattern == samples[run.first].pattern &&
                        s3.pattern == samples[run.first].pattern;
      const double defect = max_abs_diff(run.line.at(s2.alpha).span(), s2.u.span());
      if (!same || defect > affine_tol) {
        extra.push_back(std::move(s1));
        extra.push_back(std::move(s2));
        extra.push_back(std::move(s3));
      }
      kept.push_back(run);
    }
    if (!extra.empty()) {
      for (Sample& s : extra) insert_sample(std::move(s));
      continue;
    }
    runs = std::move(kept);
    break;
  }

  // Breakpoints where consecutive lines meet.
  std::vector<AffineSegment> segments;
  double previous = 0.0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    double start = 0.0;
    if (r > 0) {
      const double lo = samples[runs[r - 1].last].alpha;
      const double hi = samples[runs[r].first].alpha;
      const VertexField dp = runs[r - 1].line.at_zero - runs[r].line.at_zero;
      const VertexField ds = runs[r - 1].line.slope - runs[r].line.slope;
      const double ds2 = dot(ds.span(), ds.span());
      start = 0.5 * (lo + hi);
      if (ds2 > 0.0) {
        const double cross = -dot(dp.span(), ds.span()) / ds2;
        const double slack = 1e-4 * upper + (hi - lo);
        if (cross >= lo - slack && cross <= hi + slack) start = cross;
      }
      if (!(start > previous)) start = 0.5 * (lo + hi);
    }
    previous = start;
    if (runs[r].terminal) {
      segments.push_back(AffineSegment{start, fbar, zero});
      break;
    }
    segments.push_back(AffineSegment{start, runs[r].line.at(start), runs[r].line.slope});
  }
  return PiecewiseAffinePath(std::move(segments), fbar);
}

// ── Isotropic variant ───────────────────────────────────────────────────────

GroupedBall isotropic_ball(const OrientedGraph& g, double radius) {
  if (!g.cartesian()) throw InvalidArgument("isotropic total variation needs a Cartesian graph");
  const CartesianLayout& grid = *g.cartesian();
  const std::size_t m = grid.rows, n = grid.cols;
  GroupedBall ball;
  ball.radius = radius;
  auto edge = [&](std::size_t a, std::size_t b) { return *g.find_edge(a, b); };
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      std::vector<std::size_t> group;
      if (i < m) group.push_back(edge(grid.vertex(i + 1, j), grid.vertex(i, j)));
      if (i < m && j < n) group.push_back(edge(grid.vertex(i, j + 1), grid.vertex(i, j)));
      if (i == m && j < n) group.push_back(edge(grid.vertex(i, j + 1), grid.vertex(i, j)));
      if (!group.empty()) ball.groups.push_back(std::move(group));
    }
  }
  return ball;
}

double isotropic_total_variation(const OrientedGraph& g, const VertexField& u) {
  require_size(g, u);
  const GroupedBall ball = isotropic_ball(g, 1.0);
  double s = 0.0;
  for (const auto& group : ball.groups) {
    double n2 = 0.0;
    for (std::size_t e : group) {
      const double d = u[g.edge(e).head] - u[g.edge(e).tail];
      n2 += d * d;
    }
    s += std::sqrt(n2);
  }
  return s;
}

RofSolution isotropic_rof_solve(const OrientedGraph& g, const VertexField& f, double alpha,
                                const Tolerances& tol) {
  require_size(g, f);
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be >= 0");
  const GroupedBall ball = isotropic_ball(g, alpha);
  RofSolution out;
  out.alpha = alpha;
  if (alpha == 0.0) {
    out.u = f;
    out.dual_flow = EdgeField(g.edge_count());
    out.report.converged = true;
    return out;
  }
  FlowSolution sol = project_onto_div_set(g, f, FlowSet{ball}, tol);
  if (!sol.report.converged)
    throw NonConvergence("isotropic ROF projection did not converge", sol.report);
  out.u = f - divergence(g, sol.flow);
  out.dual_flow = -sol.flow;
  out.report = sol.report;
  return out;
}

}  // namespace tvg
