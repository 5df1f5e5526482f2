#include "tvgraph/minimality.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tvgraph/rof.hpp"

namespace tvg {

PhiCatalog PhiCatalog::without(const std::string& name) const {
  PhiCatalog out;
  for (const ConvexScalar& phi : members)
    if (phi.name() != name) out.members.push_back(phi);
  return out;
}

const ConvexScalar* PhiCatalog::find(const std::string& name) const {
  for (const ConvexScalar& phi : members)
    if (phi.name() == name) return &phi;
  return nullptr;
}

ConvexScalar random_piecewise_linear_phi(double lo, double hi, std::mt19937_64& rng,
                                         const std::string& name) {
  if (!(hi > lo)) hi = lo + 1.0;
  std::uniform_int_distribution<int> count(2, 5);
  std::uniform_real_distribution<double> where(lo, hi);
  std::uniform_real_distribution<double> rise(0.1, 2.0);
  std::vector<double> knots(static_cast<std::size_t>(count(rng)));
  for (double& k : knots) k = where(rng);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  std::vector<double> slopes{-rise(rng) * static_cast<double>(knots.size()) / 2.0};
  for (std::size_t k = 0; k < knots.size(); ++k) slopes.push_back(slopes.back() + rise(rng));
  ConvexScalar base = piecewise_linear_phi(knots, slopes, 0.0);
  return ConvexScalar(name, [base](double x) { return base(x); },
                      [base](double x) { return base.subgradient(x); }, false,
                      [base](double x, double mu) { return base.prox(x, mu); });
}

PhiCatalog standard_phi_catalog(double lo, double hi, std::size_t random_pl,
                                std::uint64_t seed) {
  if (hi < lo) std::swap(lo, hi);
  const double span = std::max(1.0, hi - lo);
  PhiCatalog c;
  for (double p : {1.0, 1.5, 2.0, 3.0}) c.members.push_back(power_phi(p));
  c.members.push_back(arclength_phi());
  c.members.push_back(huber_phi(0.1 * span));
  // exp((x - m) / s) stays within [e^-4, 1] on [lo, hi].
  c.members.push_back(exp_phi(hi, span / 4.0));
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < random_pl; ++k)
    c.members.push_back(
        random_piecewise_linear_phi(lo, hi, rng, "piecewise_linear_" + std::to_string(k + 1)));
  return c;
}

namespace {

PhiGap compare(const OrientedGraph& g, const VertexField& base, const FlowSet& set,
               const ConvexScalar& phi, const VertexField& candidate, const Tolerances& tol,
               double rel_tol) {
  PhiGap entry;
  entry.phi = phi.name();
  entry.objective = separable_objective(phi, candidate);
  const SeparableSolution oracle = min_separable_convex_over_polytope(g, base, set, phi, tol);
  entry.oracle = oracle.report.objective;
  entry.gap = entry.objective - entry.oracle;
  if (!oracle.report.converged) {
    entry.error = "oracle minimization did not converge";
    return entry;
  }
  entry.ok = std::abs(entry.gap) <= rel_tol * (1.0 + std::abs(entry.objective));
  return entry;
}

}  // namespace

bool MinimalityReport::all_ok() const {
  return std::all_of(entries.begin(), entries.end(), [](const PhiGap& e) { return e.ok; });
}

MinimalityReport verify_universal_minimality(const OrientedGraph& g, const VertexField& f,
                                             double alpha, const PhiCatalog& catalog,
                                             const Tolerances& tol, double rel_tol) {
  if (!(alpha >= 0.0)) throw InvalidArgument("alpha must be >= 0");
  MinimalityReport report;
  report.alpha = alpha;
  const VertexField u = rof_solve(g, f, alpha, tol).u;
  const FlowSet set{BoxSpec::uniform(g.edge_count(), alpha)};
  for (const ConvexScalar& phi : catalog.members)
    report.entries.push_back(compare(g, f, set, phi, u, tol, rel_tol));
  return report;
}

IsotropicFailureReport demonstrate_isotropic_failure(const OrientedGraph& g,
                                                     const std::vector<VertexField>& batch,
                                                     double alpha, const PhiCatalog& catalog,
                                                     const Tolerances& tol, double rel_tol,
                                                     TvModel model) {
  if (model == TvModel::Isotropic) {
    if (!g.cartesian() || g.cartesian()->rows < 2 || g.cartesian()->cols < 2)
      throw InvalidArgument("isotropic failure search needs a Cartesian grid with M, N > 1");
  }
  const PhiCatalog search = catalog.without("power_2");
  const FlowSet set = model == TvModel::Isotropic
                          ? FlowSet{isotropic_ball(g, alpha)}
                          : FlowSet{BoxSpec::uniform(g.edge_count(), alpha)};
  IsotropicFailureReport report;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    ++report.fields_tried;
    const VertexField& f = batch[i];
    const VertexField u = model == TvModel::Isotropic ? isotropic_rof_solve(g, f, alpha, tol).u
                                                      : rof_solve(g, f, alpha, tol).u;
    for (const ConvexScalar& phi : search.members) {
      const PhiGap entry = compare(g, f, set, phi, u, tol, rel_tol);
      if (!entry.error.empty()) continue;
      const double scale = 1.0 + std::abs(entry.objective);
      report.largest_relative_margin = std::max(report.largest_relative_margin, entry.gap / scale);
      if (entry.gap > 10.0 * rel_tol * scale) {
        report.witness = IsotropicWitness{i, entry.phi, entry.objective, entry.oracle, entry.gap};
        return report;
      }
    }
  }
  return report;
}

bool InvariantCheckReport::all_passed() const { return failures() == 0; }

std::size_t InvariantCheckReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(trials.begin(), trials.end(), [](const InvariantTrial& t) { return !t.passed; }));
}

InvariantTrial invariant_trial(const OrientedGraph& g, const FlowSet& set,
                               const VertexField& anchor, const PhiCatalog& catalog,
                               const Tolerances& tol, double rel_tol) {
  require_size(g, anchor);
  InvariantTrial trial;
  trial.anchor = anchor;
  const FlowSolution proj = project_onto_div_set(g, anchor, set, tol);
  if (!proj.report.converged) throw NonConvergence("anchor projection did not converge", proj.report);
  trial.point = divergence(g, proj.flow);
  // x - a = -a - div(-H) and the set is symmetric, so the oracle runs on base -a.
  const VertexField base = -anchor;
  const VertexField shifted = trial.point - anchor;
  trial.passed = true;
  for (const ConvexScalar& phi : catalog.members) {
    const PhiGap entry = compare(g, base, set, phi, shifted, tol, rel_tol);
    const double rel = entry.gap / (1.0 + std::abs(entry.objective));
    if (!entry.ok) trial.passed = false;
    if (trial.worst_phi.empty() || rel > trial.worst_gap) {
      trial.worst_gap = rel;
      trial.worst_phi = entry.phi;
    }
  }
  return trial;
}

InvariantCheckReport empirical_invariant_phi_min_check(const OrientedGraph& g, const FlowSet& set,
                                                       std::size_t trial_count,
                                                       const PhiCatalog& catalog,
                                                       const Tolerances& tol, double rel_tol,
                                                       std::uint64_t seed, double anchor_scale) {
  if (trial_count == 0) throw InvalidArgument("trial_count must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-anchor_scale, anchor_scale);
  InvariantCheckReport report;
  for (std::size_t k = 0; k < trial_count; ++k) {
    VertexField a(g.vertex_count());
    for (double& x : a.values()) x = dist(rng);
    report.trials.push_back(invariant_trial(g, set, a, catalog, tol, rel_tol));
  }
  return report;
}

InvariantCheckReport empirical_invariant_phi_min_check(const OrientedGraph& g, double alpha,
                                                       std::size_t trial_count,
                                                       const PhiCatalog& catalog,
                                                       const Tolerances& tol, double rel_tol,
                                                       std::uint64_t seed) {
  return empirical_invariant_phi_min_check(
      g, FlowSet{BoxSpec::uniform(g.edge_count(), alpha)}, trial_count, catalog, tol, rel_tol,
      seed);
}

}  // namespace tvg
