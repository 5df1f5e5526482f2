/**
 * @file minimality.hpp
 * @brief Checks that the ROF minimizer minimizes every separable convex
 *        objective over f - alpha dJ(0), and searches for the failure of
 *        that property under isotropic total variation.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tvgraph/convex_engine.hpp"
#include "tvgraph/convex_scalar.hpp"
#include "tvgraph/graph.hpp"

namespace tvg {

struct PhiCatalog {
  std::vector<ConvexScalar> members;

  std::size_t size() const { return members.size(); }
  /// Copy without the member called `name`.
  PhiCatalog without(const std::string& name) const;
  const ConvexScalar* find(const std::string& name) const;
};

/// power_1, power_1.5, power_2, power_3, arclength, softabs_delta and a
/// range-shifted exp_clip for arguments in [lo, hi], followed by
/// `random_pl` random piecewise-linear members drawn from `seed`.
PhiCatalog standard_phi_catalog(double lo, double hi, std::size_t random_pl = 2,
                                std::uint64_t seed = 7);

/// Random convex piecewise-linear function with knots inside [lo, hi].
ConvexScalar random_piecewise_linear_phi(double lo, double hi, std::mt19937_64& rng,
                                         const std::string& name);

struct PhiGap {
  std::string phi;
  /// sum phi(u_alpha)
  double objective = 0.0;
  /// Independently minimized objective over the same set.
  double oracle = 0.0;
  double gap = 0.0;
  bool ok = false;
  /// Set when the oracle failed; `ok` is then false.
  std::string error;
};

struct MinimalityReport {
  double alpha = 0.0;
  std::vector<PhiGap> entries;
  bool all_ok() const;
};

/// Per-phi comparison of sum phi(u_alpha) with the minimum of sum phi over
/// f - alpha div B_1; passes when |gap| <= rel_tol * (1 + |objective|).
MinimalityReport verify_universal_minimality(const OrientedGraph& g, const VertexField& f,
                                             double alpha, const PhiCatalog& catalog,
                                             const Tolerances& tol, double rel_tol = 1e-5);

enum class TvModel { Anisotropic, Isotropic };

struct IsotropicWitness {
  std::size_t data_index = 0;
  std::string phi;
  double objective = 0.0;
  double oracle = 0.0;
  /// objective - oracle
  double margin = 0.0;
};

struct IsotropicFailureReport {
  std::optional<IsotropicWitness> witness;
  std::size_t fields_tried = 0;
  /// Largest relative margin seen over all (f, phi) pairs tried.
  double largest_relative_margin = 0.0;
};

/// Returns the first (f, phi) in the batch, phi != power_2, with
/// sum phi(u) - min sum phi > 10 * rel_tol * (1 + |sum phi(u)|), where u is
/// the ROF minimizer of the chosen model and the minimum runs over the
/// matching set f - alpha div B.
IsotropicFailureReport demonstrate_isotropic_failure(const OrientedGraph& g,
                                                     const std::vector<VertexField>& batch,
                                                     double alpha, const PhiCatalog& catalog,
                                                     const Tolerances& tol, double rel_tol = 1e-5,
                                                     TvModel model = TvModel::Isotropic);

struct InvariantTrial {
  VertexField anchor;
  /// Least-squares point x_a of the set.
  VertexField point;
  bool passed = false;
  std::string worst_phi;
  double worst_gap = 0.0;
};

struct InvariantCheckReport {
  std::vector<InvariantTrial> trials;
  bool all_passed() const;
  std::size_t failures() const;
};

/// For random anchors a, takes the point x_a of div(set) nearest to a and
/// checks that it also minimizes sum phi(x - a) for every catalog member.
InvariantCheckReport empirical_invariant_phi_min_check(const OrientedGraph& g, const FlowSet& set,
                                                       std::size_t trial_count,
                                                       const PhiCatalog& catalog,
                                                       const Tolerances& tol,
                                                       double rel_tol = 1e-5,
                                                       std::uint64_t seed = 11,
                                                       double anchor_scale = 10.0);
InvariantCheckReport empirical_invariant_phi_min_check(const OrientedGraph& g, double alpha,
                                                       std::size_t trial_count,
                                                       const PhiCatalog& catalog,
                                                       const Tolerances& tol,
                                                       double rel_tol = 1e-5,
                                                       std::uint64_t seed = 11);
/// The single trial for a given anchor.
InvariantTrial invariant_trial(const OrientedGraph& g, const FlowSet& set,
                               const VertexField& anchor, const PhiCatalog& catalog,
                               const Tolerances& tol, double rel_tol = 1e-5);

}  // namespace tvg
