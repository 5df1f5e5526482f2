#include <doctest.h>

#include <random>

#include "tvgraph/instances.hpp"
#include "tvgraph/minimality.hpp"
#include "tvgraph/rof.hpp"

using namespace tvg;

TEST_CASE("standard catalog contents") {
  const PhiCatalog cat = standard_phi_catalog(0.0, 200.0);
  for (const char* name : {"power_1", "power_1.5", "power_2", "power_3", "arclength", "exp_clip",
                           "piecewise_linear_1", "piecewise_linear_2"})
    CHECK(cat.find(name) != nullptr);
  CHECK(cat.without("power_2").find("power_2") == nullptr);
  CHECK((*cat.find("exp_clip"))(200.0) == doctest::Approx(1.0));
}

TEST_CASE("square gap vanishes and absolute value on two vertices") {
  const Instance in = counterexample_instance();
  PhiCatalog sq;
  sq.members.push_back(power_phi(2));
  const MinimalityReport rep = verify_universal_minimality(in.graph, in.data, 1.0, sq, Tolerances{});
  CHECK(rep.all_ok());
  CHECK(std::abs(rep.entries[0].gap) < 1e-8 * rep.entries[0].objective);

  PhiCatalog abs;
  abs.members.push_back(power_phi(1));
  const MinimalityReport two =
      verify_universal_minimality(path_graph(2), VertexField{1.0, -1.0}, 1.0, abs, Tolerances{});
  CHECK(two.entries[0].objective == doctest::Approx(0.0));
  CHECK(two.entries[0].oracle == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("universal minimality on the counterexample") {
  const Instance in = counterexample_instance();
  const PhiCatalog cat = standard_phi_catalog(0.0, 200.0, 3, 9);
  for (double a : {0.5, 1.0, 2.5}) {
    const MinimalityReport rep = verify_universal_minimality(in.graph, in.data, a, cat, Tolerances{});
    CHECK(rep.all_ok());
  }
  CHECK_THROWS_AS(verify_universal_minimality(in.graph, in.data, -1.0, cat, Tolerances{}), InvalidArgument);
}

TEST_CASE("zero anchor and symmetry of the invariant check") {
  const Instance in = counterexample_instance();
  const PhiCatalog cat = standard_phi_catalog(-20.0, 20.0);
  const FlowSet set{BoxSpec::uniform(in.graph.edge_count(), 1.0)};
  const InvariantTrial zero = invariant_trial(in.graph, set, VertexField(9), cat, Tolerances{});
  CHECK(zero.passed);
  CHECK(norm_inf(zero.point.span()) < 1e-12);

  std::mt19937_64 rng(4);
  const VertexField a = random_field(9, -10, 10, rng);
  const InvariantTrial plus = invariant_trial(in.graph, set, a, cat, Tolerances{});
  const InvariantTrial minus = invariant_trial(in.graph, set, -a, cat, Tolerances{});
  CHECK(max_abs_diff(plus.point.span(), (-minus.point).span()) < 1e-9);
  CHECK(plus.passed);
}

TEST_CASE("least-squares point is optimal for the l_p objectives") {
  const Instance in = counterexample_instance();
  PhiCatalog lp;
  for (double p : {1.0, 1.5, 3.0}) lp.members.push_back(power_phi(p));
  const InvariantCheckReport rep = empirical_invariant_phi_min_check(in.graph, 1.0, 10, lp, Tolerances{});
  CHECK(rep.all_passed());
}

TEST_CASE("invariant check fails for the isotropic set") {
  const OrientedGraph g = counterexample_graph();
  const PhiCatalog cat = standard_phi_catalog(-20.0, 20.0);
  const InvariantCheckReport aniso = empirical_invariant_phi_min_check(g, 1.0, 20, cat, Tolerances{});
  CHECK(aniso.all_passed());
  const InvariantCheckReport iso =
      empirical_invariant_phi_min_check(g, FlowSet{isotropic_ball(g, 1.0)}, 20, cat, Tolerances{});
  CHECK(iso.failures() >= 1);
  CHECK_THROWS_AS(empirical_invariant_phi_min_check(g, 1.0, 0, cat, Tolerances{}), InvalidArgument);
}

TEST_CASE("isotropic failure search") {
  const OrientedGraph g = cartesian_graph(3, 3);
  const PhiCatalog cat = standard_phi_catalog(-5.0, 15.0);
  const IsotropicFailureReport constant =
      demonstrate_isotropic_failure(g, {VertexField(9, 3.0)}, 1.0, cat, Tolerances{});
  CHECK_FALSE(constant.witness.has_value());

  std::mt19937_64 rng(2024);
  std::vector<VertexField> batch;
  for (int k = 0; k < 5; ++k) batch.push_back(random_field(9, 0, 10, rng));
  const IsotropicFailureReport iso = demonstrate_isotropic_failure(g, batch, 1.0, cat, Tolerances{});
  REQUIRE(iso.witness.has_value());
  CHECK(iso.witness->margin > 1e-4);
  CHECK(iso.witness->phi != "power_2");
  const IsotropicFailureReport aniso =
      demonstrate_isotropic_failure(g, batch, 1.0, cat, Tolerances{}, 1e-5, TvModel::Anisotropic);
  CHECK_FALSE(aniso.witness.has_value());
  CHECK(aniso.fields_tried == batch.size());
  CHECK_THROWS_AS(demonstrate_isotropic_failure(path_graph(4), {VertexField(4)}, 1.0, cat, Tolerances{}),
                  InvalidArgument);
}
