#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "tvgraph/instances.hpp"
#include "tvgraph/rof.hpp"
#include "tvgraph/subdifferential.hpp"

using namespace tvg;

namespace {

void check_values(const VertexField& u, const std::vector<double>& expect, double tol) {
  REQUIRE(u.size() == expect.size());
  for (std::size_t v = 0; v < expect.size(); ++v) CHECK(u[v] == doctest::Approx(expect[v]).epsilon(tol));
}

}  // namespace

TEST_CASE("ROF on the counterexample matches the hand solution") {
  const Instance in = counterexample_instance();
  check_values(rof_solve(in.graph, in.data, 0.2, Tolerances{}).u, fixtures::kRofAlpha02, 1e-9);
  check_values(rof_solve(in.graph, in.data, 1.0, Tolerances{}).u, fixtures::kRofAlpha1, 1e-9);
  check_values(rof_solve(in.graph, in.data, 3.0, Tolerances{}).u, fixtures::kRofAlpha3, 1e-9);
}

TEST_CASE("ROF dual flow on edge (v32, v22)") {
  const Instance in = counterexample_instance();
  const std::size_t e = *in.graph.find_edge(2, 1);
  CHECK(rof_solve(in.graph, in.data, 0.2, Tolerances{}).dual_flow[e] == doctest::Approx(0.2));
  CHECK(rof_solve(in.graph, in.data, 1.0, Tolerances{}).dual_flow[e] == doctest::Approx(-0.5));
  CHECK(rof_solve(in.graph, in.data, 3.0, Tolerances{}).dual_flow[e] == doctest::Approx(-3.0));
}

TEST_CASE("ROF edge cases") {
  const Instance in = counterexample_instance();
  CHECK(rof_solve(in.graph, in.data, 0.0, Tolerances{}).u == in.data);
  const VertexField big = rof_solve(in.graph, in.data, 500.0, Tolerances{}).u;
  for (double x : big) CHECK(x == doctest::Approx(fixtures::kMean));
  CHECK_THROWS_AS(rof_solve(in.graph, in.data, -1.0, Tolerances{}), InvalidArgument);
  CHECK_THROWS_AS(rof_solve(in.graph, VertexField{1.0}, 1.0, Tolerances{}), InvalidArgument);
}

TEST_CASE("ROF optimality condition holds on random graphs") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 15; ++k) {
    const OrientedGraph g = random_connected_graph(9, 0.3, rng);
    const VertexField f = random_field(9, -5, 5, rng);
    for (double a : {0.3, 1.0, 4.0}) {
      const RofSolution s = rof_solve(g, f, a, Tolerances{});
      CHECK(sum(s.u.span()) == doctest::Approx(sum(f.span())).epsilon(1e-10));
      CHECK(subdifferential_membership(g, s.u, (1.0 / a) * (f - s.u), Tolerances{}).member());
      CHECK(norm_inf(s.dual_flow.span()) <= a * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("ROF path on the counterexample") {
  const Instance in = counterexample_instance();
  const PiecewiseAffinePath path = rof_path(in.graph, in.data, Tolerances{});
  const std::vector<double> bps = path.interior_breakpoints();
  REQUIRE(bps.size() >= 2);
  CHECK(bps[0] == doctest::Approx(0.4).epsilon(1e-8));
  CHECK(bps[1] == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(path.continuity_defect() < 1e-7);
  for (double x : path.terminal_value()) CHECK(x == doctest::Approx(fixtures::kMean));
  for (double a : {0.1, 0.7, 1.9, 2.5, 10.0, 40.0, 80.0}) {
    const VertexField u = rof_solve(in.graph, in.data, a, Tolerances{}).u;
    CHECK(max_abs_diff(path.evaluate(a).span(), u.span()) < 1e-6);
  }
}

TEST_CASE("ROF path agrees with pointwise solves on random graphs") {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 8; ++k) {
    const OrientedGraph g = random_connected_graph(7, 0.35, rng);
    const VertexField f = random_field(7, 0, 10, rng);
    const PiecewiseAffinePath path = rof_path(g, f, Tolerances{});
    const double top = path.last_breakpoint() * 1.1;
    for (int i = 1; i <= 9; ++i) {
      const double a = top * i / 9.0;
      CHECK(max_abs_diff(path.evaluate(a).span(), rof_solve(g, f, a, Tolerances{}).u.span()) < 1e-6);
    }
  }
}

TEST_CASE("constant datum gives a one-segment path") {
  const OrientedGraph g = path_graph(4);
  const PiecewiseAffinePath p = rof_path(g, VertexField(4, 2.5), Tolerances{});
  CHECK(p.segments().size() == 1);
  CHECK(p.interior_breakpoints().empty());
  CHECK(p.evaluate(3.0)[2] == 2.5);
}

TEST_CASE("isotropic total variation and ROF") {
  const OrientedGraph g = cartesian_graph(2, 2);
  // v11 = 0, v12 = 3, v21 = 4, v22 = 4.
  const VertexField u{0.0, 3.0, 4.0, 4.0};
  CHECK(isotropic_total_variation(g, u) == doctest::Approx(5.0 + 1.0 + 0.0));
  const VertexField c(4, 1.5);
  CHECK(isotropic_rof_solve(g, c, 1.0, Tolerances{}).u == c);
  const RofSolution s = isotropic_rof_solve(g, u, 0.7, Tolerances{});
  CHECK(isotropic_ball(g, 0.7).contains(s.dual_flow.span(), 1e-9));
  CHECK(sum(s.u.span()) == doctest::Approx(sum(u.span())));
  CHECK_THROWS_AS(isotropic_rof_solve(path_graph(3), VertexField{1, 2, 3}, 1.0, Tolerances{}), InvalidArgument);
}
