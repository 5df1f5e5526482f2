#include "tvgraph/instances.hpp"

#include <algorithm>
#include <set>

namespace tvg {

OrientedGraph counterexample_graph() {
  // v12=0 v22=1 v32=2 v23=3 v21=4 v13=5 v11=6 v31=7 v33=8
  std::vector<Edge> edges{{1, 0}, {2, 1}, {3, 1}, {1, 4}, {5, 0}, {0, 6},
                          {3, 5}, {4, 6}, {8, 3}, {8, 2}, {2, 7}, {7, 4}};
  std::vector<std::string> names{"v12", "v22", "v32", "v23", "v21", "v13", "v11", "v31", "v33"};
  OrientedGraph g(9, std::move(edges), std::move(names));
  // vertex_at[(i-1)*3 + (j-1)] = v_{ij}
  return g.with_cartesian(CartesianLayout{3, 3, {6, 0, 5, 4, 1, 3, 7, 2, 8}});
}

Instance counterexample_instance() {
  return Instance{"figure1", counterexample_graph(),
                  VertexField{100, 18, 20, 100, 100, 200, 200, 200, 0}};
}

Instance counterexample_variant_instance() {
  return Instance{"figure4", counterexample_graph(),
                  VertexField{100, 20, 20, 100, 100, 200, 200, 200, 0}};
}

Instance builtin_instance(const std::string& name) {
  if (name == "figure1") return counterexample_instance();
  if (name == "figure4") return counterexample_variant_instance();
  throw InvalidArgument("unknown built-in instance '" + name + "'");
}

OrientedGraph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i + 1, i});
  return OrientedGraph(n, std::move(edges));
}

OrientedGraph cartesian_graph(std::size_t rows, std::size_t cols) {
  auto at = [cols](std::size_t i, std::size_t j) { return (i - 1) * cols + (j - 1); };
  std::vector<Edge> edges;
  for (std::size_t i = 1; i <= rows; ++i)
    for (std::size_t j = 1; j <= cols; ++j) {
      if (i < rows) edges.push_back({at(i + 1, j), at(i, j)});
      if (j < cols) edges.push_back({at(i, j + 1), at(i, j)});
    }
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= rows; ++i)
    for (std::size_t j = 1; j <= cols; ++j)
      names.push_back("v" + std::to_string(i) + "_" + std::to_string(j));
  return OrientedGraph(rows * cols, std::move(edges), std::move(names))
      .with_cartesian(CartesianLayout{rows, cols, {}});
}

OrientedGraph random_connected_graph(std::size_t n, double extra_edge_probability,
                                     std::mt19937_64& rng) {
  std::vector<Edge> edges;
  std::set<std::pair<std::size_t, std::size_t>> used;
  std::bernoulli_distribution coin(0.5);
  auto add = [&](std::size_t a, std::size_t b) {
    if (used.count({std::min(a, b), std::max(a, b)})) return;
    used.insert({std::min(a, b), std::max(a, b)});
    if (coin(rng)) std::swap(a, b);
    edges.push_back({a, b});
  };
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t k = 1; k < n; ++k) {
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    add(order[k], order[pick(rng)]);
  }
  std::bernoulli_distribution extra(extra_edge_probability);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (extra(rng)) add(a, b);
  return OrientedGraph(n, std::move(edges));
}

VertexField random_field(std::size_t n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(lo, hi);
  VertexField f(n);
  for (std::size_t v = 0; v < n; ++v) f[v] = dist(rng);
  return f;
}

}  // namespace tvg
