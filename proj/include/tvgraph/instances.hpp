/**
 * @file instances.hpp
 * @brief Built-in graphs and data: the 3x3 counterexample, path and grid
 *        graphs, and random connected graphs for property tests.
 */
#pragma once

#include <cstddef>
#include <random>
#include <string>

#include "tvgraph/graph.hpp"

namespace tvg {

struct Instance {
  std::string name;
  OrientedGraph graph;
  VertexField data;
};

/// The 3x3 counterexample graph. Vertices in the order
/// v12, v22, v32, v23, v21, v13, v11, v31, v33; tagged Cartesian.
OrientedGraph counterexample_graph();
/// Datum 100, 18, 20, 100, 100, 200, 200, 200, 0 on the counterexample graph.
Instance counterexample_instance();
/// Same graph, datum with 20 at v22 instead of 18.
Instance counterexample_variant_instance();
/// Looks up a built-in instance by name ("figure1", "figure4").
Instance builtin_instance(const std::string& name);

/// v1 <- v2 <- ... <- vn: edges (v_{i+1}, v_i).
OrientedGraph path_graph(std::size_t n);
/// M x N grid with edges (v_{i+1,j}, v_{i,j}) and (v_{i,j+1}, v_{i,j}),
/// vertices in row-major order, tagged Cartesian.
OrientedGraph cartesian_graph(std::size_t rows, std::size_t cols);

/// Random spanning tree plus extra edges, each added with probability
/// `extra_edge_probability`; orientations are random.
OrientedGraph random_connected_graph(std::size_t n, double extra_edge_probability,
                                     std::mt19937_64& rng);
VertexField random_field(std::size_t n, double lo, double hi, std::mt19937_64& rng);

}  // namespace tvg
