#include "tvgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace tvg {

namespace {

bool is_connected(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = n;
  for (const Edge& e : edges) {
    const std::size_t a = find(e.tail), b = find(e.head);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

}  // namespace

OrientedGraph::OrientedGraph(std::size_t vertex_count, std::vector<Edge> edges,
                             std::vector<std::string> names)
    : vertex_count_(vertex_count), edges_(std::move(edges)), names_(std::move(names)) {
  if (vertex_count_ == 0) throw InvalidArgument("graph needs at least one vertex");
  if (!names_.empty() && names_.size() != vertex_count_)
    throw InvalidArgument("vertex name count does not match vertex count");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  degree_.assign(vertex_count_, 0);
  for (const Edge& e : edges_) {
    if (e.tail >= vertex_count_ || e.head >= vertex_count_)
      throw InvalidArgument("edge endpoint out of range");
    if (e.tail == e.head) throw InvalidArgument("self-loop at vertex " + std::to_string(e.tail));
    if (seen.count({e.tail, e.head}))
      throw InvalidArgument("duplicate edge (" + std::to_string(e.tail) + ", " +
                            std::to_string(e.head) + ")");
    if (seen.count({e.head, e.tail}))
      throw InvalidArgument("antiparallel edge pair (" + std::to_string(e.tail) + ", " +
                            std::to_string(e.head) + ")");
    seen.insert({e.tail, e.head});
    ++degree_[e.tail];
    ++degree_[e.head];
  }
  if (!is_connected(vertex_count_, edges_)) throw InvalidArgument("graph is not connected");
  max_degree_ = *std::max_element(degree_.begin(), degree_.end());
}

OrientedGraph OrientedGraph::with_cartesian(CartesianLayout layout) const {
  const std::size_t m = layout.rows, n = layout.cols;
  if (m == 0 || n == 0 || m * n != vertex_count_)
    throw InvalidArgument("Cartesian layout size does not match vertex count");
  if (layout.vertex_at.empty()) {
    layout.vertex_at.resize(m * n);
    std::iota(layout.vertex_at.begin(), layout.vertex_at.end(), std::size_t{0});
  }
  if (layout.vertex_at.size() != m * n) throw InvalidArgument("Cartesian layout map has wrong size");
  std::vector<std::size_t> sorted = layout.vertex_at;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k)
    if (sorted[k] != k) throw InvalidArgument("Cartesian layout map is not a permutation");

  std::size_t grid_edges = 0;
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      if (i < m) {
        ++grid_edges;
        if (!find_edge(layout.vertex(i + 1, j), layout.vertex(i, j)))
          throw InvalidArgument("Cartesian tag: missing grid edge");
      }
      if (j < n) {
        ++grid_edges;
        if (!find_edge(layout.vertex(i, j + 1), layout.vertex(i, j)))
          throw InvalidArgument("Cartesian tag: missing grid edge");
      }
    }
  }
  if (grid_edges != edges_.size()) throw InvalidArgument("Cartesian tag: graph has non-grid edges");
  OrientedGraph copy = *this;
  copy.cartesian_ = std::move(layout);
  return copy;
}

std::string OrientedGraph::vertex_name(std::size_t v) const {
  return names_.empty() ? "v" + std::to_string(v) : names_[v];
}

std::optional<std::size_t> OrientedGraph::find_edge(std::size_t a, std::size_t b) const {
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& ed = edges_[e];
    if ((ed.tail == a && ed.head == b) || (ed.tail == b && ed.head == a)) return e;
  }
  return std::nullopt;
}

std::optional<std::size_t> OrientedGraph::find_vertex(const std::string& name) const {
  for (std::size_t v = 0; v < vertex_count_; ++v)
    if (vertex_name(v) == name) return v;
  return std::nullopt;
}

double Tolerances::flat_threshold(std::span<const double> u) const {
  // A near-constant field has a range made of rounding noise; the second
  // term keeps that noise below the threshold.
  const double scale =
      flat_scale > 0.0 ? flat_scale : std::max(field_range(u), 1e-6 * norm_inf(u));
  return scale > 0.0 ? flat_tol * scale : flat_tol;
}

void Tolerances::validate() const {
  if (!(flat_tol > 0.0) || !(solve_tol > 0.0) || !(event_tol > 0.0) || flat_scale < 0.0)
    throw InvalidArgument("tolerances must be positive");
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

double norm1(std::span<const double> a) {
  double s = 0.0;
  for (double x : a) s += std::abs(x);
  return s;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("max_abs_diff: length mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double field_range(std::span<const double> a) {
  if (a.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(a.begin(), a.end());
  return *hi - *lo;
}

double sum(std::span<const double> a) { return std::accumulate(a.begin(), a.end(), 0.0); }

VertexField mean_field(const VertexField& f) {
  return VertexField(f.size(), sum(f.span()) / static_cast<double>(f.size()));
}

void require_size(const OrientedGraph& g, const VertexField& u) {
  if (u.size() != g.vertex_count())
    throw InvalidArgument("vertex field has length " + std::to_string(u.size()) + ", graph has " +
                          std::to_string(g.vertex_count()) + " vertices");
}

void require_size(const OrientedGraph& g, const EdgeField& h) {
  if (h.size() != g.edge_count())
    throw InvalidArgument("edge field has length " + std::to_string(h.size()) + ", graph has " +
                          std::to_string(g.edge_count()) + " edges");
}

VertexField divergence(const OrientedGraph& g, const EdgeField& h) {
  require_size(g, h);
  VertexField out(g.vertex_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    out[ed.head] += h[e];
    out[ed.tail] -= h[e];
  }
  return out;
}

EdgeField divergence_adjoint(const OrientedGraph& g, const VertexField& w) {
  require_size(g, w);
  EdgeField out(g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    out[e] = w[ed.head] - w[ed.tail];
  }
  return out;
}

double total_variation(const OrientedGraph& g, const VertexField& u) {
  require_size(g, u);
  double s = 0.0;
  for (const Edge& ed : g.edges()) s += std::abs(u[ed.head] - u[ed.tail]);
  return s;
}

SignPattern sign_pattern(const OrientedGraph& g, const VertexField& u, const Tolerances& tol) {
  require_size(g, u);
  const double thr = tol.flat_threshold(u.span());
  SignPattern p;
  p.labels.reserve(g.edge_count());
  for (const Edge& ed : g.edges()) {
    const double d = u[ed.tail] - u[ed.head];
    p.labels.push_back(std::abs(d) <= thr ? 0 : (d > 0 ? 1 : -1));
  }
  return p;
}

OrientedGraph reverse_edges(const OrientedGraph& g, std::span<const std::size_t> which) {
  std::vector<Edge> edges = g.edges();
  for (std::size_t e : which) std::swap(edges.at(e).tail, edges.at(e).head);
  return OrientedGraph(g.vertex_count(), std::move(edges), g.names());
}

}  // namespace tvg
