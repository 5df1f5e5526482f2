/**
 * @file graph.hpp
 * @brief Oriented graphs, vertex/edge fields, divergence and total variation.
 *
 * An edge (tail, head) is directed from tail to head. The divergence of an
 * edge flow at a vertex is the sum over incoming edges minus the sum over
 * outgoing edges; its negative adjoint is the edge difference
 * u(head) - u(tail). Total variation is the sum of absolute edge
 * differences and does not depend on the orientation.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tvg {

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Edge {
  std::size_t tail = 0;
  std::size_t head = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Row/column layout of an M x N Cartesian graph. `vertex_at[(i-1)*cols + (j-1)]`
/// is the vertex index of v_{i,j}.
struct CartesianLayout {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> vertex_at;

  std::size_t vertex(std::size_t i, std::size_t j) const {
    return vertex_at[(i - 1) * cols + (j - 1)];
  }
  friend bool operator==(const CartesianLayout&, const CartesianLayout&) = default;
};

/// Connected oriented graph without self-loops, duplicates or antiparallel
/// pairs. Edge order is the construction order and is never changed.
class OrientedGraph {
 public:
  OrientedGraph(std::size_t vertex_count, std::vector<Edge> edges,
                std::vector<std::string> names = {});

  /// Tags the graph as Cartesian. Throws unless the edge set is exactly the
  /// grid edge set of `layout` (either orientation per edge).
  OrientedGraph with_cartesian(CartesianLayout layout) const;

  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t e) const { return edges_[e]; }
  const std::vector<std::string>& names() const { return names_; }
  std::string vertex_name(std::size_t v) const;
  std::size_t degree(std::size_t v) const { return degree_[v]; }
  std::size_t max_degree() const { return max_degree_; }

  /// Index of the edge joining a and b in either orientation.
  std::optional<std::size_t> find_edge(std::size_t a, std::size_t b) const;
  std::optional<std::size_t> find_vertex(const std::string& name) const;

  const std::optional<CartesianLayout>& cartesian() const { return cartesian_; }

  friend bool operator==(const OrientedGraph& a, const OrientedGraph& b) {
    return a.vertex_count_ == b.vertex_count_ && a.edges_ == b.edges_ &&
           a.names_ == b.names_ && a.cartesian_ == b.cartesian_;
  }

 private:
  std::size_t vertex_count_;
  std::vector<Edge> edges_;
  std::vector<std::string> names_;
  std::vector<std::size_t> degree_;
  std::size_t max_degree_ = 0;
  std::optional<CartesianLayout> cartesian_;
};

namespace detail {
template <class Tag>
class Field {
 public:
  Field() = default;
  explicit Field(std::size_t n, double value = 0.0) : values_(n, value) {}
  explicit Field(std::vector<double> values) : values_(std::move(values)) {}
  Field(std::initializer_list<double> values) : values_(values) {}

  std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<double> span() { return values_; }
  std::span<const double> span() const { return values_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  Field& operator+=(const Field& o) {
    check(o);
    for (std::size_t i = 0; i < size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  Field& operator-=(const Field& o) {
    check(o);
    for (std::size_t i = 0; i < size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  Field& operator*=(double s) {
    for (double& x : values_) x *= s;
    return *this;
  }
  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double s, Field a) { return a *= s; }
  friend Field operator-(Field a) { return a *= -1.0; }
  friend bool operator==(const Field&, const Field&) = default;

 private:
  void check(const Field& o) const {
    if (o.size() != size()) throw InvalidArgument("field length mismatch");
  }
  std::vector<double> values_;
};
}  // namespace detail

struct VertexTag {};
struct EdgeTag {};
/// One real value per vertex.
using VertexField = detail::Field<VertexTag>;
/// One real value per edge, indexed by edge position.
using EdgeField = detail::Field<EdgeTag>;

/// Per-edge label sgn(u(tail) - u(head)) in {-1, 0, +1}.
struct SignPattern {
  std::vector<std::int8_t> labels;
  friend bool operator==(const SignPattern&, const SignPattern&) = default;
};

struct Tolerances {
  double flat_tol = 1e-7;
  double solve_tol = 1e-9;
  double event_tol = 1e-9;
  /// Magnitude that flat_tol is relative to. Zero means "use the range of
  /// the field being classified, but at least 1e-6 times its largest
  /// absolute value".
  double flat_scale = 0.0;

  /// Absolute threshold for treating a difference as zero.
  double flat_threshold(std::span<const double> u) const;
  void validate() const;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);
double norm1(std::span<const double> a);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
double field_range(std::span<const double> a);
double sum(std::span<const double> a);
/// Constant field at the average of `f`.
VertexField mean_field(const VertexField& f);

VertexField divergence(const OrientedGraph& g, const EdgeField& h);
/// Adjoint of divergence: (div^T w)(e) = w(head) - w(tail).
EdgeField divergence_adjoint(const OrientedGraph& g, const VertexField& w);
double total_variation(const OrientedGraph& g, const VertexField& u);
SignPattern sign_pattern(const OrientedGraph& g, const VertexField& u, const Tolerances& tol);

/// Copy of `g` with the listed edges reversed.
OrientedGraph reverse_edges(const OrientedGraph& g, std::span<const std::size_t> which);

void require_size(const OrientedGraph& g, const VertexField& u);
void require_size(const OrientedGraph& g, const EdgeField& h);

}  // namespace tvg
