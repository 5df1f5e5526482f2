/**
 * @file problem_file.hpp
 * @brief JSON problem files and the plain-text trajectory table.
 */
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tvgraph/graph.hpp"
#include "tvgraph/instances.hpp"

namespace tvg::cli {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"vertex_count", "names"?, "edges": [[tail, head], ...], "data",
///  "cartesian"?: {"rows", "cols", "grid"?}}
Instance parse_problem(const std::string& text, const std::string& name = "input");
Instance read_problem(const std::string& path);
std::string emit_problem(const Instance& inst);

struct TrajectoryTable {
  std::string kind;       // "rof" or "flow"
  std::string parameter;  // "alpha" or "t"
  std::vector<std::string> vertices;
  std::vector<double> parameters;
  std::vector<VertexField> rows;
  std::vector<double> breakpoints;

  void add_row(double p, const VertexField& u);
  /// Throws InvalidArgument if the parameter column is not strictly increasing.
  std::string to_text() const;
};

/// %.17g
std::string format_double(double x);

}  // namespace tvg::cli
