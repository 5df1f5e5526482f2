#include "problem_file.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tvg::cli {

using nlohmann::json;

Instance parse_problem(const std::string& text, const std::string& name) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(name + ": " + e.what());
  }
  try {
    const auto n = doc.at("vertex_count").get<std::size_t>();
    std::vector<Edge> edges;
    for (const auto& pair : doc.at("edges")) {
      if (!pair.is_array() || pair.size() != 2) throw ParseError(name + ": edge must be [tail, head]");
      edges.push_back({pair[0].get<std::size_t>(), pair[1].get<std::size_t>()});
    }
    std::vector<std::string> names;
    if (doc.contains("names")) names = doc["names"].get<std::vector<std::string>>();
    VertexField data(doc.at("data").get<std::vector<double>>());
    OrientedGraph g(n, std::move(edges), std::move(names));
    if (doc.contains("cartesian")) {
      const json& c = doc["cartesian"];
      CartesianLayout layout{c.at("rows").get<std::size_t>(), c.at("cols").get<std::size_t>(), {}};
      if (c.contains("grid")) layout.vertex_at = c["grid"].get<std::vector<std::size_t>>();
      g = g.with_cartesian(layout);
    }
    require_size(g, data);
    return Instance{doc.value("name", name), std::move(g), std::move(data)};
  } catch (const json::exception& e) {
    throw ParseError(name + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(name + ": " + e.what());
  }
}

Instance read_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str(), path);
}

std::string emit_problem(const Instance& inst) {
  const OrientedGraph& g = inst.graph;
  json doc;
  doc["name"] = inst.name;
  doc["vertex_count"] = g.vertex_count();
  doc["names"] = g.names();
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.tail, e.head});
  doc["edges"] = edges;
  doc["data"] = inst.data.values();
  if (g.cartesian()) {
    doc["cartesian"] = {{"rows", g.cartesian()->rows},
                        {"cols", g.cartesian()->cols},
                        {"grid", g.cartesian()->vertex_at}};
  }
  return doc.dump(2) + "\n";
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void TrajectoryTable::add_row(double p, const VertexField& u) {
  parameters.push_back(p);
  rows.push_back(u);
}

std::string TrajectoryTable::to_text() const {
  for (std::size_t k = 1; k < parameters.size(); ++k)
    if (!(parameters[k] > parameters[k - 1]))
      throw InvalidArgument("trajectory parameters must be strictly increasing");
  std::string out = "kind " + kind + "\ncolumns " + parameter;
  for (const std::string& v : vertices) out += " " + v;
  out += "\nrows " + std::to_string(rows.size()) + "\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out += format_double(parameters[k]);
    for (double x : rows[k]) out += " " + format_double(x);
    out += "\n";
  }
  out += "breakpoints " + std::to_string(breakpoints.size()) + "\n";
  for (double b : breakpoints) out += format_double(b) + "\n";
  return out;
}

}  // namespace tvg::cli
