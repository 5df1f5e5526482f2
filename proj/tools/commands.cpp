#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "problem_file.hpp"
#include "tvgraph/analysis.hpp"
#include "tvgraph/flow.hpp"
#include "tvgraph/minimality.hpp"
#include "tvgraph/rof.hpp"

namespace tvg::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Instance load(const CommonOptions& opts) {
  if (!opts.inputs.empty()) return read_problem(opts.inputs.front());
  if (!opts.instance.empty()) {
    try {
      return builtin_instance(opts.instance);
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
  }
  throw UsageError("an --input file or --instance name is required");
}

void write(const CommonOptions& opts, const std::string& text) {
  if (opts.output.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(opts.output, std::ios::binary);
  if (!out) throw UsageError("cannot write " + opts.output);
  out << text;
}

// Runs a command body and maps exceptions onto exit codes.
template <class Body>
int guarded(Body body) {
  try {
    return body();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidFlags;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const NonConvergence& e) {
    std::cerr << "nonconvergence: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const PathError& e) {
    std::cerr << "nonconvergence: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidFlags;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

TrajectoryTable table_for(const Instance& inst, const char* kind, const char* parameter) {
  TrajectoryTable t;
  t.kind = kind;
  t.parameter = parameter;
  for (std::size_t v = 0; v < inst.graph.vertex_count(); ++v)
    t.vertices.push_back(inst.graph.vertex_name(v));
  return t;
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

const char* membership_name(Membership m) {
  switch (m) {
    case Membership::Member:
      return "member";
    case Membership::NotMember:
      return "not_member";
    case Membership::SolverFailure:
      return "solver_failure";
  }
  return "unknown";
}

}  // namespace

int cmd_rof(const CommonOptions& opts, std::optional<double> alpha, bool path_mode) {
  return guarded([&] {
    if (alpha.has_value() == path_mode) throw UsageError("give exactly one of --alpha or --path");
    const Instance inst = load(opts);
    TrajectoryTable table = table_for(inst, "rof", "alpha");
    if (path_mode) {
      const PiecewiseAffinePath path = rof_path(inst.graph, inst.data, opts.tol);
      for (const AffineSegment& s : path.segments()) table.add_row(s.start, s.value);
      table.breakpoints = path.interior_breakpoints();
    } else {
      if (!(*alpha >= 0.0)) throw UsageError("--alpha must be >= 0");
      table.add_row(*alpha, rof_solve(inst.graph, inst.data, *alpha, opts.tol).u);
    }
    write(opts, table.to_text());
    return static_cast<int>(kOk);
  });
}

int cmd_flow(const CommonOptions& opts, std::optional<double> t_end, bool full) {
  return guarded([&] {
    if (t_end.has_value() == full) throw UsageError("give exactly one of --t-end or --full");
    if (t_end && !(*t_end >= 0.0)) throw UsageError("--t-end must be >= 0");
    const Instance inst = load(opts);
    const FlowTrajectory traj = flow_solve(inst.graph, inst.data, opts.tol);
    TrajectoryTable table = table_for(inst, "flow", "t");
    for (const AffineSegment& s : traj.path.segments())
      if (full || s.start < *t_end) table.add_row(s.start, s.value);
    if (t_end && (table.parameters.empty() || *t_end > table.parameters.back()))
      table.add_row(*t_end, traj.at(*t_end));
    for (double b : traj.path.interior_breakpoints())
      if (full || b <= *t_end) table.breakpoints.push_back(b);
    write(opts, table.to_text());
    return static_cast<int>(kOk);
  });
}

int cmd_compare(const CommonOptions& opts, const std::vector<double>& grid) {
  return guarded([&] {
    if (grid.empty()) throw UsageError("--grid needs at least one alpha");
    for (double a : grid)
      if (!(a > 0.0)) throw UsageError("grid values must be > 0");
    const Instance inst = load(opts);
    const OrientedGraph& g = inst.graph;
    const FlowTrajectory traj = flow_solve(g, inst.data, opts.tol);
    const PiecewiseAffinePath path = rof_path(g, inst.data, opts.tol);
    const double mean_norm = norm2(mean_field(inst.data).span());
    const double data_norm = norm2(inst.data.span());
    const double equal_tol = 1e-6 * std::max(1.0, norm_inf(inst.data.span()));

    std::string out;
    for (double a : grid) {
      const EquivalenceReport rep = equivalence_report(g, inst.data, a, traj, opts.tol);
      const double nr = norm2(rep.rof.span()), nf = norm2(rep.flow.span());
      const double slack = 1e-8 * std::max(1.0, data_norm);
      const bool ordered = mean_norm <= nr + slack && nr <= nf + slack && nf <= data_norm + slack;
      out += "alpha " + format_double(a);
      out += " equal " + std::string(yes_no(rep.linf_distance <= equal_tol));
      out += " linf " + format_double(rep.linf_distance);
      out += " l2 " + format_double(rep.l2_distance);
      out += " membership " + std::string(membership_name(rep.membership));
      out += " sufficient " + std::string(yes_no(rep.sufficient_condition));
      out += " first_segment " + std::string(yes_no(rep.first_segment));
      out += " rof_jumps " + std::to_string(jump_set(g, rep.rof, opts.tol).size());
      out += " flow_jumps " + std::to_string(jump_set(g, rep.flow, opts.tol).size());
      out += " norm_order " + std::string(ordered ? "ok" : "violated") + "\n";
    }
    out += "rof_stationary " + format_double(path.last_breakpoint()) + "\n";
    out += "flow_stationary " + format_double(traj.stationary_time()) + "\n";
    write(opts, out);
    return static_cast<int>(kOk);
  });
}

int cmd_verify(const CommonOptions& opts, const std::string& mode, double alpha,
               std::size_t batch_size, std::uint64_t seed) {
  return guarded([&] {
    if (mode == "counterexample") {
      const HarnessReport rep = counterexample_harness(opts.tol);
      write(opts, rep.to_text());
      return static_cast<int>(rep.all_pass() ? kOk : kVerificationFailed);
    }
    if (!(alpha >= 0.0)) throw UsageError("--alpha must be >= 0");
    if (mode == "phimin") {
      const Instance inst = opts.inputs.empty() && opts.instance.empty()
                                ? builtin_instance("figure1")
                                : load(opts);
      const auto [lo, hi] = std::minmax_element(inst.data.begin(), inst.data.end());
      const PhiCatalog catalog = standard_phi_catalog(*lo, *hi);
      const MinimalityReport rep =
          verify_universal_minimality(inst.graph, inst.data, alpha, catalog, opts.tol);
      std::string out = "alpha " + format_double(alpha) + "\n";
      for (const PhiGap& e : rep.entries) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s %s objective %.17g oracle %.17g gap %.3e%s%s\n",
                      e.ok ? "PASS" : "FAIL", e.phi.c_str(), e.objective, e.oracle, e.gap,
                      e.error.empty() ? "" : " error ", e.error.c_str());
        out += buf;
      }
      write(opts, out);
      return static_cast<int>(rep.all_ok() ? kOk : kVerificationFailed);
    }
    if (mode == "isotropic") {
      std::vector<VertexField> batch;
      OrientedGraph g = cartesian_graph(3, 3);
      if (!opts.inputs.empty()) {
        g = read_problem(opts.inputs.front()).graph;
        for (const std::string& path : opts.inputs) {
          Instance inst = read_problem(path);
          if (!(inst.graph == g)) throw ParseError(path + ": batch files must share one graph");
          batch.push_back(std::move(inst.data));
        }
      } else {
        std::mt19937_64 rng(seed);
        for (std::size_t k = 0; k < batch_size; ++k) batch.push_back(random_field(9, 0.0, 10.0, rng));
      }
      double lo = 0.0, hi = 0.0;
      for (const VertexField& f : batch) {
        const auto [a, b] = std::minmax_element(f.begin(), f.end());
        lo = std::min(lo, *a);
        hi = std::max(hi, *b);
      }
      const PhiCatalog catalog = standard_phi_catalog(lo - 5.0, hi + 5.0);
      const IsotropicFailureReport iso =
          demonstrate_isotropic_failure(g, batch, alpha, catalog, opts.tol);
      const IsotropicFailureReport aniso = demonstrate_isotropic_failure(
          g, batch, alpha, catalog, opts.tol, 1e-5, TvModel::Anisotropic);
      std::string out = "fields " + std::to_string(batch.size()) + "\n";
      if (iso.witness) {
        out += "isotropic witness field " + std::to_string(iso.witness->data_index) + " phi " +
               iso.witness->phi + " objective " + format_double(iso.witness->objective) +
               " oracle " + format_double(iso.witness->oracle) + " margin " +
               format_double(iso.witness->margin) + "\n";
      } else {
        out += "isotropic no witness in catalog\n";
      }
      out += std::string("anisotropic control ") +
             (aniso.witness ? "witness found (unexpected)" : "no witness") + "\n";
      write(opts, out);
      return static_cast<int>(aniso.witness ? kVerificationFailed : kOk);
    }
    throw UsageError("unknown verify mode '" + mode + "'");
  });
}

int cmd_emit_instance(const CommonOptions& opts) {
  return guarded([&] {
    write(opts, emit_problem(load(opts)));
    return static_cast<int>(kOk);
  });
}

}  // namespace tvg::cli
