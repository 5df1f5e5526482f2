/**
 * @file commands.hpp
 * @brief Subcommands of the tvgraph tool. Each returns a process exit code.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tvgraph/graph.hpp"

namespace tvg::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kInvalidFlags = 2,
  kParseError = 3,
  kNonConvergence = 4,
  kVerificationFailed = 5,
};

struct CommonOptions {
  std::vector<std::string> inputs;
  std::string instance;  // built-in name, used when no input file is given
  std::string output;    // empty: stdout
  Tolerances tol;
};

int cmd_rof(const CommonOptions& opts, std::optional<double> alpha, bool path_mode);
int cmd_flow(const CommonOptions& opts, std::optional<double> t_end, bool full);
int cmd_compare(const CommonOptions& opts, const std::vector<double>& grid);
int cmd_verify(const CommonOptions& opts, const std::string& mode, double alpha,
               std::size_t batch_size, std::uint64_t seed);
int cmd_emit_instance(const CommonOptions& opts);

}  // namespace tvg::cli
