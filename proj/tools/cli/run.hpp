#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace ramulus::cli {

enum class Command { Solve, FlatNorm, Dyadic, Perturb, Classify, Stability, Validate };

std::optional<Command> parse_command(const std::string& name);

struct RunConfig {
  Command command = Command::Solve;
  double alpha = 0.5;
  std::string input_path;           // "-" reads standard input
  std::string output_path = "-";    // "-" writes standard output
  std::optional<std::string> svg_path;
  std::uint64_t seed = 12345;
  int atom_cap = 8;
  int depth = 6;
  int k = 8;
  int n = 16;
  double gap_tol = 1e-6;
  double placement_tol = 1e-9;
  double stability_tol = 1e-4;
  /// "json" or "csv"; empty picks the command default (csv for dyadic).
  std::string format;
};

/// Runs one command. Exit codes: 0 success, 2 domain/precondition/input
/// errors, 3 capacity errors. Errors are reported on `err` as a JSON
/// object {"error": kind, "message": text}.
int run(const RunConfig& config, std::ostream& err);

}  // namespace ramulus::cli
