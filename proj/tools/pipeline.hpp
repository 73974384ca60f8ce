#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "szl/aggregation.hpp"
#include "szl/cmv.hpp"
#include "szl/markov.hpp"

namespace szl::cli {

struct Config {
  std::string command;  // gen lump quantize aggregate cmv simulate verify
  std::string graph;    // family name or path to a graph JSON
  std::string matrix;   // path to a StochasticMatrix JSON
  std::string partition;
  int n = 3;
  int radius = 2;
  int generators = 2;
  bool involutive = false;
  double tol_lump = kLumpTol;
  double tol_consistency = kConsistencyTol;
  double tol_dep = kDependenceTol;
  int steps = 10;
  std::string initial;
  std::string out;
  std::string format;  // json | csv; per-command default when empty
  std::string route = "lumped";
  bool geronimus = false;
  std::string suite = "golden";
};

/// Exit status 0 on success, 1 on domain errors, 2 on usage errors.
int run(const Config& config, std::ostream& out, std::ostream& err);

/// Parses argv-style arguments (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace szl::cli
