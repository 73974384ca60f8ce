#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "szl/graphs.hpp"

namespace szl::golden {

/// A lumped Platonic walk with its reference data.
struct Case {
  std::string name;
  GraphSpec graph;
  /// Explicit partition; distance partition from the canonical root if unset.
  std::optional<std::vector<std::vector<Vertex>>> blocks;
  std::vector<std::string> block_names;
  std::string root_block;
  Eigen::MatrixXd lumped;
  std::vector<double> alphas;
};

const std::vector<Case>& platonic_cases();

/// The straightened path chain of the alternative hexahedron partition.
Eigen::MatrixXd straightened_chain();

/// Blocks K, L, M of the hexahedron that fail lumpability.
std::vector<std::vector<Vertex>> non_lumpable_blocks();

struct CaseResult {
  std::string name;
  bool passed = false;
  double residual = 0.0;   // worst deviation over the checks of the case
  double tolerance = 0.0;
  nlohmann::json detail;
};

/// Every reference case in order, each evaluated independently.
std::vector<CaseResult> run_suite();

nlohmann::json to_json(const std::vector<CaseResult>& results);

}  // namespace szl::golden
