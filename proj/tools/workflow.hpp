#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "szl/aggregation.hpp"
#include "szl/cmv.hpp"
#include "szl/graphs.hpp"
#include "szl/markov.hpp"
#include "szl/szegedy.hpp"

namespace szl::cli {

/// A chain together with where it came from.
struct Problem {
  std::optional<GraphSpec> spec;  // set for generated graphs
  DirectedGraph graph;            // support graph of `chain`
  StochasticMatrix chain;
};

Problem problem_from_spec(const GraphSpec& spec);
Problem problem_from_matrix(StochasticMatrix chain);

/// distance:<root> | distance | file:<path> | singletons
VertexPartition parse_partition(std::string_view text, const Problem& problem);

/// Default root for the graph: the canonical one for generated families,
/// otherwise the first vertex.
std::string default_root(const Problem& problem);

/// Name of the block containing `label`, or `label` itself if it names a block.
std::string block_for(const VertexPartition& part, std::string_view label);

/// Lumped chain, its partition and the data needed for the full-space route.
struct Aggregation {
  VertexPartition part;
  StochasticMatrix lumped;
  ConsistencyReport report;
  LinkingCoefficients linking;
  AggregatedBasis basis;
};

/// Throws NotLumpable or the linking errors.
Aggregation aggregate(const SzegedyOperator& full, const VertexPartition& part, double tol_lump,
                      double tol_consistency);

/// Lift of phi_u (u = `block`) of the lumped walk to the full space. For a
/// singleton block this is phi_i itself.
Eigen::VectorXd lifted_phi(const Aggregation& agg, std::string_view block);

/// Verblunsky coefficients by the recurrence on the lumped walk from phi_block.
VerblunskySequence alphas_lumped(const StochasticMatrix& lumped, std::string_view block,
                                 double dep_tol = kDependenceTol);

/// Same, on the full walk starting from the lifted phi_block.
VerblunskySequence alphas_full(const SzegedyOperator& full, const Aggregation& agg,
                               std::string_view block, double dep_tol = kDependenceTol);

/// Last index of a free-group ball sequence unaffected by the truncation.
std::optional<std::size_t> trusted_bound(const Problem& problem);

}  // namespace szl::cli
