#include "workflow.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "szl/errors.hpp"
#include "szl/io.hpp"

namespace szl::cli {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Problem problem_from_spec(const GraphSpec& spec) {
  Problem p{spec, generate(spec), {}};
  p.chain = homogeneous_walk(p.graph);
  return p;
}

Problem problem_from_matrix(StochasticMatrix chain) {
  std::vector<std::pair<Vertex, Vertex>> arcs;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    for (const auto& e : chain.row(i)) arcs.emplace_back(chain.vertex(i), chain.vertex(e.col));
  }
  Problem p{std::nullopt, DirectedGraph(chain.vertices(), std::move(arcs)), std::move(chain)};
  return p;
}

VertexPartition parse_partition(std::string_view text, const Problem& problem) {
  if (text == "singletons") return VertexPartition::singletons(problem.chain.vertices());
  if (text == "distance") return distance_partition(problem.graph, default_root(problem));
  if (text.starts_with("distance:")) return distance_partition(problem.graph, text.substr(9));
  if (text.starts_with("file:")) {
    return io::partition_from_json(io::parse(slurp(std::string(text.substr(5)))));
  }
  throw Error(ErrorKind::InvalidParams, "unknown partition '" + std::string(text) + "'");
}

std::string default_root(const Problem& problem) {
  if (problem.spec) return canonical_root(*problem.spec);
  return problem.chain.vertex(0);
}

std::string block_for(const VertexPartition& part, std::string_view label) {
  if (part.block_named(label)) return std::string(label);
  for (std::size_t b = 0; b < part.size(); ++b) {
    for (const auto& v : part.blocks()[b]) {
      if (v == label) return part.name(b);
    }
  }
  throw Error(ErrorKind::UnknownVertex, "'" + std::string(label) + "' is neither a block nor a vertex");
}

Aggregation aggregate(const SzegedyOperator& full, const VertexPartition& part, double tol_lump,
                      double tol_consistency) {
  Aggregation agg{part, lumped_or_throw(lump(full.chain(), part, tol_lump)), {}, {}, {}};
  agg.report = check_conditions(full.chain(), part, agg.lumped, tol_consistency);
  LinkingOptions options;
  options.tol = tol_consistency;
  agg.linking = solve_linking(full.chain(), part, agg.lumped, options);
  agg.basis = aggregated_basis(full, part, agg.lumped, agg.linking);
  return agg;
}

Eigen::VectorXd lifted_phi(const Aggregation& agg, std::string_view block) {
  const SzegedyOperator lumped_op(agg.lumped);
  return lift(lumped_op.phi(block), agg.basis).amplitudes();
}

VerblunskySequence alphas_lumped(const StochasticMatrix& lumped, std::string_view block,
                                 double dep_tol) {
  const SzegedyOperator op(lumped);
  return verblunsky_via_recurrence(op, block, dep_tol).sequence;
}

VerblunskySequence alphas_full(const SzegedyOperator& full, const Aggregation& agg,
                               std::string_view block, double dep_tol) {
  return verblunsky_via_recurrence(full.swap_map(), full.reflection_map(), lifted_phi(agg, block),
                                   dep_tol)
      .sequence;
}

std::optional<std::size_t> trusted_bound(const Problem& problem) {
  if (!problem.spec || problem.spec->family != "free_ball") return std::nullopt;
  const int r = std::max(problem.spec->radius - 2, 0);
  return static_cast<std::size_t>(2 * r);
}

}  // namespace szl::cli
