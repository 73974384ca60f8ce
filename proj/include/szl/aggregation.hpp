#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "szl/markov.hpp"
#include "szl/szegedy.hpp"

namespace szl {

inline constexpr double kConsistencyTol = 1e-9;

/// Outcome of the three conditions that make quantization commute with
/// lumping: weak reversibility, the four-cycle product identity inside a
/// block pair, and the triangle ratio identity across three blocks.
struct ConsistencyReport {
  struct Check {
    bool passed = true;
    std::vector<Vertex> witness;  // offending vertices, in equation order
    double lhs = 0.0;
    double rhs = 0.0;
  };

  Check weak_reversibility;
  Check cycle_condition;
  Check triangle_condition;

  bool all_passed() const noexcept {
    return weak_reversibility.passed && cycle_condition.passed && triangle_condition.passed;
  }
};

/// `p_lumped` must be the lump of `p` under `part` (vertices named by the
/// partition's block names). Products are compared with relative tolerance.
ConsistencyReport check_conditions(const StochasticMatrix& p, const VertexPartition& part,
                                   const StochasticMatrix& p_lumped, double tol = kConsistencyTol);

/// Linking coefficients s_{iv}, one per (vertex, block) pair for which the
/// vertex has a positive transition into the block.
class LinkingCoefficients {
 public:
  LinkingCoefficients() = default;
  LinkingCoefficients(std::vector<Vertex> vertices, std::vector<std::string> blocks,
                      std::map<std::pair<std::size_t, std::size_t>, double> values,
                      std::vector<std::string> warnings = {});

  std::optional<double> get(std::size_t vertex, std::size_t block) const;
  /// Throws UnknownVertex / InvalidPartition on unknown labels, and
  /// InconsistentConstraints when the pair carries no coefficient.
  double at(std::string_view vertex, std::string_view block) const;

  const std::map<std::pair<std::size_t, std::size_t>, double>& values() const noexcept {
    return values_;
  }
  const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
  const std::vector<std::string>& blocks() const noexcept { return blocks_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  std::vector<Vertex> vertices_;
  std::vector<std::string> blocks_;
  std::map<std::pair<std::size_t, std::size_t>, double> values_;
  std::vector<std::string> warnings_;
};

struct LinkingOptions {
  double tol = kConsistencyTol;
  /// Node (vertex, block name) seeded first; defaults to the first node in
  /// scan order. The normalized result does not depend on the seed.
  std::optional<std::pair<Vertex, std::string>> seed;
};

/// Solves for nonnegative linking coefficients by propagating the row move
/// s_iv sqrt(P~_uv) = s_iw sqrt(P~_uw) and the swap move
/// s_iv sqrt(P_ij) = s_ju sqrt(P_ji) through the constraint graph on
/// (vertex, block) nodes, checking every closing edge, then normalizing each
/// connected component so that P~_uv * sum_{i in u} s_iv^2 = 1.
///
/// Throws InconsistentConstraints with the violated closing edge and
/// NormalizationImpossible when a component owns no complete block pair.
LinkingCoefficients solve_linking(const StochasticMatrix& p, const VertexPartition& part,
                                  const StochasticMatrix& p_lumped,
                                  const LinkingOptions& options = {});

/// States |u,v> = sum s_iv sqrt(P_ij) |i>(x)|j> on the full operator's arc
/// basis, one per block pair with P~_uv > 0, ordered by (u, v).
struct AggregatedBasis {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::string> block_names;
  std::vector<WalkerState> states;

  std::optional<std::size_t> find(std::size_t u, std::size_t v) const;
  std::size_t size() const noexcept { return pairs.size(); }
};

/// Throws NotUnit if some state fails to normalize within 1e-10.
AggregatedBasis aggregated_basis(const SzegedyOperator& op, const VertexPartition& part,
                                 const StochasticMatrix& p_lumped, const LinkingCoefficients& s);

/// Lifts a state of the lumped walk to the full space through the
/// correspondence |u>(x)|v> <-> |u,v>. Throws BasisMismatch when an occupied
/// lumped arc has no aggregated state.
WalkerState lift(const WalkerState& lumped_state, const AggregatedBasis& basis);

struct ReductionResiduals {
  double projection = 0.0;    // || Pi|u,v> - sqrt(P~_uv) phi_u ||
  double swap = 0.0;          // || S|u,v> - |v,u> ||
  double intertwining = 0.0;  // || U|u,v> - lift(U~ |u>(x)|v>) ||

  double max() const noexcept;
};

/// Throws BasisMismatch when the aggregated basis does not match the lumped
/// operator's arcs.
ReductionResiduals verify_reduction(const SzegedyOperator& op, const AggregatedBasis& basis,
                                    const SzegedyOperator& lumped_op);

}  // namespace szl
