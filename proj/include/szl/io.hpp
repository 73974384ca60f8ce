#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "szl/aggregation.hpp"
#include "szl/analysis.hpp"
#include "szl/cmv.hpp"
#include "szl/graphs.hpp"
#include "szl/markov.hpp"
#include "szl/szegedy.hpp"

namespace szl::io {

using Json = nlohmann::json;

/// Keys sorted, floats with 17 significant digits, trailing newline.
std::string dump(const Json& j, int indent = 2);
/// Throws ParseError.
Json parse(std::string_view text);
std::string format_double(double x);

Json to_json(const DirectedGraph& g);
DirectedGraph graph_from_json(const Json& j);

Json to_json(const VertexPartition& part);
VertexPartition partition_from_json(const Json& j);

Json to_json(const StochasticMatrix& p);
StochasticMatrix matrix_from_json(const Json& j);

Json to_json(const WalkerState& s);
WalkerState walker_state_from_json(const Json& j, std::shared_ptr<const ArcBasis> basis);

Json to_json(const LinkingCoefficients& s);
LinkingCoefficients linking_from_json(const Json& j);

Json to_json(const ConsistencyReport& report);
ConsistencyReport consistency_from_json(const Json& j);

Json to_json(const VerblunskySequence& v);
VerblunskySequence verblunsky_from_json(const Json& j);

Json to_json(const BirthDeathChain& c);
BirthDeathChain birth_death_from_json(const Json& j);

Json to_json(const DensityMatrix& d);

/// vertex,probability
std::string distribution_csv(const Distribution& d);
Distribution distribution_from_csv(std::string_view text);

/// Dense rows, no header.
std::string matrix_csv(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_csv(std::string_view text);

/// step,vertex,probability
std::string time_series_csv(const std::vector<Distribution>& series);
std::vector<Distribution> time_series_from_csv(std::string_view text);

}  // namespace szl::io
