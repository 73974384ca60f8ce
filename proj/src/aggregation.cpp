#include "szl/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>

#include "szl/errors.hpp"

namespace szl {

namespace {

bool close_relative(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

/// Lumped-matrix lookups keyed by partition block index.
class LumpedView {
 public:
  LumpedView(const StochasticMatrix& lumped, const VertexPartition& part) : lumped_(lumped) {
    if (lumped.size() != part.size()) {
      throw Error(ErrorKind::BasisMismatch, "lumped matrix size differs from the partition");
    }
    index_.reserve(part.size());
    for (const auto& name : part.names()) index_.push_back(lumped.require_index(name));
  }

  double operator()(std::size_t u, std::size_t v) const { return lumped_.at(index_[u], index_[v]); }

 private:
  const StochasticMatrix& lumped_;
  std::vector<std::size_t> index_;
};

}  // namespace

ConsistencyReport check_conditions(const StochasticMatrix& p, const VertexPartition& part,
                                   const StochasticMatrix& p_lumped, double tol) {
  const BlockIndex idx = resolve(part, p.vertices());
  const LumpedView pt(p_lumped, part);
  const std::size_t n = p.size();
  ConsistencyReport report;

  for (std::size_t i = 0; i < n && report.weak_reversibility.passed; ++i) {
    for (const auto& e : p.row(i)) {
      const double back = p.at(e.col, i);
      if (back <= 0.0) {
        report.weak_reversibility = {false, {p.vertex(i), p.vertex(e.col)}, e.p, back};
        break;
      }
    }
  }

  auto positive = [&](std::size_t a, std::size_t b) { return p.at(a, b) > 0.0; };

  // P_{i1 j1} P_{j1 i2} P_{i2 j2} P_{j2 i1} = P_{i1 j2} P_{j2 i2} P_{i2 j1} P_{j1 i1}
  for (std::size_t i1 = 0; i1 < n && report.cycle_condition.passed; ++i1) {
    const std::size_t u = idx.block_of[i1];
    for (const auto& e1 : p.row(i1)) {
      const std::size_t j1 = e1.col;
      const std::size_t v = idx.block_of[j1];
      if (!positive(j1, i1)) continue;
      for (const auto& e2 : p.row(j1)) {
        const std::size_t i2 = e2.col;
        if (i2 == i1 || idx.block_of[i2] != u || !positive(i2, j1)) continue;
        for (const auto& e3 : p.row(i2)) {
          const std::size_t j2 = e3.col;
          if (j2 == j1 || idx.block_of[j2] != v) continue;
          if (!positive(j2, i2) || !positive(j2, i1) || !positive(i1, j2)) continue;
          const double lhs = p.at(i1, j1) * p.at(j1, i2) * p.at(i2, j2) * p.at(j2, i1);
          const double rhs = p.at(i1, j2) * p.at(j2, i2) * p.at(i2, j1) * p.at(j1, i1);
          if (!close_relative(lhs, rhs, tol)) {
            report.cycle_condition = {
                false, {p.vertex(i1), p.vertex(i2), p.vertex(j1), p.vertex(j2)}, lhs, rhs};
            break;
          }
        }
        if (!report.cycle_condition.passed) break;
      }
      if (!report.cycle_condition.passed) break;
    }
  }

  // (P~uv P~vw P~wu) / (P~uw P~wv P~vu) = (P_ij P_jk P_ki) / (P_ik P_kj P_ji)
  for (std::size_t i = 0; i < n && report.triangle_condition.passed; ++i) {
    for (const auto& eij : p.row(i)) {
      const std::size_t j = eij.col;
      if (j == i || !positive(j, i)) continue;
      for (const auto& ejk : p.row(j)) {
        const std::size_t k = ejk.col;
        if (k == i || k == j || !positive(k, j) || !positive(i, k) || !positive(k, i)) continue;
        const std::size_t u = idx.block_of[i], v = idx.block_of[j], w = idx.block_of[k];
        const double lhs =
            (pt(u, v) * pt(v, w) * pt(w, u)) / (pt(u, w) * pt(w, v) * pt(v, u));
        const double rhs =
            (p.at(i, j) * p.at(j, k) * p.at(k, i)) / (p.at(i, k) * p.at(k, j) * p.at(j, i));
        if (!std::isfinite(lhs) || !close_relative(lhs, rhs, tol)) {
          report.triangle_condition = {false, {p.vertex(i), p.vertex(j), p.vertex(k)}, lhs, rhs};
          break;
        }
      }
      if (!report.triangle_condition.passed) break;
    }
  }
  return report;
}

// LinkingCoefficients ----------------------------------------------------------

LinkingCoefficients::LinkingCoefficients(std::vector<Vertex> vertices,
                                         std::vector<std::string> blocks,
                                         std::map<std::pair<std::size_t, std::size_t>, double> values,
                                         std::vector<std::string> warnings)
    : vertices_(std::move(vertices)),
      blocks_(std::move(blocks)),
      values_(std::move(values)),
      warnings_(std::move(warnings)) {}

std::optional<double> LinkingCoefficients::get(std::size_t vertex, std::size_t block) const {
  auto it = values_.find({vertex, block});
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

double LinkingCoefficients::at(std::string_view vertex, std::string_view block) const {
  auto vi = std::find(vertices_.begin(), vertices_.end(), vertex);
  if (vi == vertices_.end()) {
    throw Error(ErrorKind::UnknownVertex, "no vertex '" + std::string(vertex) + "'");
  }
  auto bi = std::find(blocks_.begin(), blocks_.end(), block);
  if (bi == blocks_.end()) {
    throw Error(ErrorKind::InvalidPartition, "no block '" + std::string(block) + "'");
  }
  auto value = get(static_cast<std::size_t>(vi - vertices_.begin()),
                   static_cast<std::size_t>(bi - blocks_.begin()));
  if (!value) {
    throw Error(ErrorKind::InconsistentConstraints, "no coefficient for (" + std::string(vertex) +
                                                        "," + std::string(block) + ")");
  }
  return *value;
}

LinkingCoefficients solve_linking(const StochasticMatrix& p, const VertexPartition& part,
                                  const StochasticMatrix& p_lumped, const LinkingOptions& options) {
  const BlockIndex idx = resolve(part, p.vertices());
  const LumpedView pt(p_lumped, part);
  const std::size_t n = p.size();
  const std::size_t nb = part.size();

  // Nodes (i, v) for every block v that vertex i can reach in one step.
  struct Node {
    std::size_t vertex;
    std::size_t block;
  };
  std::vector<Node> nodes;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> node_of;
  for (std::size_t i = 0; i < n; ++i) {
    std::set<std::size_t> reach;
    for (const auto& e : p.row(i)) reach.insert(idx.block_of[e.col]);
    for (std::size_t v : reach) {
      node_of.emplace(std::pair{i, v}, nodes.size());
      nodes.push_back({i, v});
    }
  }

  // Edges carry the ratio s_to^2 / s_from^2.
  struct Edge {
    std::size_t to;
    double ratio;
  };
  std::vector<std::vector<Edge>> adj(nodes.size());
  auto connect = [&](std::size_t a, std::size_t b, double ratio) {
    adj[a].push_back({b, ratio});
    adj[b].push_back({a, 1.0 / ratio});
  };

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t u = idx.block_of[i];
    std::optional<std::size_t> prev;
    for (auto it = node_of.lower_bound({i, 0}); it != node_of.end() && it->first.first == i; ++it) {
      const std::size_t w = it->first.second;
      if (pt(u, w) <= 0.0) {
        throw Error(ErrorKind::InconsistentConstraints,
                    "vertex '" + p.vertex(i) + "' reaches block '" + part.name(w) +
                        "' but the lumped probability is zero");
      }
      if (prev) {
        const std::size_t v = nodes[*prev].block;
        connect(*prev, it->second, pt(u, v) / pt(u, w));  // row move
      }
      prev = it->second;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& e : p.row(i)) {
      const std::size_t j = e.col;
      const double back = p.at(j, i);
      if (back <= 0.0) {
        throw Error(ErrorKind::InconsistentConstraints,
                    "P(" + p.vertex(i) + "," + p.vertex(j) + ") > 0 but the reverse vanishes");
      }
      if (j < i) continue;
      const std::size_t a = node_of.at({i, idx.block_of[j]});
      const std::size_t b = node_of.at({j, idx.block_of[i]});
      if (a != b) connect(a, b, e.p / back);  // swap move
    }
  }

  // Breadth-first propagation of squared coefficients per component.
  constexpr auto unseen = static_cast<std::size_t>(-1);
  std::vector<double> sq(nodes.size(), 0.0);
  std::vector<std::size_t> comp(nodes.size(), unseen);
  std::size_t components = 0;

  std::vector<std::size_t> order;
  order.reserve(nodes.size());
  if (options.seed) {
    const std::size_t i = p.require_index(options.seed->first);
    auto b = part.block_named(options.seed->second);
    if (!b) throw Error(ErrorKind::InvalidPartition, "no block '" + options.seed->second + "'");
    auto it = node_of.find({i, *b});
    if (it == node_of.end()) {
      throw Error(ErrorKind::InconsistentConstraints, "seed node has no coefficient");
    }
    order.push_back(it->second);
  }
  for (std::size_t k = 0; k < nodes.size(); ++k) order.push_back(k);

  auto describe = [&](std::size_t k) {
    return "(" + p.vertex(nodes[k].vertex) + "," + part.name(nodes[k].block) + ")";
  };

  for (std::size_t start : order) {
    if (comp[start] != unseen) continue;
    const std::size_t c = components++;
    comp[start] = c;
    sq[start] = 1.0;
    std::deque<std::size_t> queue{start};
    while (!queue.empty()) {
      const std::size_t a = queue.front();
      queue.pop_front();
      for (const auto& edge : adj[a]) {
        const double expected = sq[a] * edge.ratio;
        if (comp[edge.to] == unseen) {
          comp[edge.to] = c;
          sq[edge.to] = expected;
          queue.push_back(edge.to);
        } else if (!close_relative(sq[edge.to], expected, options.tol)) {
          throw Error(ErrorKind::InconsistentConstraints,
                      "closing edge " + describe(a) + " -> " + describe(edge.to) + ": " +
                          fmt(sq[edge.to]) + " vs " + fmt(expected));
        }
      }
    }
  }

  // Normalization: P~_uv * sum_{i in u} s_iv^2 = 1 for every block pair.
  std::vector<std::optional<double>> scale(components);
  std::vector<std::string> warnings;
  struct PairSum {
    std::size_t u, v;
    std::set<std::size_t> comps;
  };
  std::vector<PairSum> pairs;
  for (std::size_t u = 0; u < nb; ++u) {
    for (std::size_t v = 0; v < nb; ++v) {
      if (pt(u, v) <= 0.0) continue;
      PairSum ps{u, v, {}};
      for (std::size_t i : idx.members[u]) {
        auto it = node_of.find({i, v});
        if (it != node_of.end()) ps.comps.insert(comp[it->second]);
      }
      pairs.push_back(std::move(ps));
    }
  }
  auto pair_mass = [&](const PairSum& ps, auto&& weight) {
    double sum = 0.0;
    for (std::size_t i : idx.members[ps.u]) {
      auto it = node_of.find({i, ps.v});
      if (it != node_of.end()) sum += weight(comp[it->second]) * sq[it->second];
    }
    return pt(ps.u, ps.v) * sum;
  };
  for (const auto& ps : pairs) {
    if (ps.comps.size() != 1) continue;
    const std::size_t c = *ps.comps.begin();
    if (!scale[c]) scale[c] = 1.0 / pair_mass(ps, [](std::size_t) { return 1.0; });
  }
  for (std::size_t c = 0; c < components; ++c) {
    if (!scale[c]) {
      std::size_t first = 0;
      while (comp[first] != c) ++first;
      throw Error(ErrorKind::NormalizationImpossible,
                  "component containing " + describe(first) + " owns no complete block pair");
    }
  }
  if (components > 1) {
    warnings.push_back("constraint graph has " + std::to_string(components) +
                       " components; each was normalized separately");
  }
  for (const auto& ps : pairs) {
    const double mass = pair_mass(ps, [&](std::size_t c) { return *scale[c]; });
    if (std::abs(mass - 1.0) > options.tol) {
      const std::string where = "(" + part.name(ps.u) + "," + part.name(ps.v) + ")";
      if (ps.comps.size() > 1) {
        warnings.push_back("block pair " + where + " spans several components; norm " + fmt(mass));
      } else {
        throw Error(ErrorKind::InconsistentConstraints,
                    "block pair " + where + " normalizes to " + fmt(mass));
      }
    }
  }

  std::map<std::pair<std::size_t, std::size_t>, double> values;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    values.emplace(std::pair{nodes[k].vertex, nodes[k].block}, std::sqrt(*scale[comp[k]] * sq[k]));
  }
  return LinkingCoefficients(p.vertices(), part.names(), std::move(values), std::move(warnings));
}

// Aggregated basis ---------------------------------------------------------------

std::optional<std::size_t> AggregatedBasis::find(std::size_t u, std::size_t v) const {
  auto it = std::lower_bound(pairs.begin(), pairs.end(), std::pair{u, v});
  if (it == pairs.end() || *it != std::pair{u, v}) return std::nullopt;
  return static_cast<std::size_t>(it - pairs.begin());
}

AggregatedBasis aggregated_basis(const SzegedyOperator& op, const VertexPartition& part,
                                 const StochasticMatrix& p_lumped, const LinkingCoefficients& s) {
  const StochasticMatrix& p = op.chain();
  const BlockIndex idx = resolve(part, p.vertices());
  const LumpedView pt(p_lumped, part);
  const ArcBasis& arcs = op.basis();

  AggregatedBasis result;
  result.block_names = part.names();
  for (std::size_t u = 0; u < part.size(); ++u) {
    for (std::size_t v = 0; v < part.size(); ++v) {
      if (pt(u, v) <= 0.0) continue;
      WalkerState state(op.basis_ptr());
      for (std::size_t i : idx.members[u]) {
        const auto coeff = s.get(i, v);
        if (!coeff) continue;
        for (const auto& e : p.row(i)) {
          if (idx.block_of[e.col] != v) continue;
          state.amplitudes()(static_cast<Eigen::Index>(arcs.require(i, e.col))) =
              *coeff * std::sqrt(e.p);
        }
      }
      if (std::abs(state.norm() - 1.0) > 1e-10) {
        throw Error(ErrorKind::NotUnit, "aggregated state (" + part.name(u) + "," + part.name(v) +
                                            ") has norm " + fmt(state.norm()));
      }
      result.pairs.emplace_back(u, v);
      result.states.push_back(std::move(state));
    }
  }
  return result;
}

namespace {

/// Lumped vertex index -> partition block index.
std::vector<std::size_t> block_lookup(const AggregatedBasis& basis, const ArcBasis& lumped) {
  std::vector<std::size_t> map;
  map.reserve(lumped.vertex_count());
  for (const auto& name : lumped.vertices()) {
    auto it = std::find(basis.block_names.begin(), basis.block_names.end(), name);
    if (it == basis.block_names.end()) {
      throw Error(ErrorKind::BasisMismatch, "lumped vertex '" + name + "' is not a block name");
    }
    map.push_back(static_cast<std::size_t>(it - basis.block_names.begin()));
  }
  return map;
}

}  // namespace

WalkerState lift(const WalkerState& lumped_state, const AggregatedBasis& basis) {
  if (basis.states.empty()) throw Error(ErrorKind::BasisMismatch, "empty aggregated basis");
  const ArcBasis& lumped = lumped_state.basis();
  const auto blocks = block_lookup(basis, lumped);
  WalkerState out(basis.states.front().basis_ptr());
  for (std::size_t a = 0; a < lumped.size(); ++a) {
    const double amp = lumped_state[a];
    if (amp == 0.0) continue;
    const auto [u, v] = lumped.arc(a);
    auto k = basis.find(blocks[u], blocks[v]);
    if (!k) {
      throw Error(ErrorKind::BasisMismatch, "lumped arc (" + lumped.vertices()[u] + "," +
                                                lumped.vertices()[v] + ") has no aggregated state");
    }
    out.amplitudes() += amp * basis.states[*k].amplitudes();
  }
  return out;
}

double ReductionResiduals::max() const noexcept {
  return std::max({projection, swap, intertwining});
}

ReductionResiduals verify_reduction(const SzegedyOperator& op, const AggregatedBasis& basis,
                                    const SzegedyOperator& lumped_op) {
  const ArcBasis& lumped = lumped_op.basis();
  const auto blocks = block_lookup(basis, lumped);
  std::vector<std::size_t> lumped_index(basis.block_names.size(), static_cast<std::size_t>(-1));
  for (std::size_t k = 0; k < blocks.size(); ++k) lumped_index[blocks[k]] = k;
  for (std::size_t b = 0; b < lumped_index.size(); ++b) {
    if (lumped_index[b] == static_cast<std::size_t>(-1)) {
      throw Error(ErrorKind::BasisMismatch, "block '" + basis.block_names[b] + "' missing from lumped chain");
    }
  }
  if (lumped.size() != basis.size()) {
    throw Error(ErrorKind::BasisMismatch, "lumped arc basis has " + std::to_string(lumped.size()) +
                                              " arcs, aggregated basis " + std::to_string(basis.size()));
  }
  for (const auto& state : basis.states) {
    if (state.basis().size() != op.basis().size()) {
      throw Error(ErrorKind::BasisMismatch, "aggregated states are not on the operator's basis");
    }
  }

  const StochasticMatrix& pt = lumped_op.chain();
  ReductionResiduals res;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const auto [u, v] = basis.pairs[k];
    const WalkerState& uv = basis.states[k];
    const std::size_t lu = lumped_index[u], lv = lumped_index[v];

    WalkerState phi_u(op.basis_ptr());
    for (const auto& e : pt.row(lu)) {
      auto w = basis.find(u, blocks[e.col]);
      if (!w) throw Error(ErrorKind::BasisMismatch, "missing aggregated state for a lumped arc");
      phi_u.amplitudes() += std::sqrt(e.p) * basis.states[*w].amplitudes();
    }
    const WalkerState projected = op.apply_projection(uv);
    res.projection =
        std::max(res.projection, projected.distance(std::sqrt(pt.at(lu, lv)) * phi_u));

    auto vu = basis.find(v, u);
    if (!vu) {
      throw Error(ErrorKind::BasisMismatch, "no aggregated state (" + basis.block_names[v] + "," +
                                                basis.block_names[u] + ")");
    }
    res.swap = std::max(res.swap, apply_swap(uv).distance(basis.states[*vu]));

    const WalkerState lumped_image = lumped_op.apply_U(
        WalkerState::arc(lumped_op.basis_ptr(), lumped.vertices()[lu], lumped.vertices()[lv]));
    res.intertwining = std::max(res.intertwining, op.apply_U(uv).distance(lift(lumped_image, basis)));
  }
  return res;
}

}  // namespace szl
