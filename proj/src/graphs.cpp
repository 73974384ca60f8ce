#include "szl/graphs.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <numeric>
#include <set>

#include "szl/errors.hpp"

namespace szl {

DirectedGraph::DirectedGraph(std::vector<Vertex> vertices,
                             const std::vector<std::pair<Vertex, Vertex>>& arcs)
    : vertices_(std::move(vertices)), out_(vertices_.size()) {
  index_.reserve(vertices_.size());
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (!index_.emplace(vertices_[i], i).second) {
      throw Error(ErrorKind::InvalidParams, "duplicate vertex '" + vertices_[i] + "'");
    }
  }
  for (const auto& [from, to] : arcs) {
    auto a = index_of(from);
    auto b = index_of(to);
    if (!a || !b) {
      throw Error(ErrorKind::InvalidParams,
                  "arc (" + from + "," + to + ") has an endpoint outside the vertex list");
    }
    out_[*a].push_back(*b);
  }
  for (auto& succ : out_) {
    std::sort(succ.begin(), succ.end());
    if (std::adjacent_find(succ.begin(), succ.end()) != succ.end()) {
      throw Error(ErrorKind::InvalidParams, "duplicate arc");
    }
    arc_count_ += succ.size();
  }
}

std::optional<std::size_t> DirectedGraph::index_of(std::string_view label) const {
  auto it = index_.find(Vertex(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t DirectedGraph::require_index(std::string_view label) const {
  if (auto i = index_of(label)) return *i;
  throw Error(ErrorKind::UnknownVertex, "no vertex '" + std::string(label) + "'");
}

bool DirectedGraph::has_arc(std::size_t i, std::size_t j) const {
  const auto& succ = out_.at(i);
  return std::binary_search(succ.begin(), succ.end(), j);
}

std::vector<std::pair<std::size_t, std::size_t>> DirectedGraph::arcs() const {
  std::vector<std::pair<std::size_t, std::size_t>> result;
  result.reserve(arc_count_);
  for (std::size_t i = 0; i < out_.size(); ++i) {
    for (std::size_t j : out_[i]) result.emplace_back(i, j);
  }
  return result;
}

// VertexPartition ----------------------------------------------------------

VertexPartition::VertexPartition(std::vector<std::vector<Vertex>> blocks,
                                 std::vector<std::string> names)
    : blocks_(std::move(blocks)), names_(std::move(names)) {
  if (names_.empty()) {
    names_.reserve(blocks_.size());
    for (std::size_t k = 0; k < blocks_.size(); ++k) names_.push_back(std::to_string(k));
  }
  if (names_.size() != blocks_.size()) {
    throw Error(ErrorKind::InvalidPartition, "block name count does not match block count");
  }
  std::set<std::string> seen_names;
  std::set<Vertex> seen;
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    if (blocks_[k].empty()) {
      throw Error(ErrorKind::InvalidPartition, "block '" + names_[k] + "' is empty");
    }
    if (!seen_names.insert(names_[k]).second) {
      throw Error(ErrorKind::InvalidPartition, "duplicate block name '" + names_[k] + "'");
    }
    for (const auto& v : blocks_[k]) {
      if (!seen.insert(v).second) {
        throw Error(ErrorKind::InvalidPartition, "vertex '" + v + "' appears in two blocks");
      }
    }
  }
}

VertexPartition VertexPartition::singletons(std::span<const Vertex> vertices) {
  std::vector<std::vector<Vertex>> blocks;
  std::vector<std::string> names;
  blocks.reserve(vertices.size());
  for (const auto& v : vertices) {
    blocks.push_back({v});
    names.push_back(v);
  }
  return VertexPartition(std::move(blocks), std::move(names));
}

std::optional<std::size_t> VertexPartition::block_named(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

BlockIndex resolve(const VertexPartition& part, std::span<const Vertex> vertices) {
  std::unordered_map<std::string_view, std::size_t> index;
  index.reserve(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) index.emplace(vertices[i], i);

  constexpr auto unassigned = static_cast<std::size_t>(-1);
  BlockIndex result;
  result.block_of.assign(vertices.size(), unassigned);
  result.members.resize(part.size());
  for (std::size_t b = 0; b < part.size(); ++b) {
    for (const auto& v : part.blocks()[b]) {
      auto it = index.find(v);
      if (it == index.end()) {
        throw Error(ErrorKind::InvalidPartition, "block '" + part.name(b) +
                                                     "' lists unknown vertex '" + v + "'");
      }
      if (result.block_of[it->second] != unassigned) {
        throw Error(ErrorKind::InvalidPartition, "vertex '" + v + "' appears in two blocks");
      }
      result.block_of[it->second] = b;
      result.members[b].push_back(it->second);
    }
    std::sort(result.members[b].begin(), result.members[b].end());
  }
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (result.block_of[i] == unassigned) {
      throw Error(ErrorKind::InvalidPartition, "vertex '" + vertices[i] + "' is not covered");
    }
  }
  return result;
}

DirectedGraph coarsen(const DirectedGraph& g, const VertexPartition& part) {
  const BlockIndex idx = resolve(part, g.vertices());
  std::set<std::pair<std::size_t, std::size_t>> block_arcs;
  for (const auto& [i, j] : g.arcs()) block_arcs.emplace(idx.block_of[i], idx.block_of[j]);

  std::vector<std::pair<Vertex, Vertex>> arcs;
  arcs.reserve(block_arcs.size());
  for (const auto& [u, v] : block_arcs) arcs.emplace_back(part.name(u), part.name(v));
  return DirectedGraph(part.names(), arcs);
}

VertexPartition distance_partition(const DirectedGraph& g, std::string_view root) {
  const std::size_t start = g.require_index(root);
  const std::size_t n = g.size();

  // Undirected view: successors plus predecessors.
  std::vector<std::vector<std::size_t>> nbrs(n);
  for (const auto& [i, j] : g.arcs()) {
    nbrs[i].push_back(j);
    nbrs[j].push_back(i);
  }

  constexpr auto unseen = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(n, unseen);
  std::deque<std::size_t> queue{start};
  dist[start] = 0;
  std::size_t max_dist = 0;
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    for (std::size_t j : nbrs[i]) {
      if (dist[j] == unseen) {
        dist[j] = dist[i] + 1;
        max_dist = std::max(max_dist, dist[j]);
        queue.push_back(j);
      }
    }
  }

  std::vector<std::vector<Vertex>> blocks(max_dist + 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i] == unseen) {
      throw Error(ErrorKind::DisconnectedGraph,
                  "vertex '" + g.vertex(i) + "' is unreachable from '" + std::string(root) + "'");
    }
    blocks[dist[i]].push_back(g.vertex(i));
  }
  return VertexPartition(std::move(blocks));
}

std::variant<EquitableTable, NotEquitable> equitable_table(const DirectedGraph& g,
                                                           const VertexPartition& part) {
  const BlockIndex idx = resolve(part, g.vertices());
  const std::size_t nb = idx.block_count();

  EquitableTable table;
  table.d.assign(nb, std::vector<int>(nb, 0));
  table.valency.assign(nb, 0);

  std::vector<int> counts(nb);
  for (std::size_t u = 0; u < nb; ++u) {
    const auto& members = idx.members[u];
    for (std::size_t m = 0; m < members.size(); ++m) {
      const std::size_t i = members[m];
      std::fill(counts.begin(), counts.end(), 0);
      for (std::size_t j : g.successors(i)) ++counts[idx.block_of[j]];
      if (m == 0) {
        table.d[u] = counts;
        continue;
      }
      for (std::size_t v = 0; v < nb; ++v) {
        if (counts[v] != table.d[u][v]) {
          return NotEquitable{u, v, g.vertex(members[0]), g.vertex(i), table.d[u][v], counts[v]};
        }
      }
    }
    table.valency[u] = std::accumulate(table.d[u].begin(), table.d[u].end(), 0);
  }
  return table;
}

// Generators ---------------------------------------------------------------

namespace {

DirectedGraph from_adjacency(std::vector<Vertex> labels, auto&& adjacent) {
  std::sort(labels.begin(), labels.end());
  std::vector<std::pair<Vertex, Vertex>> arcs;
  for (const auto& a : labels) {
    for (const auto& b : labels) {
      if (a != b && adjacent(a, b)) arcs.emplace_back(a, b);
    }
  }
  return DirectedGraph(std::move(labels), arcs);
}

bool is_even_permutation(std::span<const int> seq) {
  int inversions = 0;
  for (std::size_t a = 0; a < seq.size(); ++a) {
    for (std::size_t b = a + 1; b < seq.size(); ++b) {
      if (seq[a] > seq[b]) ++inversions;
    }
  }
  return inversions % 2 == 0;
}

std::vector<Vertex> ordered_pairs(int upto) {
  std::vector<Vertex> labels;
  for (int i = 1; i <= upto; ++i) {
    for (int j = 1; j <= upto; ++j) {
      if (i != j) labels.push_back(std::to_string(i) + std::to_string(j));
    }
  }
  return labels;
}

constexpr std::string_view kGeneratorLetters = "abcdfghijklmnopqrstuvwxyz";

char inverse_letter(char c) {
  return static_cast<char>(c >= 'a' ? c - 'a' + 'A' : c - 'A' + 'a');
}

}  // namespace

DirectedGraph hypercube(int n) {
  if (n < 1 || n > 20) throw Error(ErrorKind::InvalidParams, "hypercube needs 1 <= N <= 20");
  std::vector<Vertex> labels;
  labels.reserve(std::size_t{1} << n);
  for (unsigned long x = 0; x < (1UL << n); ++x) {
    Vertex s(static_cast<std::size_t>(n), '0');
    for (int b = 0; b < n; ++b) {
      if (x & (1UL << b)) s[static_cast<std::size_t>(n - 1 - b)] = '1';
    }
    labels.push_back(std::move(s));
  }
  // Labels are generated in lexicographic order; flip each bit directly.
  std::vector<std::pair<Vertex, Vertex>> arcs;
  arcs.reserve(labels.size() * static_cast<std::size_t>(n));
  for (const auto& a : labels) {
    for (int b = 0; b < n; ++b) {
      Vertex t = a;
      t[static_cast<std::size_t>(b)] = a[static_cast<std::size_t>(b)] == '0' ? '1' : '0';
      arcs.emplace_back(a, std::move(t));
    }
  }
  return DirectedGraph(std::move(labels), arcs);
}

DirectedGraph complete_graph(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidParams, "complete graph needs n >= 1");
  std::vector<Vertex> labels;
  for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  // Numeric order; identical to lexicographic for n <= 10.
  std::vector<std::pair<Vertex, Vertex>> arcs;
  for (const auto& a : labels)
    for (const auto& b : labels)
      if (a != b) arcs.emplace_back(a, b);
  return DirectedGraph(std::move(labels), arcs);
}

DirectedGraph tetrahedron() { return complete_graph(4); }

DirectedGraph octahedron() {
  // Every pair except the antipodal +k / -k.
  std::vector<Vertex> labels{"+1", "+2", "+3", "-1", "-2", "-3"};
  return from_adjacency(std::move(labels), [](const Vertex& a, const Vertex& b) {
    return a[1] != b[1];
  });
}

DirectedGraph icosahedron() {
  return from_adjacency(ordered_pairs(4), [](const Vertex& a, const Vertex& b) {
    const int i = a[0] - '0', j = a[1] - '0', k = b[0] - '0', l = b[1] - '0';
    if (i == k || j == l) return true;
    const std::set<int> distinct{i, j, k, l};
    if (distinct.size() != 4) return false;
    const std::array<int, 4> seq{i, j, k, l};
    return is_even_permutation(seq);
  });
}

DirectedGraph dodecahedron() {
  return from_adjacency(ordered_pairs(5), [](const Vertex& a, const Vertex& b) {
    const int i = a[0] - '0', j = a[1] - '0', k = b[0] - '0', l = b[1] - '0';
    const std::set<int> distinct{i, j, k, l};
    if (distinct.size() != 4) return false;
    const int m = 15 - i - j - k - l;
    const std::array<int, 5> seq{i, j, k, l, m};
    return is_even_permutation(seq);
  });
}

char free_generator_letter(int k) {
  if (k < 0 || k >= static_cast<int>(kGeneratorLetters.size())) {
    throw Error(ErrorKind::InvalidParams, "generator index out of range");
  }
  return kGeneratorLetters[static_cast<std::size_t>(k)];
}

DirectedGraph free_ball(int generators, bool involutive, int radius) {
  if (generators < 1 || generators > static_cast<int>(kGeneratorLetters.size())) {
    throw Error(ErrorKind::InvalidParams, "free_ball needs 1 <= generators <= 25");
  }
  if (radius < 1) throw Error(ErrorKind::InvalidParams, "free_ball needs radius >= 1");

  std::vector<char> alphabet;
  for (int k = 0; k < generators; ++k) {
    alphabet.push_back(free_generator_letter(k));
    if (!involutive) alphabet.push_back(inverse_letter(free_generator_letter(k)));
  }
  auto cancels = [&](char last, char next) {
    return involutive ? last == next : last == inverse_letter(next);
  };

  // Words stored without the identity marker; "" is the identity.
  std::vector<std::string> words{""};
  std::vector<std::string> sphere{""};
  for (int r = 1; r <= radius; ++r) {
    std::vector<std::string> next;
    for (const auto& w : sphere) {
      for (char c : alphabet) {
        if (!w.empty() && cancels(w.back(), c)) continue;
        next.push_back(w + c);
      }
    }
    words.insert(words.end(), next.begin(), next.end());
    sphere = std::move(next);
  }

  auto label = [](const std::string& w) { return w.empty() ? std::string("e") : w; };
  std::set<std::string> in_ball(words.begin(), words.end());
  std::vector<std::pair<Vertex, Vertex>> arcs;
  for (const auto& w : words) {
    for (char c : alphabet) {
      std::string t;
      if (!w.empty() && cancels(w.back(), c)) {
        t = w.substr(0, w.size() - 1);
      } else {
        t = w + c;
      }
      if (in_ball.count(t)) arcs.emplace_back(label(w), label(t));
    }
  }

  std::vector<Vertex> labels;
  labels.reserve(words.size());
  for (const auto& w : words) labels.push_back(label(w));
  std::sort(labels.begin(), labels.end());
  return DirectedGraph(std::move(labels), arcs);
}

DirectedGraph generate(const GraphSpec& spec) {
  const auto& f = spec.family;
  if (f == "hypercube") return hypercube(spec.n);
  if (f == "complete") return complete_graph(spec.n);
  if (f == "tetrahedron") return tetrahedron();
  if (f == "octahedron") return octahedron();
  if (f == "icosahedron") return icosahedron();
  if (f == "dodecahedron") return dodecahedron();
  if (f == "hexahedron") return hypercube(3);
  if (f == "free_ball") return free_ball(spec.generators, spec.involutive, spec.radius);
  throw Error(ErrorKind::InvalidParams, "unknown graph family '" + f + "'");
}

std::string canonical_root(const GraphSpec& spec) {
  const auto& f = spec.family;
  if (f == "hypercube") return std::string(static_cast<std::size_t>(std::max(spec.n, 0)), '0');
  if (f == "hexahedron") return "000";
  if (f == "complete" || f == "tetrahedron") return "0";
  if (f == "octahedron") return "-1";
  if (f == "icosahedron") return "12";
  if (f == "dodecahedron") return "31";
  if (f == "free_ball") return "e";
  throw Error(ErrorKind::InvalidParams, "unknown graph family '" + f + "'");
}

}  // namespace szl
