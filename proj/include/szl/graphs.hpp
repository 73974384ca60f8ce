#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace szl {

using Vertex = std::string;

/// Directed graph over opaque string labels.
///
/// Vertex order is the insertion order; generators insert labels in
/// lexicographic order so every derived matrix is reproducible. Successor
/// lists are kept sorted by vertex index.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  /// Throws InvalidParams on duplicate vertices, duplicate arcs, or arcs
  /// whose endpoints are not listed.
  DirectedGraph(std::vector<Vertex> vertices,
                const std::vector<std::pair<Vertex, Vertex>>& arcs);

  std::size_t size() const noexcept { return vertices_.size(); }
  const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
  const Vertex& vertex(std::size_t i) const { return vertices_.at(i); }

  std::optional<std::size_t> index_of(std::string_view label) const;
  /// Throws UnknownVertex.
  std::size_t require_index(std::string_view label) const;

  std::span<const std::size_t> successors(std::size_t i) const { return out_.at(i); }
  bool has_arc(std::size_t i, std::size_t j) const;
  std::size_t arc_count() const noexcept { return arc_count_; }

  /// All arcs as index pairs, sorted lexicographically.
  std::vector<std::pair<std::size_t, std::size_t>> arcs() const;

 private:
  std::vector<Vertex> vertices_;
  std::unordered_map<Vertex, std::size_t> index_;
  std::vector<std::vector<std::size_t>> out_;
  std::size_t arc_count_ = 0;
};

/// Ordered cover of a vertex set by disjoint nonempty named blocks.
class VertexPartition {
 public:
  VertexPartition() = default;

  /// Names default to "0", "1", ... Throws InvalidPartition on empty
  /// blocks, repeated vertices inside the partition, or duplicate names.
  explicit VertexPartition(std::vector<std::vector<Vertex>> blocks,
                           std::vector<std::string> names = {});

  /// One block per vertex, named after the vertex.
  static VertexPartition singletons(std::span<const Vertex> vertices);

  std::size_t size() const noexcept { return blocks_.size(); }
  const std::vector<std::vector<Vertex>>& blocks() const noexcept { return blocks_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(std::size_t block) const { return names_.at(block); }
  std::optional<std::size_t> block_named(std::string_view name) const;

 private:
  std::vector<std::vector<Vertex>> blocks_;
  std::vector<std::string> names_;
};

/// A partition resolved against a concrete vertex ordering.
struct BlockIndex {
  std::vector<std::size_t> block_of;               // vertex index -> block
  std::vector<std::vector<std::size_t>> members;   // block -> vertex indices (ascending)

  std::size_t block_count() const noexcept { return members.size(); }
};

/// Throws InvalidPartition unless the blocks cover `vertices` exactly once.
BlockIndex resolve(const VertexPartition& part, std::span<const Vertex> vertices);

DirectedGraph coarsen(const DirectedGraph& g, const VertexPartition& part);

/// Spheres around `root` in the underlying undirected graph, named "0", "1", ...
/// by distance. Throws DisconnectedGraph if some vertex is unreachable.
VertexPartition distance_partition(const DirectedGraph& g, std::string_view root);

struct EquitableTable {
  std::vector<std::vector<int>> d;   // d[u][v]: neighbors in v of any vertex of u
  std::vector<int> valency;          // d_u
};

struct NotEquitable {
  std::size_t u = 0;
  std::size_t v = 0;
  Vertex first;        // vertex of u that fixed the count
  Vertex second;       // vertex of u that disagrees
  int first_count = 0;
  int second_count = 0;
};

std::variant<EquitableTable, NotEquitable> equitable_table(const DirectedGraph& g,
                                                           const VertexPartition& part);

// Generators ---------------------------------------------------------------

DirectedGraph hypercube(int n);
DirectedGraph complete_graph(int n);
DirectedGraph tetrahedron();
DirectedGraph octahedron();
DirectedGraph icosahedron();
DirectedGraph dodecahedron();

/// Ball of the given radius in the Cayley graph of a free group. Involutive
/// generators are their own inverses (words avoid repeated letters);
/// otherwise formal inverses are written in upper case. The identity word is
/// labelled "e", so generator letters skip 'e'. Arcs join words that differ
/// by one right multiplication; arcs leaving the ball are dropped.
DirectedGraph free_ball(int generators, bool involutive, int radius);

/// Letter used for generator `k` (lower case) in free_ball labels.
char free_generator_letter(int k);

struct GraphSpec {
  std::string family;  // hypercube, complete, tetrahedron, octahedron, icosahedron,
                       // dodecahedron, free_ball
  int n = 3;
  int generators = 2;
  bool involutive = false;
  int radius = 2;
};

/// Throws InvalidParams for unknown families or out-of-range parameters.
DirectedGraph generate(const GraphSpec& spec);

/// Canonical root used by the distance partitions of the reference cases.
std::string canonical_root(const GraphSpec& spec);

}  // namespace szl
