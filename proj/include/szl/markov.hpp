#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "szl/graphs.hpp"

namespace szl {

inline constexpr double kStochasticTol = 1e-12;
inline constexpr double kLumpTol = 1e-10;

/// Row-stochastic transition matrix stored as sorted sparse rows.
///
/// Zero entries are dropped on construction, so `row(i)` is exactly the
/// support of the transition distribution out of vertex i.
class StochasticMatrix {
 public:
  struct Entry {
    std::size_t col;
    double p;
  };

  StochasticMatrix() = default;

  /// Throws NotStochastic on negative entries or rows that do not sum to 1
  /// within `tol`; DimensionMismatch on out-of-range columns.
  StochasticMatrix(std::vector<Vertex> vertices, std::vector<std::vector<Entry>> rows,
                   double tol = kStochasticTol);

  static StochasticMatrix from_dense(std::vector<Vertex> vertices,
                                     const std::vector<std::vector<double>>& rows,
                                     double tol = kStochasticTol);
  static StochasticMatrix from_eigen(std::vector<Vertex> vertices, const Eigen::MatrixXd& rows,
                                     double tol = kStochasticTol);

  std::size_t size() const noexcept { return vertices_.size(); }
  const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
  const Vertex& vertex(std::size_t i) const { return vertices_.at(i); }
  std::size_t require_index(std::string_view label) const;

  std::span<const Entry> row(std::size_t i) const { return rows_.at(i); }
  double at(std::size_t i, std::size_t j) const;

  Eigen::MatrixXd to_dense() const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<std::vector<Entry>> rows_;
};

struct Distribution {
  std::vector<Vertex> vertices;
  std::vector<double> p;

  static Distribution delta(std::vector<Vertex> vertices, std::size_t at);
  /// Throws NotStochastic unless nonnegative and summing to 1 within `tol`.
  void validate(double tol = kStochasticTol) const;
};

/// Nearest-neighbour chain on the path 0..n-1.
struct BirthDeathChain {
  std::vector<double> p;  // up
  std::vector<double> q;  // down
  std::vector<double> r;  // stay

  std::size_t size() const noexcept { return p.size(); }
  /// Throws InvalidChain.
  void validate(double tol = kStochasticTol) const;
};

/// Uniform transition probability along every out-arc. Throws SinkVertex.
StochasticMatrix homogeneous_walk(const DirectedGraph& g);

struct NotLumpable {
  std::size_t u = 0;
  std::size_t v = 0;
  Vertex first;
  Vertex second;
  double first_sum = 0.0;
  double second_sum = 0.0;
};

using LumpResult = std::variant<StochasticMatrix, NotLumpable>;

/// Strong lumping by the row-sum criterion. The lumped matrix is indexed by
/// the partition's block names in block order. The first violating
/// (u, v, i1, i2) in block/member scan order is reported.
LumpResult lump(const StochasticMatrix& p, const VertexPartition& part, double tol = kLumpTol);

/// Unwraps a LumpResult; throws NotLumpable describing the witness.
StochasticMatrix lumped_or_throw(LumpResult result);

/// Vertices are labelled "0".."n-1".
StochasticMatrix birth_death_matrix(const BirthDeathChain& chain);

/// Inverse of birth_death_matrix; throws InvalidChain unless `p` is
/// tridiagonal in its vertex order.
BirthDeathChain birth_death_from_matrix(const StochasticMatrix& p);

/// dist * P^steps. Throws DimensionMismatch when vertex lists differ.
Distribution classical_evolve(const StochasticMatrix& p, const Distribution& dist, int steps);

/// Block masses of `dist` under `part`, in block order.
Distribution lump_distribution(const Distribution& dist, const VertexPartition& part);

}  // namespace szl
