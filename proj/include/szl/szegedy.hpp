#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "szl/markov.hpp"

namespace szl {

/// Ordered pairs (i, j) spanning the walker's working subspace: every arc
/// with P_ij > 0 plus its reversal. Arcs are sorted by (i, j) and grouped by
/// position i, so the coin register of a fixed position is a contiguous
/// range.
class ArcBasis {
 public:
  explicit ArcBasis(const StochasticMatrix& p);

  std::size_t size() const noexcept { return arcs_.size(); }
  const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
  std::size_t vertex_count() const noexcept { return vertices_.size(); }

  std::pair<std::size_t, std::size_t> arc(std::size_t a) const { return arcs_.at(a); }
  std::optional<std::size_t> find(std::size_t i, std::size_t j) const;
  /// Throws ArcNotInBasis.
  std::size_t require(std::size_t i, std::size_t j) const;
  std::size_t require(std::string_view i, std::string_view j) const;
  std::size_t vertex_index(std::string_view label) const;

  std::size_t reverse(std::size_t a) const { return reverse_.at(a); }
  /// Arc indices [begin, end) whose position register is i.
  std::size_t row_begin(std::size_t i) const { return offsets_.at(i); }
  std::size_t row_end(std::size_t i) const { return offsets_.at(i + 1); }

 private:
  std::vector<Vertex> vertices_;
  std::vector<std::pair<std::size_t, std::size_t>> arcs_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> reverse_;
};

/// Real amplitudes over an ArcBasis. The state space is the span of the
/// basis arcs, never the full N x N product.
class WalkerState {
 public:
  explicit WalkerState(std::shared_ptr<const ArcBasis> basis);
  WalkerState(std::shared_ptr<const ArcBasis> basis, Eigen::VectorXd amplitudes);

  /// Unit vector |i> (x) |j>.
  static WalkerState arc(std::shared_ptr<const ArcBasis> basis, std::string_view i,
                         std::string_view j);

  const ArcBasis& basis() const noexcept { return *basis_; }
  const std::shared_ptr<const ArcBasis>& basis_ptr() const noexcept { return basis_; }
  const Eigen::VectorXd& amplitudes() const noexcept { return amp_; }
  Eigen::VectorXd& amplitudes() noexcept { return amp_; }

  double operator[](std::size_t a) const { return amp_(static_cast<Eigen::Index>(a)); }
  double amplitude(std::string_view i, std::string_view j) const;

  double norm() const { return amp_.norm(); }
  double dot(const WalkerState& other) const;
  double distance(const WalkerState& other) const;

  WalkerState& operator+=(const WalkerState& other);
  WalkerState& operator-=(const WalkerState& other);
  WalkerState& operator*=(double s);

 private:
  void require_same_basis(const WalkerState& other) const;

  std::shared_ptr<const ArcBasis> basis_;
  Eigen::VectorXd amp_;
};

WalkerState operator+(WalkerState a, const WalkerState& b);
WalkerState operator-(WalkerState a, const WalkerState& b);
WalkerState operator*(double s, WalkerState a);

/// Matrix-free action on raw amplitude vectors.
using LinearMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

inline constexpr std::size_t kOperatorMatrixCap = 4096;

/// Szegedy quantization U = S (2 Pi - I) of a stochastic matrix.
///
/// phi_i = |i> (x) sum_j sqrt(P_ij) |j> is supported on the arcs of row i,
/// so the reflection acts block by block on the coin register.
class SzegedyOperator {
 public:
  explicit SzegedyOperator(StochasticMatrix p);

  const StochasticMatrix& chain() const noexcept { return chain_; }
  const ArcBasis& basis() const noexcept { return *basis_; }
  const std::shared_ptr<const ArcBasis>& basis_ptr() const noexcept { return basis_; }

  /// Throws UnknownVertex.
  WalkerState phi(std::string_view vertex) const;
  WalkerState phi(std::size_t vertex) const;

  WalkerState apply_projection(const WalkerState& s) const;
  WalkerState apply_reflection(const WalkerState& s) const;
  WalkerState apply_U(const WalkerState& s) const;
  WalkerState apply_U_inverse(const WalkerState& s) const;

  void project_in_place(Eigen::VectorXd& v) const;
  void reflect_in_place(Eigen::VectorXd& v) const;
  void swap_in_place(Eigen::VectorXd& v) const;

  LinearMap U_map() const;
  LinearMap U_inverse_map() const;
  LinearMap swap_map() const;
  LinearMap reflection_map() const;

  /// M[a, b] = <arc_a, U arc_b>. Throws BasisTooLarge above `cap` arcs.
  Eigen::MatrixXd operator_matrix(std::size_t cap = kOperatorMatrixCap) const;

 private:
  void require_basis(const WalkerState& s) const;

  StochasticMatrix chain_;
  std::shared_ptr<const ArcBasis> basis_;
  Eigen::VectorXd sqrt_p_;  // sqrt(P_ij) per arc, zero on reversal padding
};

/// Exchanges the registers: amplitude of (i, j) moves to (j, i).
WalkerState apply_swap(const WalkerState& s);

}  // namespace szl
