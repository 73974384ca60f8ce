#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "szl/markov.hpp"
#include "szl/szegedy.hpp"

namespace szl {

/// Reduced density matrix on the position register, restricted to the
/// positions carrying nonzero amplitude.
struct DensityMatrix {
  std::vector<Vertex> positions;
  Eigen::MatrixXd rho;

  /// Ascending.
  Eigen::VectorXd eigenvalues() const;
  /// Throws NotDensity unless symmetric, unit trace and positive semidefinite.
  void validate(double tol = 1e-10) const;
};

/// (tr_C rho)_{ii'} = sum_j amp(i,j) amp(i',j).
DensityMatrix reduce_density_coin(const WalkerState& s);

/// -sum lambda log lambda over eigenvalues above 1e-14, natural log.
double von_neumann_entropy(const DensityMatrix& d);
/// Same entropy in bits.
double von_neumann_entropy_bits(const DensityMatrix& d);

/// prob(i) = sum_j amp(i,j)^2.
Distribution position_distribution(const WalkerState& s);

/// Position distributions of U^t s0 for t = 0..steps. Throws NotUnit if the
/// norm drifts by more than 1e-9.
std::vector<Distribution> simulate_quantum(const SzegedyOperator& op, const WalkerState& s0,
                                           std::size_t steps);

}  // namespace szl
