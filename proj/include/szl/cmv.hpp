#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "szl/markov.hpp"
#include "szl/szegedy.hpp"

namespace szl {

inline constexpr double kDependenceTol = 1e-8;

/// Real Verblunsky coefficients alpha_0..alpha_{n-1}; alpha_{-1} = -1 is
/// implicit. A finite model ends with |alpha_{n-1}| = 1.
struct VerblunskySequence {
  std::vector<double> alphas;
  /// Largest index not affected by truncation (free-group balls); unset
  /// means every coefficient is exact.
  std::optional<std::size_t> trusted_up_to;

  std::size_t size() const noexcept { return alphas.size(); }
  /// alpha_k with alpha_{-1} = -1 and 0 past the end.
  double alpha(std::ptrdiff_t k) const;
  double rho(std::ptrdiff_t k) const;

  /// Throws InvalidSequence unless |alpha_k| < 1 for k < n-1 and
  /// |alpha_{n-1}| = 1 within `tol`.
  void validate(double tol = 1e-9) const;
};

/// CMV matrix C_mn = <e_m, U e_n> together with its generating basis.
struct CmvResult {
  std::vector<Eigen::VectorXd> basis;
  Eigen::MatrixXd matrix;
};

/// Orthonormalizes e0, U e0, U^-1 e0, U^2 e0, U^-2 e0, ... by modified
/// Gram-Schmidt with one re-orthogonalization pass. Candidates whose
/// residual falls below `dep_tol` (relative to the candidate norm) are
/// skipped; a direction that has produced a dependent candidate stays
/// exhausted and the other continues alone. Each new vector is the
/// normalized residual, so its overlap with the candidate is positive.
///
/// Throws NotUnit when |e0| != 1.
CmvResult cmv_orthonormalize(const LinearMap& apply_u, const LinearMap& apply_u_inverse,
                             const Eigen::VectorXd& e0, double dep_tol = kDependenceTol);

struct RecurrenceResult {
  VerblunskySequence sequence;
  std::vector<Eigen::VectorXd> basis;
};

/// Coin-invariant recurrence: S e_{2k} = a_{2k} e_{2k} + r_{2k} e_{2k+1} and
/// R e_{2k+1} = a_{2k+1} e_{2k+1} + r_{2k+1} e_{2k+2}, stopping at the first
/// residual below `dep_tol`.
///
/// Throws NotCoinInvariant when R e0 != e0 and InvalidSequence when the
/// closing coefficient is not of modulus one.
RecurrenceResult verblunsky_via_recurrence(const LinearMap& apply_swap,
                                           const LinearMap& apply_reflection,
                                           const Eigen::VectorXd& e0,
                                           double dep_tol = kDependenceTol);

/// Convenience overload with e0 = phi_root of the operator.
RecurrenceResult verblunsky_via_recurrence(const SzegedyOperator& op, std::string_view root,
                                           double dep_tol = kDependenceTol);

struct CmvFactors {
  Eigen::MatrixXd L;  // Theta_0 (+) Theta_2 (+) ...
  Eigen::MatrixXd M;  // 1 (+) Theta_1 (+) Theta_3 (+) ...
};

/// Throws InvalidSequence.
CmvFactors cmv_factors(const VerblunskySequence& v);
Eigen::MatrixXd build_cmv_matrix(const VerblunskySequence& v);

/// Reads the coefficients off the pentadiagonal band and checks the result
/// by rebuilding the matrix. Throws NotCmvShaped.
VerblunskySequence verblunsky_from_cmv_matrix(const Eigen::MatrixXd& c);

/// Geronimus relations: q_k = (1+a_{2k-2})(1+a_{2k-1})/2,
/// p_k = (1-a_{2k-1})(1-a_{2k})/2, r_k = (a_{2k}(1-a_{2k-1}) - a_{2k-2}(1+a_{2k-1}))/2.
/// The chain has floor(n/2) + 1 states. Throws NotStochastic.
BirthDeathChain geronimus_pqr(const VerblunskySequence& v);

/// Inverts geronimus_pqr. Throws DegenerateChain or InconsistentR.
VerblunskySequence verblunsky_from_pqr(const BirthDeathChain& chain);

struct JacobiCoefficients {
  std::vector<double> r;  // diagonal
  std::vector<double> s;  // off-diagonal, one shorter than r
};

/// Size equals the dimension of the eigenvalue-1 eigenspace of M.
/// Throws NegativeRadicand.
JacobiCoefficients jacobi_from_verblunsky(const VerblunskySequence& v);
Eigen::MatrixXd jacobi_matrix(const JacobiCoefficients& j);

bool is_orthogonal(const Eigen::MatrixXd& m, double tol);
bool is_pentadiagonal(const Eigen::MatrixXd& m, double tol);

}  // namespace szl
