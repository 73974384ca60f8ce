#include "szl/analysis.hpp"

#include <cmath>
#include <string>

#include "szl/errors.hpp"

namespace szl {

Eigen::VectorXd DensityMatrix::eigenvalues() const {
  if (rho.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(rho, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

void DensityMatrix::validate(double tol) const {
  if (rho.rows() != rho.cols() || static_cast<std::size_t>(rho.rows()) != positions.size()) {
    throw Error(ErrorKind::NotDensity, "shape does not match the position list");
  }
  if (rho.rows() == 0) throw Error(ErrorKind::NotDensity, "empty density matrix");
  if ((rho - rho.transpose()).cwiseAbs().maxCoeff() > tol) {
    throw Error(ErrorKind::NotDensity, "not symmetric");
  }
  if (std::abs(rho.trace() - 1.0) > tol) {
    throw Error(ErrorKind::NotDensity, "trace " + std::to_string(rho.trace()));
  }
  if (eigenvalues().minCoeff() < -tol) {
    throw Error(ErrorKind::NotDensity, "negative eigenvalue");
  }
}

DensityMatrix reduce_density_coin(const WalkerState& s) {
  const ArcBasis& basis = s.basis();
  const std::size_t n = basis.vertices().size();

  std::vector<std::size_t> occupied;
  std::vector<std::ptrdiff_t> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = basis.row_begin(i); a < basis.row_end(i); ++a) {
      if (s[a] != 0.0) {
        slot[i] = static_cast<std::ptrdiff_t>(occupied.size());
        occupied.push_back(i);
        break;
      }
    }
  }

  // Group amplitudes by coin index so each j contributes an outer product.
  std::vector<std::vector<std::pair<std::size_t, double>>> by_coin(n);
  for (std::size_t a = 0; a < basis.size(); ++a) {
    if (s[a] == 0.0) continue;
    const auto [i, j] = basis.arc(a);
    by_coin[j].emplace_back(static_cast<std::size_t>(slot[i]), s[a]);
  }

  DensityMatrix d;
  const auto m = static_cast<Eigen::Index>(occupied.size());
  d.rho = Eigen::MatrixXd::Zero(m, m);
  for (const auto& column : by_coin) {
    for (const auto& [x, ax] : column) {
      for (const auto& [y, ay] : column) {
        d.rho(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) += ax * ay;
      }
    }
  }
  for (std::size_t i : occupied) d.positions.push_back(basis.vertices()[i]);
  return d;
}

double von_neumann_entropy(const DensityMatrix& d) {
  d.validate();
  double s = 0.0;
  const Eigen::VectorXd lambda = d.eigenvalues();
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    if (lambda(k) > 1e-14) s -= lambda(k) * std::log(lambda(k));
  }
  return s;
}

double von_neumann_entropy_bits(const DensityMatrix& d) {
  return von_neumann_entropy(d) / std::log(2.0);
}

Distribution position_distribution(const WalkerState& s) {
  const ArcBasis& basis = s.basis();
  Distribution dist;
  dist.vertices = basis.vertices();
  dist.p.assign(dist.vertices.size(), 0.0);
  for (std::size_t a = 0; a < basis.size(); ++a) {
    dist.p[basis.arc(a).first] += s[a] * s[a];
  }
  return dist;
}

std::vector<Distribution> simulate_quantum(const SzegedyOperator& op, const WalkerState& s0,
                                           std::size_t steps) {
  const double norm0 = s0.norm();
  if (std::abs(norm0 - 1.0) > 1e-9) {
    throw Error(ErrorKind::NotUnit, "initial state has norm " + std::to_string(norm0));
  }
  std::vector<Distribution> out;
  out.reserve(steps + 1);
  WalkerState s = s0;
  out.push_back(position_distribution(s));
  for (std::size_t t = 1; t <= steps; ++t) {
    s = op.apply_U(s);
    if (std::abs(s.norm() - norm0) > 1e-9) {
      throw Error(ErrorKind::NotUnit, "norm drifted at step " + std::to_string(t));
    }
    out.push_back(position_distribution(s));
  }
  return out;
}

}  // namespace szl
