#include "szl/cmv.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "szl/errors.hpp"

namespace szl {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

/// Two passes of modified Gram-Schmidt against `basis`.
Eigen::VectorXd orthogonalize(Eigen::VectorXd r, const std::vector<Eigen::VectorXd>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) r -= b.dot(r) * b;
  }
  return r;
}

void require_unit(const Eigen::VectorXd& e0) {
  if (std::abs(e0.norm() - 1.0) > 1e-10) {
    throw Error(ErrorKind::NotUnit, "initial vector has norm " + fmt(e0.norm()));
  }
}

/// Snaps values that overshoot [-1, 1] by rounding only.
double clamp_unit(double a) {
  if (a > 1.0 && a < 1.0 + 1e-12) return 1.0;
  if (a < -1.0 && a > -1.0 - 1e-12) return -1.0;
  return a;
}

}  // namespace

double VerblunskySequence::alpha(std::ptrdiff_t k) const {
  if (k == -1) return -1.0;
  if (k < 0 || k >= static_cast<std::ptrdiff_t>(alphas.size())) return 0.0;
  return alphas[static_cast<std::size_t>(k)];
}

double VerblunskySequence::rho(std::ptrdiff_t k) const {
  const double a = alpha(k);
  return std::sqrt(std::max(0.0, 1.0 - a * a));
}

void VerblunskySequence::validate(double tol) const {
  if (alphas.empty()) throw Error(ErrorKind::InvalidSequence, "empty sequence");
  for (std::size_t k = 0; k + 1 < alphas.size(); ++k) {
    if (!(std::abs(alphas[k]) < 1.0)) {
      throw Error(ErrorKind::InvalidSequence,
                  "|alpha_" + std::to_string(k) + "| = " + fmt(std::abs(alphas[k])) + " is not < 1");
    }
  }
  if (std::abs(std::abs(alphas.back()) - 1.0) > tol) {
    throw Error(ErrorKind::InvalidSequence,
                "closing coefficient " + fmt(alphas.back()) + " is not of modulus one");
  }
}

CmvResult cmv_orthonormalize(const LinearMap& apply_u, const LinearMap& apply_u_inverse,
                             const Eigen::VectorXd& e0, double dep_tol) {
  require_unit(e0);
  CmvResult result;
  result.basis.push_back(e0);

  // Candidate U^k e0 is replaced by U applied to the last vector produced in
  // the same direction; both differ only by a positive multiple modulo the
  // span already built.
  Eigen::VectorXd forward_last = e0;
  Eigen::VectorXd backward_last = e0;
  bool forward_alive = true;
  bool backward_alive = true;
  bool forward_turn = true;
  const auto max_dim = static_cast<std::size_t>(e0.size());

  while ((forward_alive || backward_alive) && result.basis.size() < max_dim) {
    const bool use_forward = forward_turn ? forward_alive : !backward_alive;
    forward_turn = !forward_turn;
    const Eigen::VectorXd candidate =
        use_forward ? apply_u(forward_last) : apply_u_inverse(backward_last);
    const Eigen::VectorXd residual = orthogonalize(candidate, result.basis);
    const double scale = std::max(candidate.norm(), 1e-300);
    if (residual.norm() < dep_tol * scale) {
      (use_forward ? forward_alive : backward_alive) = false;
      continue;
    }
    Eigen::VectorXd e = residual / residual.norm();
    (use_forward ? forward_last : backward_last) = e;
    result.basis.push_back(std::move(e));
  }

  const auto n = static_cast<Eigen::Index>(result.basis.size());
  result.matrix.resize(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    const Eigen::VectorXd image = apply_u(result.basis[static_cast<std::size_t>(col)]);
    for (Eigen::Index row = 0; row < n; ++row) {
      result.matrix(row, col) = result.basis[static_cast<std::size_t>(row)].dot(image);
    }
  }
  return result;
}

RecurrenceResult verblunsky_via_recurrence(const LinearMap& apply_swap,
                                           const LinearMap& apply_reflection,
                                           const Eigen::VectorXd& e0, double dep_tol) {
  require_unit(e0);
  const double drift = (apply_reflection(e0) - e0).norm();
  if (drift > dep_tol) {
    throw Error(ErrorKind::NotCoinInvariant, "|R e0 - e0| = " + fmt(drift));
  }

  RecurrenceResult result;
  result.basis.push_back(e0);
  const auto max_dim = static_cast<std::size_t>(e0.size());
  for (std::size_t k = 0;; ++k) {
    const Eigen::VectorXd& current = result.basis.back();
    const Eigen::VectorXd image = (k % 2 == 0) ? apply_swap(current) : apply_reflection(current);
    const double a = current.dot(image);
    const Eigen::VectorXd residual = orthogonalize(image - a * current, result.basis);
    const double rho = residual.norm();
    result.sequence.alphas.push_back(clamp_unit(a));
    if (rho < dep_tol || result.basis.size() >= max_dim) break;
    result.basis.push_back(residual / rho);
  }
  result.sequence.validate();
  return result;
}

RecurrenceResult verblunsky_via_recurrence(const SzegedyOperator& op, std::string_view root,
                                           double dep_tol) {
  return verblunsky_via_recurrence(op.swap_map(), op.reflection_map(), op.phi(root).amplitudes(),
                                   dep_tol);
}

CmvFactors cmv_factors(const VerblunskySequence& v) {
  v.validate();
  const std::size_t n = v.size();
  const auto dim = static_cast<Eigen::Index>(n);
  CmvFactors f{Eigen::MatrixXd::Zero(dim, dim), Eigen::MatrixXd::Zero(dim, dim)};

  auto place = [&](Eigen::MatrixXd& m, std::size_t k) {
    const auto i = static_cast<Eigen::Index>(k);
    const double a = v.alphas[k];
    if (k + 1 < n) {
      const double r = v.rho(static_cast<std::ptrdiff_t>(k));
      m(i, i) = a;
      m(i, i + 1) = r;
      m(i + 1, i) = r;
      m(i + 1, i + 1) = -a;
    } else {
      m(i, i) = a;  // truncated Theta_{n-1}
    }
  };
  for (std::size_t k = 0; k < n; k += 2) place(f.L, k);
  f.M(0, 0) = 1.0;
  for (std::size_t k = 1; k < n; k += 2) place(f.M, k);
  return f;
}

Eigen::MatrixXd build_cmv_matrix(const VerblunskySequence& v) {
  const CmvFactors f = cmv_factors(v);
  return f.L * f.M;
}

VerblunskySequence verblunsky_from_cmv_matrix(const Eigen::MatrixXd& c) {
  const Eigen::Index n = c.rows();
  if (n == 0 || c.cols() != n) throw Error(ErrorKind::NotCmvShaped, "matrix must be square and nonempty");

  VerblunskySequence v;
  v.alphas.push_back(clamp_unit(c(0, 0)));
  if (n > 1) {
    const double rho0 = v.rho(0);
    if (std::abs(c(1, 0) - rho0) > 1e-8) {
      throw Error(ErrorKind::NotCmvShaped, "C_10 = " + fmt(c(1, 0)) + " but rho_0 = " + fmt(rho0));
    }
  }
  for (Eigen::Index k = 1; k < n; ++k) {
    const double rho_prev = v.rho(k - 1);
    if (rho_prev < 1e-12) {
      throw Error(ErrorKind::NotCmvShaped, "rho_" + std::to_string(k - 1) + " vanishes before the end");
    }
    // alpha_{2m+1} rho_{2m} sits at (2m, 2m+1); alpha_{2m} rho_{2m-1} at (2m, 2m-1).
    const double band = (k % 2 == 1) ? c(k - 1, k) : c(k, k - 1);
    v.alphas.push_back(clamp_unit(band / rho_prev));
  }

  try {
    v.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::NotCmvShaped, e.what());
  }
  const double mismatch = (build_cmv_matrix(v) - c).cwiseAbs().maxCoeff();
  if (mismatch > 1e-8) {
    throw Error(ErrorKind::NotCmvShaped, "rebuilt matrix differs by " + fmt(mismatch));
  }
  return v;
}

BirthDeathChain geronimus_pqr(const VerblunskySequence& v) {
  if (v.alphas.empty()) throw Error(ErrorKind::InvalidSequence, "empty sequence");
  const std::size_t m = v.size() / 2 + 1;
  BirthDeathChain chain;
  for (std::size_t k = 0; k < m; ++k) {
    const auto j = static_cast<std::ptrdiff_t>(2 * k);
    const double a_prev2 = v.alpha(j - 2);
    const double a_prev = v.alpha(j - 1);
    const double a = v.alpha(j);
    chain.q.push_back(0.5 * (1.0 + a_prev2) * (1.0 + a_prev));
    chain.p.push_back(0.5 * (1.0 - a_prev) * (1.0 - a));
    chain.r.push_back(0.5 * (a * (1.0 - a_prev) - a_prev2 * (1.0 + a_prev)));
  }
  // alpha_{-2} is arbitrary; its coefficient (1 + alpha_{-1}) vanishes.
  chain.q[0] = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    for (double x : {chain.p[k], chain.q[k], chain.r[k]}) {
      if (x < -1e-10 || x > 1.0 + 1e-10) {
        throw Error(ErrorKind::NotStochastic,
                    "state " + std::to_string(k) + " has probability " + fmt(x));
      }
    }
    if (std::abs(chain.p[k] + chain.q[k] + chain.r[k] - 1.0) > 1e-10) {
      throw Error(ErrorKind::NotStochastic, "state " + std::to_string(k) + " does not sum to one");
    }
  }
  if (std::abs(chain.p.back()) > 1e-10) {
    throw Error(ErrorKind::NotStochastic, "last state keeps a forward probability " + fmt(chain.p.back()));
  }
  return chain;
}

VerblunskySequence verblunsky_from_pqr(const BirthDeathChain& chain) {
  chain.validate();
  const std::size_t n = chain.size();
  constexpr double kEdge = 1e-12;

  VerblunskySequence v;
  v.alphas.push_back(clamp_unit(chain.r[0]));
  if (n == 1) {
    v.validate();
    return v;
  }
  if (std::abs(v.alphas[0]) >= 1.0 - kEdge) {
    throw Error(ErrorKind::DegenerateChain, "state 0 never leaves");
  }
  for (std::size_t k = 1; k < n; ++k) {
    const double prev2 = v.alphas.back();
    if (1.0 + prev2 < kEdge) {
      throw Error(ErrorKind::DegenerateChain, "1 + alpha_" + std::to_string(2 * k - 2) + " vanishes");
    }
    const double a = clamp_unit(2.0 * chain.q[k] / (1.0 + prev2) - 1.0);
    v.alphas.push_back(a);

    const bool last = (k + 1 == n);
    double b = 0.0;
    if (1.0 - a < kEdge) {
      if (!last) {
        throw Error(ErrorKind::DegenerateChain,
                    "alpha_" + std::to_string(2 * k - 1) + " reaches 1 before the last state");
      }
    } else {
      b = clamp_unit(1.0 - 2.0 * chain.p[k] / (1.0 - a));
      if (!last && std::abs(b) >= 1.0 - kEdge) {
        throw Error(ErrorKind::DegenerateChain,
                    "alpha_" + std::to_string(2 * k) + " reaches the unit circle early");
      }
      v.alphas.push_back(b);
    }
    const double r_expected = 0.5 * (b * (1.0 - a) - prev2 * (1.0 + a));
    if (std::abs(r_expected - chain.r[k]) > 1e-9) {
      throw Error(ErrorKind::InconsistentR, "state " + std::to_string(k) + ": r = " +
                                                fmt(chain.r[k]) + " but the relations give " +
                                                fmt(r_expected));
    }
  }
  v.validate();
  return v;
}

JacobiCoefficients jacobi_from_verblunsky(const VerblunskySequence& v) {
  v.validate();
  const std::size_t n = v.size();
  const std::size_t m = (n % 2 == 1) ? (n + 1) / 2 : n / 2 + (v.alphas.back() > 0 ? 1 : 0);

  JacobiCoefficients j;
  for (std::size_t k = 0; k < m; ++k) {
    const auto i = static_cast<std::ptrdiff_t>(2 * k);
    j.r.push_back(0.5 * (v.alpha(i) * (1.0 - v.alpha(i - 1)) -
                         (i >= 2 ? v.alpha(i - 2) : 0.0) * (1.0 + v.alpha(i - 1))));
    if (k + 1 < m) {
      const double a = v.alpha(i);
      const double radicand = (1.0 - v.alpha(i - 1)) * (1.0 - a * a) * (1.0 + v.alpha(i + 1));
      if (radicand < -1e-12) {
        throw Error(ErrorKind::NegativeRadicand,
                    "s_" + std::to_string(k) + " radicand " + fmt(radicand));
      }
      j.s.push_back(0.5 * std::sqrt(std::max(0.0, radicand)));
    }
  }
  return j;
}

Eigen::MatrixXd jacobi_matrix(const JacobiCoefficients& j) {
  const auto m = static_cast<Eigen::Index>(j.r.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    out(k, k) = j.r[static_cast<std::size_t>(k)];
    if (k + 1 < m) {
      out(k, k + 1) = out(k + 1, k) = j.s[static_cast<std::size_t>(k)];
    }
  }
  return out;
}

bool is_orthogonal(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const Eigen::MatrixXd gram = m.transpose() * m;
  return (gram - Eigen::MatrixXd::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

bool is_pentadiagonal(const Eigen::MatrixXd& m, double tol) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (std::abs(r - c) > 2 && std::abs(m(r, c)) > tol) return false;
    }
  }
  return true;
}

}  // namespace szl
