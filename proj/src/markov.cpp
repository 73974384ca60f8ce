#include "szl/markov.hpp"

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

}  // namespace

StochasticMatrix::StochasticMatrix(std::vector<Vertex> vertices,
                                   std::vector<std::vector<Entry>> rows, double tol)
    : vertices_(std::move(vertices)), rows_(std::move(rows)) {
  const std::size_t n = vertices_.size();
  if (rows_.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "row count does not match vertex count");
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto& row = rows_[i];
    std::erase_if(row, [](const Entry& e) { return e.p == 0.0; });
    std::sort(row.begin(), row.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
    double sum = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k) {
      const Entry& e = row[k];
      if (e.col >= n) throw Error(ErrorKind::DimensionMismatch, "column index out of range");
      if (k > 0 && row[k - 1].col == e.col) {
        throw Error(ErrorKind::NotStochastic, "repeated column in row '" + vertices_[i] + "'");
      }
      if (!(e.p >= 0.0) || e.p > 1.0 + tol) {
        throw Error(ErrorKind::NotStochastic, "entry (" + vertices_[i] + "," + vertices_[e.col] +
                                                  ") = " + fmt(e.p) + " outside [0,1]");
      }
      sum += e.p;
    }
    if (std::abs(sum - 1.0) > tol) {
      throw Error(ErrorKind::NotStochastic,
                  "row '" + vertices_[i] + "' sums to " + fmt(sum));
    }
  }
}

StochasticMatrix StochasticMatrix::from_dense(std::vector<Vertex> vertices,
                                              const std::vector<std::vector<double>>& rows,
                                              double tol) {
  std::vector<std::vector<Entry>> sparse(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != vertices.size()) {
      throw Error(ErrorKind::DimensionMismatch, "dense row has wrong length");
    }
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      if (rows[i][j] != 0.0) sparse[i].push_back({j, rows[i][j]});
    }
  }
  return StochasticMatrix(std::move(vertices), std::move(sparse), tol);
}

StochasticMatrix StochasticMatrix::from_eigen(std::vector<Vertex> vertices,
                                              const Eigen::MatrixXd& rows, double tol) {
  const auto n = static_cast<Eigen::Index>(vertices.size());
  if (rows.rows() != n || rows.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch, "dense matrix shape does not match vertex count");
  }
  std::vector<std::vector<Entry>> sparse(vertices.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (rows(i, j) != 0.0) {
        sparse[static_cast<std::size_t>(i)].push_back({static_cast<std::size_t>(j), rows(i, j)});
      }
    }
  }
  return StochasticMatrix(std::move(vertices), std::move(sparse), tol);
}

std::size_t StochasticMatrix::require_index(std::string_view label) const {
  auto it = std::find(vertices_.begin(), vertices_.end(), label);
  if (it == vertices_.end()) {
    throw Error(ErrorKind::UnknownVertex, "no vertex '" + std::string(label) + "'");
  }
  return static_cast<std::size_t>(it - vertices_.begin());
}

double StochasticMatrix::at(std::size_t i, std::size_t j) const {
  const auto& row = rows_.at(i);
  auto it = std::lower_bound(row.begin(), row.end(), j,
                             [](const Entry& e, std::size_t c) { return e.col < c; });
  return (it != row.end() && it->col == j) ? it->p : 0.0;
}

Eigen::MatrixXd StochasticMatrix::to_dense() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < size(); ++i) {
    for (const auto& e : rows_[i]) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(e.col)) = e.p;
    }
  }
  return m;
}

Distribution Distribution::delta(std::vector<Vertex> vertices, std::size_t at) {
  Distribution d{std::move(vertices), {}};
  d.p.assign(d.vertices.size(), 0.0);
  d.p.at(at) = 1.0;
  return d;
}

void Distribution::validate(double tol) const {
  if (p.size() != vertices.size()) {
    throw Error(ErrorKind::DimensionMismatch, "distribution length does not match vertex count");
  }
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= -tol)) throw Error(ErrorKind::NotStochastic, "negative probability " + fmt(x));
    sum += x;
  }
  if (std::abs(sum - 1.0) > tol) {
    throw Error(ErrorKind::NotStochastic, "distribution sums to " + fmt(sum));
  }
}

void BirthDeathChain::validate(double tol) const {
  const std::size_t n = p.size();
  if (n == 0 || q.size() != n || r.size() != n) {
    throw Error(ErrorKind::InvalidChain, "p, q, r must be nonempty and of equal length");
  }
  if (std::abs(q[0]) > tol) throw Error(ErrorKind::InvalidChain, "q_0 must be 0");
  if (std::abs(p[n - 1]) > tol) throw Error(ErrorKind::InvalidChain, "p_{n-1} must be 0");
  for (std::size_t k = 0; k < n; ++k) {
    for (double x : {p[k], q[k], r[k]}) {
      if (!(x >= -tol && x <= 1.0 + tol)) {
        throw Error(ErrorKind::InvalidChain,
                    "probability " + fmt(x) + " at state " + std::to_string(k) + " outside [0,1]");
      }
    }
    if (std::abs(p[k] + q[k] + r[k] - 1.0) > tol) {
      throw Error(ErrorKind::InvalidChain, "p+q+r != 1 at state " + std::to_string(k));
    }
  }
}

StochasticMatrix homogeneous_walk(const DirectedGraph& g) {
  std::vector<std::vector<StochasticMatrix::Entry>> rows(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto succ = g.successors(i);
    if (succ.empty()) throw Error(ErrorKind::SinkVertex, "vertex '" + g.vertex(i) + "' has no out-arcs");
    const double w = 1.0 / static_cast<double>(succ.size());
    for (std::size_t j : succ) rows[i].push_back({j, w});
  }
  return StochasticMatrix(g.vertices(), std::move(rows));
}

LumpResult lump(const StochasticMatrix& p, const VertexPartition& part, double tol) {
  const BlockIndex idx = resolve(part, p.vertices());
  const std::size_t nb = idx.block_count();

  std::vector<std::vector<StochasticMatrix::Entry>> rows(nb);
  std::vector<double> sums(nb);
  std::vector<double> reference(nb);
  for (std::size_t u = 0; u < nb; ++u) {
    const auto& members = idx.members[u];
    for (std::size_t m = 0; m < members.size(); ++m) {
      std::fill(sums.begin(), sums.end(), 0.0);
      for (const auto& e : p.row(members[m])) sums[idx.block_of[e.col]] += e.p;
      if (m == 0) {
        reference = sums;
        continue;
      }
      for (std::size_t v = 0; v < nb; ++v) {
        if (std::abs(sums[v] - reference[v]) > tol) {
          return NotLumpable{u, v, p.vertex(members[0]), p.vertex(members[m]), reference[v], sums[v]};
        }
      }
    }
    for (std::size_t v = 0; v < nb; ++v) {
      if (reference[v] != 0.0) rows[u].push_back({v, reference[v]});
    }
  }
  // Rows inherit the source tolerance plus the lumping slack.
  return StochasticMatrix(part.names(), std::move(rows), std::max(kStochasticTol, tol) * 10);
}

StochasticMatrix lumped_or_throw(LumpResult result) {
  if (auto* m = std::get_if<StochasticMatrix>(&result)) return std::move(*m);
  const auto& w = std::get<NotLumpable>(result);
  throw Error(ErrorKind::NotLumpable,
              "block pair (" + std::to_string(w.u) + "," + std::to_string(w.v) +
                  ") row sums differ between '" + w.first + "' (" + fmt(w.first_sum) + ") and '" +
                  w.second + "' (" + fmt(w.second_sum) + ")");
}

StochasticMatrix birth_death_matrix(const BirthDeathChain& chain) {
  chain.validate();
  const std::size_t n = chain.size();
  std::vector<Vertex> vertices;
  std::vector<std::vector<StochasticMatrix::Entry>> rows(n);
  for (std::size_t k = 0; k < n; ++k) {
    vertices.push_back(std::to_string(k));
    if (k > 0 && chain.q[k] > 0) rows[k].push_back({k - 1, chain.q[k]});
    if (chain.r[k] > 0) rows[k].push_back({k, chain.r[k]});
    if (k + 1 < n && chain.p[k] > 0) rows[k].push_back({k + 1, chain.p[k]});
  }
  return StochasticMatrix(std::move(vertices), std::move(rows));
}

BirthDeathChain birth_death_from_matrix(const StochasticMatrix& p) {
  const std::size_t n = p.size();
  BirthDeathChain chain{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                        std::vector<double>(n, 0.0)};
  for (std::size_t k = 0; k < n; ++k) {
    for (const auto& e : p.row(k)) {
      if (e.col + 1 == k) {
        chain.q[k] = e.p;
      } else if (e.col == k) {
        chain.r[k] = e.p;
      } else if (e.col == k + 1) {
        chain.p[k] = e.p;
      } else {
        throw Error(ErrorKind::InvalidChain, "matrix is not tridiagonal at row " + std::to_string(k));
      }
    }
  }
  return chain;
}

Distribution classical_evolve(const StochasticMatrix& p, const Distribution& dist, int steps) {
  if (dist.vertices != p.vertices()) {
    throw Error(ErrorKind::DimensionMismatch, "distribution is not over the matrix vertices");
  }
  if (steps < 0) throw Error(ErrorKind::InvalidParams, "steps must be nonnegative");
  std::vector<double> cur = dist.p;
  std::vector<double> next(cur.size());
  for (int t = 0; t < steps; ++t) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (cur[i] == 0.0) continue;
      for (const auto& e : p.row(i)) next[e.col] += cur[i] * e.p;
    }
    cur.swap(next);
  }
  return Distribution{dist.vertices, std::move(cur)};
}

Distribution lump_distribution(const Distribution& dist, const VertexPartition& part) {
  const BlockIndex idx = resolve(part, dist.vertices);
  Distribution out{part.names(), std::vector<double>(part.size(), 0.0)};
  for (std::size_t i = 0; i < dist.p.size(); ++i) out.p[idx.block_of[i]] += dist.p[i];
  return out;
}

}  // namespace szl
