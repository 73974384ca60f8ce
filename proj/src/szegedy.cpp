#include "szl/szegedy.hpp"

#include <algorithm>
#include <cmath>

#include "szl/errors.hpp"

namespace szl {

ArcBasis::ArcBasis(const StochasticMatrix& p) : vertices_(p.vertices()) {
  const std::size_t n = p.size();
  std::vector<std::vector<std::size_t>> coins(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& e : p.row(i)) {
      coins[i].push_back(e.col);
      coins[e.col].push_back(i);
    }
  }
  offsets_.reserve(n + 1);
  offsets_.push_back(0);
  for (std::size_t i = 0; i < n; ++i) {
    auto& c = coins[i];
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (std::size_t j : c) arcs_.emplace_back(i, j);
    offsets_.push_back(arcs_.size());
  }
  reverse_.resize(arcs_.size());
  for (std::size_t a = 0; a < arcs_.size(); ++a) {
    reverse_[a] = *find(arcs_[a].second, arcs_[a].first);
  }
}

std::optional<std::size_t> ArcBasis::find(std::size_t i, std::size_t j) const {
  if (i >= vertices_.size()) return std::nullopt;
  auto first = arcs_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
  auto last = arcs_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
  auto it = std::lower_bound(first, last, std::pair{i, j});
  if (it == last || it->second != j) return std::nullopt;
  return static_cast<std::size_t>(it - arcs_.begin());
}

std::size_t ArcBasis::require(std::size_t i, std::size_t j) const {
  if (auto a = find(i, j)) return *a;
  throw Error(ErrorKind::ArcNotInBasis,
              "arc (" + vertices_.at(i) + "," + vertices_.at(j) + ") is not in the basis");
}

std::size_t ArcBasis::vertex_index(std::string_view label) const {
  auto it = std::find(vertices_.begin(), vertices_.end(), label);
  if (it == vertices_.end()) {
    throw Error(ErrorKind::UnknownVertex, "no vertex '" + std::string(label) + "'");
  }
  return static_cast<std::size_t>(it - vertices_.begin());
}

std::size_t ArcBasis::require(std::string_view i, std::string_view j) const {
  return require(vertex_index(i), vertex_index(j));
}

// WalkerState ----------------------------------------------------------------

WalkerState::WalkerState(std::shared_ptr<const ArcBasis> basis)
    : basis_(std::move(basis)),
      amp_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis_->size()))) {}

WalkerState::WalkerState(std::shared_ptr<const ArcBasis> basis, Eigen::VectorXd amplitudes)
    : basis_(std::move(basis)), amp_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amp_.size()) != basis_->size()) {
    throw Error(ErrorKind::DimensionMismatch, "amplitude vector does not match the arc basis");
  }
}

WalkerState WalkerState::arc(std::shared_ptr<const ArcBasis> basis, std::string_view i,
                             std::string_view j) {
  const std::size_t a = basis->require(i, j);
  WalkerState s(std::move(basis));
  s.amp_(static_cast<Eigen::Index>(a)) = 1.0;
  return s;
}

double WalkerState::amplitude(std::string_view i, std::string_view j) const {
  const auto a = basis_->find(basis_->vertex_index(i), basis_->vertex_index(j));
  return a ? amp_(static_cast<Eigen::Index>(*a)) : 0.0;
}

void WalkerState::require_same_basis(const WalkerState& other) const {
  if (basis_ != other.basis_ && basis_->size() != other.basis_->size()) {
    throw Error(ErrorKind::BasisMismatch, "states live on different arc bases");
  }
}

double WalkerState::dot(const WalkerState& other) const {
  require_same_basis(other);
  return amp_.dot(other.amp_);
}

double WalkerState::distance(const WalkerState& other) const {
  require_same_basis(other);
  return (amp_ - other.amp_).norm();
}

WalkerState& WalkerState::operator+=(const WalkerState& other) {
  require_same_basis(other);
  amp_ += other.amp_;
  return *this;
}

WalkerState& WalkerState::operator-=(const WalkerState& other) {
  require_same_basis(other);
  amp_ -= other.amp_;
  return *this;
}

WalkerState& WalkerState::operator*=(double s) {
  amp_ *= s;
  return *this;
}

WalkerState operator+(WalkerState a, const WalkerState& b) { return a += b; }
WalkerState operator-(WalkerState a, const WalkerState& b) { return a -= b; }
WalkerState operator*(double s, WalkerState a) { return a *= s; }

WalkerState apply_swap(const WalkerState& s) {
  const ArcBasis& basis = s.basis();
  Eigen::VectorXd out(s.amplitudes().size());
  for (std::size_t a = 0; a < basis.size(); ++a) {
    out(static_cast<Eigen::Index>(basis.reverse(a))) = s[a];
  }
  return WalkerState(s.basis_ptr(), std::move(out));
}

// SzegedyOperator --------------------------------------------------------------

SzegedyOperator::SzegedyOperator(StochasticMatrix p)
    : chain_(std::move(p)), basis_(std::make_shared<const ArcBasis>(chain_)) {
  sqrt_p_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis_->size()));
  for (std::size_t i = 0; i < chain_.size(); ++i) {
    for (const auto& e : chain_.row(i)) {
      sqrt_p_(static_cast<Eigen::Index>(basis_->require(i, e.col))) = std::sqrt(e.p);
    }
  }
}

void SzegedyOperator::require_basis(const WalkerState& s) const {
  if (s.basis_ptr() != basis_ && s.basis().size() != basis_->size()) {
    throw Error(ErrorKind::BasisMismatch, "state is not on this operator's arc basis");
  }
}

WalkerState SzegedyOperator::phi(std::string_view vertex) const {
  return phi(basis_->vertex_index(vertex));
}

WalkerState SzegedyOperator::phi(std::size_t vertex) const {
  if (vertex >= chain_.size()) throw Error(ErrorKind::UnknownVertex, "vertex index out of range");
  WalkerState s(basis_);
  const auto begin = static_cast<Eigen::Index>(basis_->row_begin(vertex));
  const auto len = static_cast<Eigen::Index>(basis_->row_end(vertex)) - begin;
  s.amplitudes().segment(begin, len) = sqrt_p_.segment(begin, len);
  return s;
}

void SzegedyOperator::project_in_place(Eigen::VectorXd& v) const {
  for (std::size_t i = 0; i < chain_.size(); ++i) {
    const auto begin = static_cast<Eigen::Index>(basis_->row_begin(i));
    const auto len = static_cast<Eigen::Index>(basis_->row_end(i)) - begin;
    const auto w = sqrt_p_.segment(begin, len);
    const double overlap = w.dot(v.segment(begin, len));
    v.segment(begin, len) = overlap * w;
  }
}

void SzegedyOperator::reflect_in_place(Eigen::VectorXd& v) const {
  for (std::size_t i = 0; i < chain_.size(); ++i) {
    const auto begin = static_cast<Eigen::Index>(basis_->row_begin(i));
    const auto len = static_cast<Eigen::Index>(basis_->row_end(i)) - begin;
    const auto w = sqrt_p_.segment(begin, len);
    auto seg = v.segment(begin, len);
    const double overlap = w.dot(seg);
    seg = 2.0 * overlap * w - seg;
  }
}

void SzegedyOperator::swap_in_place(Eigen::VectorXd& v) const {
  Eigen::VectorXd out(v.size());
  for (std::size_t a = 0; a < basis_->size(); ++a) {
    out(static_cast<Eigen::Index>(basis_->reverse(a))) = v(static_cast<Eigen::Index>(a));
  }
  v.swap(out);
}

WalkerState SzegedyOperator::apply_projection(const WalkerState& s) const {
  require_basis(s);
  Eigen::VectorXd v = s.amplitudes();
  project_in_place(v);
  return WalkerState(basis_, std::move(v));
}

WalkerState SzegedyOperator::apply_reflection(const WalkerState& s) const {
  require_basis(s);
  Eigen::VectorXd v = s.amplitudes();
  reflect_in_place(v);
  return WalkerState(basis_, std::move(v));
}

WalkerState SzegedyOperator::apply_U(const WalkerState& s) const {
  require_basis(s);
  Eigen::VectorXd v = s.amplitudes();
  reflect_in_place(v);
  swap_in_place(v);
  return WalkerState(basis_, std::move(v));
}

WalkerState SzegedyOperator::apply_U_inverse(const WalkerState& s) const {
  require_basis(s);
  Eigen::VectorXd v = s.amplitudes();
  swap_in_place(v);
  reflect_in_place(v);
  return WalkerState(basis_, std::move(v));
}

LinearMap SzegedyOperator::U_map() const {
  return [this](const Eigen::VectorXd& x) {
    Eigen::VectorXd v = x;
    reflect_in_place(v);
    swap_in_place(v);
    return v;
  };
}

LinearMap SzegedyOperator::U_inverse_map() const {
  return [this](const Eigen::VectorXd& x) {
    Eigen::VectorXd v = x;
    swap_in_place(v);
    reflect_in_place(v);
    return v;
  };
}

LinearMap SzegedyOperator::swap_map() const {
  return [this](const Eigen::VectorXd& x) {
    Eigen::VectorXd v = x;
    swap_in_place(v);
    return v;
  };
}

LinearMap SzegedyOperator::reflection_map() const {
  return [this](const Eigen::VectorXd& x) {
    Eigen::VectorXd v = x;
    reflect_in_place(v);
    return v;
  };
}

Eigen::MatrixXd SzegedyOperator::operator_matrix(std::size_t cap) const {
  const std::size_t n = basis_->size();
  if (n > cap) {
    throw Error(ErrorKind::BasisTooLarge,
                std::to_string(n) + " arcs exceed the cap of " + std::to_string(cap));
  }
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd m(dim, dim);
  Eigen::VectorXd col(dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    col.setZero();
    col(b) = 1.0;
    reflect_in_place(col);
    swap_in_place(col);
    m.col(b) = col;
  }
  return m;
}

}  // namespace szl
