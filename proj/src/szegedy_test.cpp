#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "szl/szegedy.hpp"

using namespace szl;
using szl::test::kind_of;

namespace {

const double r2 = std::sqrt(2.0);
const double r3 = std::sqrt(3.0);

StochasticMatrix lumped_hexahedron() {
  return StochasticMatrix::from_dense(
      {"A", "B", "C", "D"},
      {{0, 1, 0, 0}, {1.0 / 3, 0, 2.0 / 3, 0}, {0, 2.0 / 3, 0, 1.0 / 3}, {0, 0, 1, 0}});
}

WalkerState arc(const SzegedyOperator& op, std::string_view i, std::string_view j) {
  return WalkerState::arc(op.basis_ptr(), i, j);
}

}  // namespace

TEST_CASE("arc basis is the support plus reversal closure") {
  const auto p = StochasticMatrix::from_dense({"a", "b", "c"}, {{0, 1, 0}, {0, 0, 1}, {0.5, 0.5, 0}});
  const ArcBasis basis(p);
  // support (a,b),(b,c),(c,a),(c,b); closure adds (a,c),(b,a)
  CHECK(basis.size() == 6);
  for (std::size_t a = 0; a < basis.size(); ++a) {
    CHECK(basis.arc(basis.reverse(a)) ==
          std::pair{basis.arc(a).second, basis.arc(a).first});
  }
  CHECK(basis.find(0, 2).has_value());
  CHECK_FALSE(basis.find(0, 0).has_value());
  CHECK(kind_of([&] { basis.require("a", "a"); }) == ErrorKind::ArcNotInBasis);
  CHECK(kind_of([&] { basis.require("a", "z"); }) == ErrorKind::UnknownVertex);
}

TEST_CASE("phi vectors") {
  const SzegedyOperator hex(homogeneous_walk(hypercube(3)));
  const auto phi = hex.phi("000");
  CHECK(phi.norm() == doctest::Approx(1.0));
  for (const char* j : {"001", "010", "100"}) CHECK(phi.amplitude("000", j) == doctest::Approx(1 / r3));
  CHECK(phi.amplitude("001", "000") == 0.0);

  const SzegedyOperator lumped(lumped_hexahedron());
  const auto phi_b = lumped.phi("B");
  CHECK(phi_b.amplitude("B", "A") == doctest::Approx(1 / r3));
  CHECK(phi_b.amplitude("B", "C") == doctest::Approx(r2 / r3));

  const SzegedyOperator two(StochasticMatrix::from_dense({"a", "b"}, {{0, 1}, {1, 0}}));
  CHECK(two.phi("a").distance(arc(two, "a", "b")) == 0.0);
  CHECK(kind_of([&] { two.phi("q"); }) == ErrorKind::UnknownVertex);

  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t k = 0; k < 8; ++k) {
      CHECK(std::abs(hex.phi(i).dot(hex.phi(k)) - (i == k ? 1.0 : 0.0)) <= 1e-12);
    }
  }
}

TEST_CASE("swap") {
  const SzegedyOperator lumped(lumped_hexahedron());
  CHECK(apply_swap(arc(lumped, "A", "B")).distance(arc(lumped, "B", "A")) == 0.0);
  const auto sym = (1 / r2) * (arc(lumped, "B", "C") + arc(lumped, "C", "B"));
  CHECK(apply_swap(sym).distance(sym) == 0.0);
  CHECK(apply_swap(lumped.phi("A")).distance(arc(lumped, "B", "A")) == 0.0);
}

TEST_CASE("reflection and U on the hexahedron") {
  const SzegedyOperator hex(homogeneous_walk(hypercube(3)));
  const auto s = arc(hex, "001", "101");
  const auto reflected = (1.0 / 3) * (2.0 * arc(hex, "001", "000") + 2.0 * arc(hex, "001", "011") -
                                      arc(hex, "001", "101"));
  CHECK(hex.apply_reflection(s).distance(reflected) <= 1e-15);
  const auto stepped = (1.0 / 3) * (2.0 * arc(hex, "000", "001") + 2.0 * arc(hex, "011", "001") -
                                    arc(hex, "101", "001"));
  CHECK(hex.apply_U(s).distance(stepped) <= 1e-15);
  CHECK(hex.apply_reflection(hex.phi("011")).distance(hex.phi("011")) <= 1e-15);

  // a vector orthogonal to every phi is negated
  const auto perp = (1 / r2) * (arc(hex, "000", "001") - arc(hex, "000", "010"));
  CHECK(hex.apply_reflection(perp).distance(-1.0 * perp) <= 1e-15);
}

TEST_CASE("lumped hexahedron action table") {
  const SzegedyOperator op(lumped_hexahedron());
  // basis order AB, BA, BC, CB, CD, DC
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(6, 6);
  expected(1, 0) = 1;
  expected(0, 1) = -1.0 / 3;
  expected(3, 1) = 2 * r2 / 3;
  expected(0, 2) = 2 * r2 / 3;
  expected(3, 2) = 1.0 / 3;
  expected(2, 3) = 1.0 / 3;
  expected(5, 3) = 2 * r2 / 3;
  expected(2, 4) = 2 * r2 / 3;
  expected(5, 4) = -1.0 / 3;
  expected(4, 5) = 1;
  const Eigen::MatrixXd m = op.operator_matrix();
  CHECK((m - expected).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((m.transpose() * m - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-12);

  CHECK(op.apply_U(arc(op, "D", "C")).distance(arc(op, "C", "D")) <= 1e-15);
  CHECK(op.apply_U_inverse(arc(op, "C", "D")).distance(arc(op, "D", "C")) <= 1e-15);
}

TEST_CASE("U inverse agrees with the inverted dense matrix") {
  const SzegedyOperator op(lumped_hexahedron());
  const Eigen::MatrixXd inverse = op.operator_matrix().fullPivLu().inverse();
  for (std::size_t a = 0; a < op.basis().size(); ++a) {
    WalkerState e(op.basis_ptr());
    e.amplitudes()(static_cast<Eigen::Index>(a)) = 1;
    const Eigen::VectorXd got = op.apply_U_inverse(e).amplitudes();
    CHECK((got - inverse.col(static_cast<Eigen::Index>(a))).cwiseAbs().maxCoeff() <= 1e-12);
  }
  // U^-1 |B,A> from the oracle: R|A,B> = |A,B>, so U^-1 |B,A> = |A,B>
  CHECK(op.apply_U_inverse(arc(op, "B", "A")).distance(arc(op, "A", "B")) <= 1e-15);
}

TEST_CASE("operator matrices") {
  const SzegedyOperator two(StochasticMatrix::from_dense({"a", "b"}, {{0, 1}, {1, 0}}));
  CHECK(two.operator_matrix() == (Eigen::MatrixXd(2, 2) << 0, 1, 1, 0).finished());

  const SzegedyOperator tet(StochasticMatrix::from_dense({"A", "B"}, {{0, 1}, {1.0 / 3, 2.0 / 3}}));
  const Eigen::VectorXd col = tet.operator_matrix().col(1);  // |B,A>
  CHECK(col(0) == doctest::Approx(-1.0 / 3));
  CHECK(col(1) == doctest::Approx(0.0));
  CHECK(col(2) == doctest::Approx(2 * r2 / 3));

  const SzegedyOperator hex(homogeneous_walk(hypercube(3)));
  CHECK(kind_of([&] { hex.operator_matrix(10); }) == ErrorKind::BasisTooLarge);
}

TEST_CASE("algebraic properties on random states") {
  auto gen = szl::test::rng(2);
  for (const char* family : {"tetrahedron", "octahedron", "hexahedron", "icosahedron", "dodecahedron"}) {
    const SzegedyOperator op(homogeneous_walk(generate({family})));
    const auto n = static_cast<Eigen::Index>(op.basis().size());
    for (int trial = 0; trial < 20; ++trial) {
      const WalkerState s(op.basis_ptr(), szl::test::random_unit(n, gen));
      CHECK(std::abs(op.apply_U(s).norm() - 1.0) <= 1e-12);
      CHECK(op.apply_U(op.apply_U_inverse(s)).distance(s) <= 1e-12);
      CHECK(op.apply_reflection(op.apply_reflection(s)).distance(s) <= 1e-12);
      CHECK(apply_swap(apply_swap(s)).distance(s) == 0.0);
      const auto once = op.apply_projection(s);
      CHECK(op.apply_projection(once).distance(once) <= 1e-12);
    }
  }
}

TEST_CASE("padding arcs are negated by the reflection") {
  // c -> a has probability zero, but (c, a) is in the basis through a -> c
  const auto p = StochasticMatrix::from_dense({"a", "b", "c"}, {{0, 0.5, 0.5}, {1, 0, 0}, {0, 1, 0}});
  const SzegedyOperator op(p);
  const auto pad = arc(op, "c", "a");
  CHECK(op.apply_reflection(pad).distance(-1.0 * pad) <= 1e-15);
  auto gen = szl::test::rng(3);
  const WalkerState s(op.basis_ptr(),
                      szl::test::random_unit(static_cast<Eigen::Index>(op.basis().size()), gen));
  CHECK(std::abs(op.apply_U(s).norm() - 1.0) <= 1e-12);
}

TEST_CASE("walker state arithmetic guards the basis") {
  const SzegedyOperator a(lumped_hexahedron());
  const SzegedyOperator b(homogeneous_walk(hypercube(3)));
  CHECK(kind_of([&] { a.phi("A").dot(b.phi("000")); }) == ErrorKind::BasisMismatch);
  CHECK(kind_of([&] { a.apply_U(b.phi("000")); }) == ErrorKind::BasisMismatch);
  CHECK(kind_of([&] { WalkerState(a.basis_ptr(), Eigen::VectorXd::Zero(2)); }) ==
        ErrorKind::DimensionMismatch);
}
