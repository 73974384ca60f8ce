#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "support.hpp"
#include "szl/cmv.hpp"

using namespace szl;
using szl::test::kind_of;

namespace {

StochasticMatrix lumped_hexahedron() {
  return StochasticMatrix::from_dense(
      {"A", "B", "C", "D"},
      {{0, 1, 0, 0}, {1.0 / 3, 0, 2.0 / 3, 0}, {0, 2.0 / 3, 0, 1.0 / 3}, {0, 0, 1, 0}});
}

StochasticMatrix distance_lump(const GraphSpec& spec) {
  const auto g = generate(spec);
  return lumped_or_throw(lump(homogeneous_walk(g), distance_partition(g, canonical_root(spec))));
}

double gap(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  return worst;
}

VerblunskySequence seq(std::vector<double> a) {
  VerblunskySequence v;
  v.alphas = std::move(a);
  return v;
}

VerblunskySequence random_sequence(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> unit(-0.99, 0.99);
  VerblunskySequence v;
  for (std::size_t k = 0; k + 1 < n; ++k) v.alphas.push_back(unit(gen));
  v.alphas.push_back(gen() % 2 ? 1.0 : -1.0);
  return v;
}

BirthDeathChain random_chain(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  BirthDeathChain c;
  for (std::size_t k = 0; k < n; ++k) {
    double p = k + 1 < n ? unit(gen) : 0.0;
    double q = k > 0 ? unit(gen) : 0.0;
    double r = unit(gen);
    const double t = p + q + r;
    c.p.push_back(p / t);
    c.q.push_back(q / t);
    c.r.push_back(r / t);
  }
  return c;
}

double chain_gap(const BirthDeathChain& a, const BirthDeathChain& b) {
  return std::max({gap(a.p, b.p), gap(a.q, b.q), gap(a.r, b.r)});
}

const std::vector<double> kHexAlphas{0, -1.0 / 3, 0, 1.0 / 3, 0, 1};

}  // namespace

TEST_CASE("recurrence reproduces reference coefficients") {
  CHECK(gap(verblunsky_via_recurrence(SzegedyOperator(lumped_hexahedron()), "A").sequence.alphas,
            kHexAlphas) <= 1e-12);
  CHECK(gap(verblunsky_via_recurrence(SzegedyOperator(distance_lump({"octahedron"})), "0").sequence.alphas,
            {0, -0.5, 2.0 / 3, 0.2, 1}) <= 1e-12);
  CHECK(gap(verblunsky_via_recurrence(SzegedyOperator(distance_lump({"dodecahedron"})), "0").sequence.alphas,
            {0, -1.0 / 3, 0, -1.0 / 3, 0.5, -5.0 / 9, 4.0 / 7, -5.0 / 33, 8.0 / 19, 11.0 / 27, 1}) <=
        1e-12);
  const SzegedyOperator dodeca(homogeneous_walk(dodecahedron()));
  CHECK(gap(verblunsky_via_recurrence(dodeca, "31").sequence.alphas,
            {0, -1.0 / 3, 0, -1.0 / 3, 0.5, -5.0 / 9, 4.0 / 7, -5.0 / 33, 8.0 / 19, 11.0 / 27, 1}) <=
        1e-12);
}

TEST_CASE("recurrence preconditions") {
  const SzegedyOperator hex(homogeneous_walk(hypercube(3)));
  const Eigen::VectorXd arc = WalkerState::arc(hex.basis_ptr(), "000", "001").amplitudes();
  CHECK(kind_of([&] { verblunsky_via_recurrence(hex.swap_map(), hex.reflection_map(), arc); }) ==
        ErrorKind::NotCoinInvariant);
  const Eigen::VectorXd twice = 2 * hex.phi("000").amplitudes();
  CHECK(kind_of([&] { verblunsky_via_recurrence(hex.swap_map(), hex.reflection_map(), twice); }) ==
        ErrorKind::NotUnit);
  CHECK(kind_of([&] { cmv_orthonormalize(hex.U_map(), hex.U_inverse_map(), twice); }) ==
        ErrorKind::NotUnit);
}

TEST_CASE("CMV basis of the lumped hexahedron") {
  const SzegedyOperator op(lumped_hexahedron());
  const auto result = cmv_orthonormalize(op.U_map(), op.U_inverse_map(), op.phi("A").amplitudes());
  REQUIRE(result.basis.size() == 6);
  const char* order[6][2] = {{"A", "B"}, {"B", "A"}, {"B", "C"}, {"C", "B"}, {"C", "D"}, {"D", "C"}};
  for (std::size_t k = 0; k < 6; ++k) {
    const auto expected = WalkerState::arc(op.basis_ptr(), order[k][0], order[k][1]).amplitudes();
    CHECK((result.basis[k] - expected).cwiseAbs().maxCoeff() <= 1e-12);
  }
  CHECK((result.matrix - build_cmv_matrix(seq(kHexAlphas))).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("CMV basis of the full hexahedron") {
  const SzegedyOperator op(homogeneous_walk(hypercube(3)));
  const auto result = cmv_orthonormalize(op.U_map(), op.U_inverse_map(), op.phi("000").amplitudes());
  REQUIRE(result.basis.size() == 6);
  // e2 = (|001,011> + |001,101> + |010,011> + |010,110> + |100,101> + |100,110>)/sqrt(6)
  const WalkerState e2(op.basis_ptr(), result.basis[2]);
  for (const auto& [i, j] : std::vector<std::pair<const char*, const char*>>{
           {"001", "011"}, {"001", "101"}, {"010", "011"}, {"010", "110"}, {"100", "101"}, {"100", "110"}}) {
    CHECK(e2.amplitude(i, j) == doctest::Approx(1 / std::sqrt(6.0)));
  }
  CHECK(std::abs(e2.norm() - 1) <= 1e-12);
  CHECK(gap(verblunsky_from_cmv_matrix(result.matrix).alphas, kHexAlphas) <= 1e-9);
}

TEST_CASE("invariant vector gives a one-dimensional CMV matrix") {
  const SzegedyOperator op(StochasticMatrix::from_dense({"a"}, {{1}}));
  const auto result = cmv_orthonormalize(op.U_map(), op.U_inverse_map(), op.phi("a").amplitudes());
  CHECK(result.basis.size() == 1);
  CHECK(result.matrix.rows() == 1);
  CHECK(result.matrix(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("both extraction paths agree") {
  for (const char* family : {"tetrahedron", "octahedron", "hexahedron", "icosahedron", "dodecahedron"}) {
    const GraphSpec spec{family};
    const SzegedyOperator full(homogeneous_walk(generate(spec)));
    const auto root = canonical_root(spec);
    const auto via_recurrence = verblunsky_via_recurrence(full, root).sequence;
    const auto result = cmv_orthonormalize(full.U_map(), full.U_inverse_map(), full.phi(root).amplitudes());
    CHECK(gap(verblunsky_from_cmv_matrix(result.matrix).alphas, via_recurrence.alphas) <= 1e-9);
  }
}

TEST_CASE("building CMV matrices") {
  CHECK(build_cmv_matrix(seq({1})) == Eigen::MatrixXd::Constant(1, 1, 1.0));
  const auto free_band = build_cmv_matrix(seq({0, 0, 0, 0, 1}));
  CHECK(is_orthogonal(free_band, 1e-12));
  CHECK(is_pentadiagonal(free_band, 0));
  for (Eigen::Index r = 0; r < 5; ++r) {
    for (Eigen::Index c = 0; c < 5; ++c) CHECK((free_band(r, c) == 0.0 || free_band(r, c) == 1.0));
  }
  CHECK(kind_of([] { build_cmv_matrix(seq({})); }) == ErrorKind::InvalidSequence);
  CHECK(kind_of([] { build_cmv_matrix(seq({0.5, 0.5})); }) == ErrorKind::InvalidSequence);
  CHECK(kind_of([] { build_cmv_matrix(seq({1, 1})); }) == ErrorKind::InvalidSequence);

  auto gen = szl::test::rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const auto v = random_sequence(gen, 1 + gen() % 12);
    const auto f = cmv_factors(v);
    const auto n = static_cast<Eigen::Index>(v.size());
    const Eigen::MatrixXd c = build_cmv_matrix(v);
    CHECK(is_orthogonal(c, 1e-10));
    CHECK(is_pentadiagonal(c, 1e-10));
    CHECK((f.L * f.L - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((f.M * f.M - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(gap(verblunsky_from_cmv_matrix(c).alphas, v.alphas) <= 1e-9);
  }
}

TEST_CASE("reading coefficients off a matrix") {
  const Eigen::MatrixXd tet = build_cmv_matrix(seq({0, -1.0 / 3, 1}));
  CHECK(gap(verblunsky_from_cmv_matrix(tet).alphas, {0, -1.0 / 3, 1}) <= 1e-12);
  CHECK(verblunsky_from_cmv_matrix(Eigen::MatrixXd::Constant(1, 1, 1.0)).alphas ==
        std::vector<double>{1});
  const SzegedyOperator op(StochasticMatrix::from_dense({"A", "B"}, {{0, 1}, {1.0 / 3, 2.0 / 3}}));
  const auto result = cmv_orthonormalize(op.U_map(), op.U_inverse_map(), op.phi("A").amplitudes());
  CHECK(gap(verblunsky_from_cmv_matrix(result.matrix).alphas, {0, -1.0 / 3, 1}) <= 1e-12);

  Eigen::MatrixXd diag = Eigen::MatrixXd::Identity(2, 2);
  diag(1, 1) = -1;
  CHECK(kind_of([&] { verblunsky_from_cmv_matrix(diag); }) == ErrorKind::NotCmvShaped);
  CHECK(kind_of([] { verblunsky_from_cmv_matrix(Eigen::MatrixXd::Zero(2, 3)); }) ==
        ErrorKind::NotCmvShaped);
  auto gen = szl::test::rng(7);
  Eigen::MatrixXd random(5, 5);
  for (Eigen::Index k = 0; k < 25; ++k) random(k) = std::normal_distribution<double>()(gen);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(random).householderQ();
  CHECK(kind_of([&] { verblunsky_from_cmv_matrix(q); }) == ErrorKind::NotCmvShaped);
}

TEST_CASE("Geronimus relations") {
  SUBCASE("Ehrenfest") {
    for (int n = 2; n <= 8; ++n) {
      VerblunskySequence v;
      for (int k = 0; k < 2 * n; ++k) v.alphas.push_back(k % 2 == 0 ? 0.0 : double(k + 1 - n) / n);
      const auto c = geronimus_pqr(v);
      REQUIRE(c.size() == static_cast<std::size_t>(n + 1));
      for (int k = 0; k <= n; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        CHECK(c.q[ku] == doctest::Approx(double(k) / n));
        CHECK(c.p[ku] == doctest::Approx(1 - double(k) / n));
        CHECK(std::abs(c.r[ku]) <= 1e-15);
      }
    }
  }
  SUBCASE("straightened hexahedron chain") {
    const auto c = geronimus_pqr(seq({0, 1.0 / 9, 0, 3.0 / 5, 0, 1}));
    CHECK(gap(c.p, {1, 4.0 / 9, 0.2, 0}) <= 1e-15);
    CHECK(gap(c.q, {0, 5.0 / 9, 0.8, 1}) <= 1e-15);
    CHECK(gap(c.r, {0, 0, 0, 0}) <= 1e-15);
  }
  SUBCASE("two-periodic") {
    const auto c = geronimus_pqr(seq({0, -0.5, 0, -0.5, 0, -0.5, 0, 1}));
    CHECK(c.p[0] == 1.0);
    for (std::size_t k = 1; k + 1 < c.size(); ++k) {
      CHECK(c.p[k] == doctest::Approx(0.75));
      CHECK(c.q[k] == doctest::Approx(0.25));
    }
  }
  SUBCASE("invalid outputs") {
    CHECK(kind_of([] { geronimus_pqr(seq({0.9, 0.9, 0.9, 1})); }) == ErrorKind::NotStochastic);
  }
}

TEST_CASE("inverting the Geronimus relations") {
  BirthDeathChain ehrenfest;
  for (int k = 0; k <= 4; ++k) {
    ehrenfest.q.push_back(k / 4.0);
    ehrenfest.p.push_back(1 - k / 4.0);
    ehrenfest.r.push_back(0);
  }
  CHECK(gap(verblunsky_from_pqr(ehrenfest).alphas, {0, -0.5, 0, 0, 0, 0.5, 0, 1}) <= 1e-15);

  const BirthDeathChain pure{{1, 0}, {0, 1}, {0, 0}};
  CHECK(verblunsky_from_pqr(pure).alphas.front() == 0.0);

  const BirthDeathChain stuck{{0, 0}, {0, 1}, {1, 0}};
  CHECK(kind_of([&] { verblunsky_from_pqr(stuck); }) == ErrorKind::DegenerateChain);

  auto gen = szl::test::rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const auto chain = random_chain(gen, 2 + gen() % 20);
    const auto v = verblunsky_from_pqr(chain);
    CHECK(chain_gap(geronimus_pqr(v), chain) <= 1e-8);
    CHECK(gap(verblunsky_from_pqr(geronimus_pqr(v)).alphas, v.alphas) <= 1e-8);
  }
}

TEST_CASE("quantizing a chain and reading it back") {
  auto gen = szl::test::rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const auto chain = random_chain(gen, 2 + gen() % 30);
    const SzegedyOperator op(birth_death_matrix(chain));
    const auto v = verblunsky_via_recurrence(op, "0").sequence;
    CHECK(chain_gap(geronimus_pqr(v), chain) <= 1e-8);
  }
}

TEST_CASE("Jacobi coefficients") {
  const auto flat = jacobi_from_verblunsky(seq({0, 0, 0, 0, 0, 0, 0, 1}));
  REQUIRE(flat.r.size() == 5);
  for (double r : flat.r) CHECK(r == 0.0);
  CHECK(flat.s[0] == doctest::Approx(1 / std::sqrt(2.0)));  // p_0 = 1, q_1 = 1/2
  for (std::size_t k = 1; k < flat.s.size() - 1; ++k) CHECK(flat.s[k] == doctest::Approx(0.5));

  // s_k^2 = p_k q_{k+1} and r_k match the chain
  VerblunskySequence ehrenfest;
  const int n = 6;
  for (int k = 0; k < 2 * n; ++k) ehrenfest.alphas.push_back(k % 2 == 0 ? 0.0 : double(k + 1 - n) / n);
  const auto j = jacobi_from_verblunsky(ehrenfest);
  const auto c = geronimus_pqr(ehrenfest);
  REQUIRE(j.r.size() == c.size());
  for (std::size_t k = 0; k + 1 < c.size(); ++k) {
    CHECK(j.s[k] * j.s[k] == doctest::Approx(c.p[k] * c.q[k + 1]));
    CHECK(j.r[k] == doctest::Approx(c.r[k]));
  }

  const double a = 0.3;
  const auto two = jacobi_from_verblunsky(seq({a, 1}));
  REQUIRE(two.r.size() == 2);
  CHECK(two.r[0] == doctest::Approx(a));
  CHECK(two.r[1] == doctest::Approx(-a));
  CHECK(two.s[0] == doctest::Approx(std::sqrt(1 - a * a)));
  CHECK(jacobi_from_verblunsky(seq({a, -1})).r.size() == 1);
}

TEST_CASE("Jacobi spectrum lies in the restricted symmetric part") {
  auto gen = szl::test::rng(10);
  for (int trial = 0; trial < 40; ++trial) {
    const auto v = random_sequence(gen, 1 + gen() % 10);
    const auto f = cmv_factors(v);
    const Eigen::MatrixXd c = f.L * f.M;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> m_eig(f.M);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < m_eig.eigenvalues().size(); ++k) {
      if (std::abs(m_eig.eigenvalues()(k) - 1) < 1e-9) keep.push_back(k);
    }
    Eigen::MatrixXd q(c.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) q.col(static_cast<Eigen::Index>(k)) = m_eig.eigenvectors().col(keep[k]);
    const Eigen::MatrixXd h = q.transpose() * (0.5 * (c + c.transpose())) * q;
    const Eigen::MatrixXd jm = jacobi_matrix(jacobi_from_verblunsky(v));
    REQUIRE(jm.rows() == h.rows());
    if (jm.rows() == 0) continue;
    const Eigen::VectorXd a = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h).eigenvalues();
    const Eigen::VectorXd b = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(jm).eigenvalues();
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-8);
  }
}
