#include <gtest/gtest.h>

#include <random>

#include "rydswap/qcore.hpp"

using namespace rydswap;

namespace {

CMatrix random_matrix(int n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
  }
  return m;
}

}  // namespace

TEST(Basis, TwoThreeLevelAtoms) {
  const auto b = build_basis({three_level_scheme(400), three_level_scheme(400)});
  EXPECT_EQ(b.dim, 9u);
  EXPECT_EQ(b.comp_indices, (std::vector<std::size_t>{0, 1, 3, 4}));
}

TEST(Basis, ThreeAtomsOrdered) {
  const auto s = three_level_scheme(400);
  const auto b = build_basis({s, s, s});
  EXPECT_EQ(b.dim, 27u);
  ASSERT_EQ(b.comp_indices.size(), 8u);
  for (std::size_t k = 0; k < 8; ++k) {
    const auto levels = levels_of(b, b.comp_indices[k]);
    for (int a = 0; a < 3; ++a) EXPECT_EQ(levels[a], b.bit(k, a));
  }
}

TEST(Basis, MuxControlWithFourTargets) {
  const auto t = three_level_scheme(400);
  const auto b = build_basis({mux_control_scheme(400), t, t, t, t});
  EXPECT_EQ(b.dim, 324u);
  EXPECT_EQ(b.comp_indices.size(), 32u);
}

TEST(Basis, IndexExamples) {
  const auto s = three_level_scheme(400);
  const auto b2 = build_basis({s, s});
  EXPECT_EQ(index_of(b2, {"0", "0"}), 0u);
  EXPECT_EQ(index_of(b2, {"r", "r"}), 8u);
  const auto b3 = build_basis({s, s, s});
  EXPECT_EQ(index_of(b3, {"1", "0", "r"}), 11u);
}

TEST(Basis, RoundTripAndComputationalOrder) {
  const auto t = three_level_scheme(400);
  const auto b = build_basis({mux_control_scheme(400), t, t, t});
  for (std::size_t i = 0; i < b.dim; ++i) EXPECT_EQ(index_of(b, labels_of(b, i)), i);
  for (std::size_t k = 1; k < b.comp_indices.size(); ++k) EXPECT_LT(b.comp_indices[k - 1], b.comp_indices[k]);
  for (std::size_t idx : b.comp_indices) EXPECT_FALSE(b.has_rydberg(idx));
}

TEST(Basis, Errors) {
  EXPECT_THROW(build_basis({}), ModelError);
  LevelScheme bad{{"0", "r"}, {false, true}, {0.0, 0.0025}};
  EXPECT_THROW(build_basis({bad}), ModelError);
  LevelScheme negative{{"0", "1"}, {false, false}, {0.0, -1.0}};
  EXPECT_THROW(build_basis({negative}), ModelError);
  LevelScheme ground_decay{{"0", "1", "r"}, {false, false, true}, {0.1, 0.0, 0.0}};
  EXPECT_THROW(build_basis({ground_decay}), ModelError);
  const auto b = build_basis({three_level_scheme(400)});
  EXPECT_THROW(index_of(b, {"x"}), ModelError);
  EXPECT_THROW(index_of(b, {"0", "0"}), ModelError);
}

TEST(LinearAlgebra, ProductsMatchNaiveLoops) {
  std::mt19937 rng(7);
  const CMatrix a = random_matrix(5, rng);
  const CMatrix b = random_matrix(5, rng);
  const CMatrix c = a * b;
  const CVector v = b.col(0);
  const CVector av = a * v;
  for (int i = 0; i < 5; ++i) {
    cplx sv = 0.0;
    for (int k = 0; k < 5; ++k) sv += a(i, k) * v(k);
    EXPECT_LT(std::abs(av(i) - sv), 1e-12 * std::max(1.0, std::abs(sv)));
    for (int j = 0; j < 5; ++j) {
      cplx s = 0.0;
      for (int k = 0; k < 5; ++k) s += a(i, k) * b(k, j);
      EXPECT_LT(std::abs(c(i, j) - s), 1e-12 * std::max(1.0, std::abs(s)));
    }
  }
}

TEST(LinearAlgebra, HermitianEigenReconstructs) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix r = random_matrix(9, rng);
    const CMatrix h = r + r.adjoint();
    const HermitianEigen e = hermitian_eigen(h);
    const CMatrix back = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
    EXPECT_LT((back - h).norm(), 1e-9);
    const Eigen::VectorXcd general = h.eigenvalues();
    for (Eigen::Index k = 0; k < general.size(); ++k) EXPECT_LT(std::abs(general(k).imag()), 1e-10);
  }
}

TEST(LinearAlgebra, WrapPhase) {
  EXPECT_DOUBLE_EQ(wrap_phase(kPi), kPi);
  EXPECT_NEAR(wrap_phase(-kPi), kPi, 1e-15);
  EXPECT_NEAR(wrap_phase(-1.5 * kPi), 0.5 * kPi, 1e-15);
  EXPECT_NEAR(wrap_phase(7.0 * kPi + 0.1), -kPi + 0.1, 1e-12);
}
