// Copyright 2026 The IFIC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "ific/geometry.hpp"
#include "support.hpp"

namespace ific {
namespace {

TEST(Rotation, RejectsNonOrthonormal) {
  Matrix3 m = Matrix3::Identity();
  m(0, 1) = 0.1;
  EXPECT_THROW(Rotation{m}, InvalidRotation);
  EXPECT_THROW(Rotation{Matrix3(-Matrix3::Identity())}, InvalidRotation);
  EXPECT_NO_THROW(Rotation{Rotation::about_axis(Vector3(1, 2, 3), 0.7).matrix()});
}

TEST(BinaryPattern, NonzerosAndComplement) {
  Vector6 f;
  f << 0, 0, -10, 0.5, -0.5, 0;
  const BinaryPattern p = BinaryPattern::nonzeros_of(f);
  EXPECT_EQ(p, BinaryPattern({0, 0, 1, 1, 1, 0}));
  EXPECT_EQ(p.complement(), BinaryPattern({1, 1, 0, 0, 0, 1}));
  EXPECT_EQ(p.count(), 3);
  EXPECT_THROW(BinaryPattern({0, 2, 0, 0, 0, 0}), ConfigError);
}

TEST(DirectionalBasis, AxisAlignedSelection) {
  const DirectionalBasis b = build_directional_basis(Rotation(), BinaryPattern({0, 0, 1, 0, 0, 0}));
  Matrix6 expected = Matrix6::Zero();
  expected(2, 2) = 1.0;
  EXPECT_TRUE(b.span.isApprox(expected, 1e-12));
  EXPECT_EQ(b.rank, 1);
  Vector6 e3 = Vector6::Zero();
  e3[2] = 1.0;
  EXPECT_TRUE(b.directions.col(2).isApprox(e3));
  for (int c : {0, 1, 3, 4, 5}) EXPECT_TRUE(b.directions.col(c).isZero());
}

TEST(DirectionalBasis, WipingPattern) {
  const DirectionalBasis b = build_directional_basis(Rotation(), BinaryPattern({0, 0, 1, 1, 1, 0}));
  Vector6 diag;
  diag << 0, 0, 1, 1, 1, 0;
  EXPECT_TRUE(b.span.isApprox(Matrix6(diag.asDiagonal()), 1e-12));
  EXPECT_EQ(b.rank, 3);
}

TEST(DirectionalBasis, TiltedFrameMatchesOuterProduct) {
  const Rotation r = Rotation::about_axis(Vector3::UnitY(), std::numbers::pi / 6.0);
  const DirectionalBasis b = build_directional_basis(r, BinaryPattern({0, 0, 1, 0, 0, 0}));
  Vector6 d = Vector6::Zero();
  d.head<3>() = r.matrix().col(2);
  const Matrix6 oracle = d * d.transpose() / d.squaredNorm();
  EXPECT_LT((b.span - oracle).norm(), 1e-12);
  EXPECT_LT((b.span * b.span - b.span).norm(), 1e-9);
  EXPECT_LT((b.span * b.kernel).norm(), 1e-9);
}

TEST(DirectionalBasis, RandomBasesAreProjectors) {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 1000; ++n) {
    const Rotation r = test::random_rotation(rng);
    const BinaryPattern p = test::random_pattern(rng);
    const DirectionalBasis b = build_directional_basis(r, p);
    ASSERT_LT((b.span - b.span.transpose()).norm(), 1e-9);
    ASSERT_LT((b.span * b.span - b.span).norm(), 1e-9);
    ASSERT_LT((b.span * b.kernel).norm(), 1e-9);
    ASSERT_EQ(b.span + b.kernel, Matrix6::Identity());
    ASSERT_NEAR(b.span.trace(), p.count(), 1e-6);
    ASSERT_EQ(b.rank, p.count());
    ASSERT_LT((b.span * b.directions - b.directions).norm(), 1e-9);
  }
}

TEST(DirectionalBasis, ComplementaryPatternsGiveComplementaryProjectors) {
  std::mt19937_64 rng(12);
  for (int n = 0; n < 200; ++n) {
    const Rotation r = test::random_rotation(rng);
    const BinaryPattern p = test::random_pattern(rng);
    const DirectionalBasis w = build_directional_basis(r, p);
    const DirectionalBasis i = build_directional_basis(r, p.complement());
    ASSERT_LT((i.span - w.kernel).norm(), 1e-9);
  }
}

TEST(InteractionPowers, ZeroFlow) {
  const DirectionalBasis b = build_directional_basis(Rotation(), BinaryPattern({0, 0, 1, 0, 0, 0}));
  Wrench f;
  f << 1, 2, 3, 4, 5, 6;
  const InteractionPowers p = interaction_powers(Twist::Zero(), f, b);
  EXPECT_EQ(p.constrained, 0.0);
  EXPECT_EQ(p.unconstrained, 0.0);
}

TEST(InteractionPowers, HandComputedSplit) {
  const DirectionalBasis b = build_directional_basis(Rotation(), BinaryPattern({0, 0, 1, 0, 0, 0}));
  Twist v;
  v << 0.1, 0, 0.05, 0, 0, 0;
  Wrench f;
  f << 2, 0, -10, 0, 0, 0;
  const InteractionPowers p = interaction_powers(v, f, b);
  EXPECT_NEAR(p.constrained, 0.05 * -10.0, 1e-15);
  EXPECT_NEAR(p.unconstrained, 0.1 * 2.0, 1e-15);
}

TEST(InteractionPowers, FullConstraint) {
  const DirectionalBasis b =
      build_directional_basis(Rotation(), BinaryPattern({1, 1, 1, 1, 1, 1}));
  std::mt19937_64 rng(3);
  const Twist v = test::random_vector(rng);
  const Wrench f = test::random_vector(rng, 20.0);
  const InteractionPowers p = interaction_powers(v, f, b);
  EXPECT_NEAR(p.constrained, v.dot(f), 1e-12);
  EXPECT_NEAR(p.unconstrained, 0.0, 1e-12);
}

TEST(InteractionPowers, SplitIsExactOnRandomSamples) {
  std::mt19937_64 rng(5);
  for (int n = 0; n < 1000; ++n) {
    const DirectionalBasis b =
        build_directional_basis(test::random_rotation(rng), test::random_pattern(rng));
    const Twist v = test::random_vector(rng);
    const Wrench f = test::random_vector(rng, 30.0);
    const InteractionPowers p = interaction_powers(v, f, b);
    const double total = v.dot(f);
    ASSERT_LE(std::abs(p.constrained + p.unconstrained - total),
              1e-9 * std::max(1.0, v.norm() * f.norm()));
  }
}

TEST(RotateGain, IdentityAndIsotropic) {
  Matrix6 k = Matrix6::Zero();
  k.diagonal() << 1, 2, 3, 4, 5, 6;
  EXPECT_EQ(rotate_gain(k, Rotation()), k);
  const Rotation r = Rotation::about_axis(Vector3(0.3, -1, 2), 1.1);
  const Matrix6 iso = 2.0 * Matrix6::Identity();
  EXPECT_LT((rotate_gain(iso, r) - iso).norm(), 1e-12);
}

TEST(RotateGain, QuarterTurnAboutZSwapsAxes) {
  Matrix6 k = Matrix6::Identity();
  k(0, 0) = 1;
  k(1, 1) = 2;
  k(2, 2) = 3;
  const Matrix6 out = rotate_gain(k, Rotation::about_axis(Vector3::UnitZ(), std::numbers::pi / 2));
  EXPECT_NEAR(out(0, 0), 2.0, 1e-12);
  EXPECT_NEAR(out(1, 1), 1.0, 1e-12);
  EXPECT_NEAR(out(2, 2), 3.0, 1e-12);
}

TEST(RotateGain, PreservesSymmetryAndSpectrum) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> gain(0.1, 100.0);
  for (int n = 0; n < 200; ++n) {
    Matrix6 k = Matrix6::Zero();
    for (int i = 0; i < 6; ++i) k(i, i) = gain(rng);
    const Matrix6 out = rotate_gain(k, test::random_rotation(rng));
    ASSERT_LT((out - out.transpose()).norm(), 1e-9);
    Eigen::SelfAdjointEigenSolver<Matrix6> solver(out);
    Vector6 expected = k.diagonal();
    std::sort(expected.data(), expected.data() + 6);
    ASSERT_LT((solver.eigenvalues() - expected).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(PseudoInverse, MatchesInverseWhenRegularAndDropsSmallValues) {
  Matrix6 m = Matrix6::Identity() * 3.0;
  EXPECT_LT((pseudo_inverse(m) - Matrix6::Identity() / 3.0).norm(), 1e-12);
  Matrix6 s = Matrix6::Zero();
  s(0, 0) = 2.0;
  s(1, 1) = 1e-14;
  Matrix6 expected = Matrix6::Zero();
  expected(0, 0) = 0.5;
  EXPECT_LT((pseudo_inverse(s) - expected).norm(), 1e-12);
}

}  // namespace
}  // namespace ific
