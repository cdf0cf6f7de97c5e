/*
 * Copyright 2026 The pqsmag Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <gtest/gtest.h>

#include "pqsmag/error.hpp"
#include "pqsmag/gaussian.hpp"

namespace pqsmag {
namespace {

GaussianBlock block(const Vec3& mean, const Mat3& cov) {
  GaussianBlock g;
  g.mean = mean;
  g.cov = cov;
  return g;
}

TEST(CheckValid, IdentityPasses) {
  const Diagnostics d = check_valid(block(Vec3::Zero(), Mat3::Identity()));
  EXPECT_TRUE(d.ok);
  EXPECT_EQ(d.symmetry_defect, 0.0);
  EXPECT_NEAR(d.min_eigenvalue, 1.0, 1e-14);
}

TEST(CheckValid, AsymmetricFails) {
  Mat3 c = Mat3::Identity();
  c(0, 1) = 1.0;
  const Diagnostics d = check_valid(block(Vec3::Zero(), c));
  EXPECT_FALSE(d.ok);
  EXPECT_EQ(d.symmetry_defect, 1.0);
}

TEST(CheckValid, NegativeEigenvalueFails) {
  Mat3 c = Mat3::Identity();
  c(0, 0) = -1.0;
  const Diagnostics d = check_valid(block(Vec3::Zero(), c));
  EXPECT_FALSE(d.ok);
  EXPECT_NEAR(d.min_eigenvalue, -1.0, 1e-14);
}

TEST(CheckValid, NonFiniteMeanFails) {
  EXPECT_FALSE(check_valid(block(Vec3(NAN, 0, 0), Mat3::Identity())).ok);
}

TEST(CheckValid, FlatPasses) { EXPECT_TRUE(check_valid(GaussianBlock::Flat()).ok); }

TEST(CheckValid, SmallEigenvalueNextToHugeEntry) {
  // B-p block of an effect with a flat x_at direction.
  Mat3 c;
  c << 0.0406869, 0, 0.256552,
       0, 1e8, 0,
       0.256552, 0, 3.20345;
  const Diagnostics d = check_valid(block(Vec3::Zero(), c));
  EXPECT_TRUE(d.ok);
  EXPECT_NEAR(d.min_eigenvalue, 0.0200114, 1e-6);
}

TEST(CheckValid, FullGaussian) {
  FullGaussian f;
  EXPECT_TRUE(check_valid(f).ok);
  f.cov(3, 4) = 0.5;
  EXPECT_FALSE(check_valid(f).ok);
}

TEST(Symmetrize, AveragesOffDiagonal) {
  Mat3 c = Mat3::Identity();
  c(0, 2) = 1.0;
  c(2, 0) = 0.0;
  symmetrize(c);
  EXPECT_EQ(c(0, 2), 0.5);
  EXPECT_EQ(c(2, 0), 0.5);
}

TEST(FuseInformation, EqualCovariancesAverageMeans) {
  const GaussianBlock a = block(Vec3(1, 0, 0), 2.0 * Mat3::Identity());
  const GaussianBlock b = block(Vec3(3, 0, 0), 2.0 * Mat3::Identity());
  const GaussianBlock f = fuse_information(a, b);
  EXPECT_NEAR((f.mean - Vec3(2, 0, 0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((f.cov - Mat3::Identity()).norm(), 0.0, 1e-15);
  EXPECT_FALSE(f.flat);
}

TEST(FuseInformation, FlatIsExactIdentity) {
  Mat3 c;
  c << 0.3, 0.01, -0.2,
       0.01, 2.0, 0.05,
       -0.2, 0.05, 4.1;
  const GaussianBlock a = block(Vec3(0.7, -1.2, 3.3), c);
  const GaussianBlock left = fuse_information(a, GaussianBlock::Flat());
  const GaussianBlock right = fuse_information(GaussianBlock::Flat(), a);
  EXPECT_EQ(left.mean, a.mean);
  EXPECT_EQ(left.cov, a.cov);
  EXPECT_EQ(right.mean, a.mean);
  EXPECT_EQ(right.cov, a.cov);
  EXPECT_TRUE(fuse_information(GaussianBlock::Flat(), GaussianBlock::Flat()).flat);
}

TEST(FuseInformation, FallbackApproximatesFlat) {
  const GaussianBlock unit = block(Vec3(0.4, -0.1, 2.0), Mat3::Identity());
  const GaussianBlock f = fuse_information(unit, GaussianBlock::FlatFallback(1e8));
  EXPECT_LT((f.cov - unit.cov).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LT((f.mean - unit.mean).cwiseAbs().maxCoeff(), 1e-6 * unit.mean.norm());
}

TEST(FuseInformation, SingularThrows) {
  Mat3 c = Mat3::Identity();
  c(1, 1) = 0.0;
  try {
    fuse_information(block(Vec3::Zero(), c), block(Vec3::Zero(), Mat3::Identity()));
    FAIL() << "expected SingularCovariance";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingularCovariance);
  }
}

TEST(FuseInformation, NeverLosesInformation) {
  Mat3 a;
  a << 0.09, 0, -0.43,
       0, 3.0, 0.1,
       -0.43, 0.1, 4.1;
  Mat3 b;
  b << 0.1, 0.02, 0.47,
       0.02, 7.0, 0,
       0.47, 0, 4.3;
  const GaussianBlock f = fuse_information(block(Vec3::Zero(), a), block(Vec3::Zero(), b));
  const Eigen::SelfAdjointEigenSolver<Mat3> ea(a - f.cov);
  const Eigen::SelfAdjointEigenSolver<Mat3> eb(b - f.cov);
  EXPECT_GE(ea.eigenvalues().minCoeff(), -1e-12);
  EXPECT_GE(eb.eigenvalues().minCoeff(), -1e-12);
}

TEST(WithFreshLight, EmbedsBlock) {
  Mat3 c;
  c << 2, 0.1, 0.2,
       0.1, 3, 0.3,
       0.2, 0.3, 4;
  const FullGaussian f = FullGaussian::WithFreshLight(block(Vec3(1, 2, 3), c));
  EXPECT_TRUE((f.cov.topLeftCorner<3, 3>() == c));
  EXPECT_TRUE((f.cov.bottomRightCorner<2, 2>() == Eigen::Matrix2d::Identity()));
  EXPECT_EQ((f.cov.topRightCorner<3, 2>().norm()), 0.0);
  EXPECT_EQ(f.mean.tail<2>().norm(), 0.0);
  EXPECT_EQ(f.block().mean, Vec3(1, 2, 3));
}

TEST(ConditionOnPhotonQuadrature, UncorrelatedLightNoUpdate) {
  Mat3 c;
  c << 2, 0.1, 0.2,
       0.1, 3, 0.3,
       0.2, 0.3, 4;
  const FullGaussian f = FullGaussian::WithFreshLight(block(Vec3(1, 2, 3), c));
  const GaussianBlock g = condition_on_photon_quadrature(f, 0.77);
  EXPECT_EQ(g.mean, Vec3(1, 2, 3));
  EXPECT_EQ(g.cov, c);
}

TEST(ConditionOnPhotonQuadrature, VacuumSchurComplement) {
  const double k = 0.1;
  const double a33 = 4.0;
  FullGaussian f;
  f.cov.topLeftCorner<3, 3>() = Mat3::Identity();
  f.cov(2, 2) = a33;
  f.cov(2, 3) = f.cov(3, 2) = k * a33;
  f.cov(3, 3) = 1.0;
  ASSERT_TRUE(check_valid(f).ok);
  const GaussianBlock g = condition_on_photon_quadrature(f, 0.5);
  EXPECT_NEAR(g.cov(2, 2), a33 - k * k * a33 * a33, 1e-14);
  EXPECT_NEAR(g.mean(2), k * a33 * 0.5, 1e-15);
  EXPECT_EQ(g.cov(0, 0), 1.0);
}

TEST(ConditionOnPhotonQuadrature, ZeroVarianceReadoutIsSkipped) {
  FullGaussian f;
  f.cov(3, 3) = 0.0;
  f.cov(2, 3) = f.cov(3, 2) = 0.0;
  const GaussianBlock g = condition_on_photon_quadrature(f, 5.0);
  EXPECT_EQ(g.mean, Vec3::Zero());
  EXPECT_EQ(g.cov, Mat3::Identity());
}

}  // namespace
}  // namespace pqsmag
