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

#include "pqsmag/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pqsmag/error.hpp"

namespace pqsmag {

GaussianBlock GaussianBlock::Flat() {
  GaussianBlock g;
  g.flat = true;
  return g;
}

GaussianBlock GaussianBlock::FlatFallback(double c) {
  GaussianBlock g;
  g.cov = c * Mat3::Identity();
  return g;
}

FullGaussian FullGaussian::WithFreshLight(const GaussianBlock& block) {
  FullGaussian full;
  full.mean.head<3>() = block.mean;
  full.cov.setZero();
  full.cov.topLeftCorner<3, 3>() = block.cov;
  full.cov.bottomRightCorner<2, 2>().setIdentity();
  return full;
}

GaussianBlock FullGaussian::block() const {
  GaussianBlock g;
  g.mean = mean.head<3>();
  g.cov = cov.topLeftCorner<3, 3>();
  return g;
}

namespace {

template <int N>
Diagnostics diagnose(const Eigen::Matrix<double, N, N>& cov) {
  Diagnostics d;
  bool symmetric = true;
  for (int i = 0; i < N; ++i) {
    for (int j = i + 1; j < N; ++j) {
      const double defect = std::abs(cov(i, j) - cov(j, i));
      d.symmetry_defect = std::max(d.symmetry_defect, defect);
      if (!(defect <= kSymmetryTolerance * std::max(1.0, std::abs(cov(i, j))))) {
        symmetric = false;
      }
    }
  }
  // Eigenvalues of the symmetric part; the antisymmetric part is already
  // reported through the symmetry defect.
  const Eigen::Matrix<double, N, N> sym = 0.5 * (cov + cov.transpose());
  if (!sym.allFinite()) {
    d.min_eigenvalue = std::nan("");
    d.ok = false;
    return d;
  }
  // The closed-form 3x3 solver loses the small eigenvalues next to the
  // 1e8-scale entries of a flat fallback.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, N, N>> solver;
  solver.compute(sym, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = solver.eigenvalues().minCoeff();
  const double trace = std::abs(sym.trace());
  d.ok = symmetric && d.min_eigenvalue >= -kEigenvalueTolerance * trace;
  return d;
}

double smallest_eigenvalue(const Mat3& cov) {
  Eigen::SelfAdjointEigenSolver<Mat3> solver;
  solver.compute(cov, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void require_invertible(const GaussianBlock& g, const char* which) {
  const double floor = kInvertibleFloor * std::abs(g.cov.trace());
  const double smallest = smallest_eigenvalue(g.cov);
  if (!(smallest > floor)) {
    throw Error(ErrorCode::kSingularCovariance,
                std::string("fuse_information: operand ") + which +
                    " is not invertible (smallest eigenvalue " + std::to_string(smallest) + ")");
  }
}

}  // namespace

Diagnostics check_valid(const GaussianBlock& g) {
  if (g.flat) return Diagnostics{};
  Diagnostics d = diagnose<3>(g.cov);
  if (!g.mean.allFinite()) d.ok = false;
  return d;
}

Diagnostics check_valid(const FullGaussian& g) {
  Diagnostics d = diagnose<5>(g.cov);
  if (!g.mean.allFinite()) d.ok = false;
  return d;
}

void symmetrize(Mat3& m) { m = 0.5 * (m + m.transpose()).eval(); }

void symmetrize(Mat5& m) { m = 0.5 * (m + m.transpose()).eval(); }

GaussianBlock fuse_information(const GaussianBlock& a, const GaussianBlock& b) {
  if (b.flat) return a;
  if (a.flat) return b;
  require_invertible(a, "a");
  require_invertible(b, "b");

  const Mat3 info_a = a.cov.inverse();
  const Mat3 info_b = b.cov.inverse();
  GaussianBlock out;
  out.cov = (info_a + info_b).inverse();
  symmetrize(out.cov);
  out.mean = out.cov * (info_a * a.mean + info_b * b.mean);
  return out;
}

GaussianBlock condition_on_photon_quadrature(const FullGaussian& full, double x_ms) {
  GaussianBlock out = full.block();
  const double b11 = full.cov(kPhotonX, kPhotonX);
  if (b11 > kPseudoInverseFloor) {
    const Vec3 c = full.cov.block<3, 1>(0, kPhotonX);
    const double innovation = x_ms - full.mean(kPhotonX);
    out.cov -= (c * c.transpose()) / b11;
    out.mean += c * (innovation / b11);
  }
  symmetrize(out.cov);
  return out;
}

}  // namespace pqsmag
