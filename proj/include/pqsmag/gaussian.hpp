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

#pragma once

#include <Eigen/Dense>

namespace pqsmag {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

// Component order of the reduced state (B, x_at, p_at) and of the full
// state (B, x_at, p_at, x_ph, p_ph).
inline constexpr int kField = 0;
inline constexpr int kAtomX = 1;
inline constexpr int kAtomP = 2;
inline constexpr int kPhotonX = 3;
inline constexpr int kPhotonP = 4;

// Every covariance here uses the doubled convention
//   cov_ij = 2 Re<(y_i - <y_i>)(y_j - <y_j>)>,
// so the probability variance of B is cov(0, 0) / 2. Only reporting code
// divides by two.

/// Gaussian over (B, x_at, p_at).
///
/// The same type carries forward states rho(t) and backward effect
/// Gaussians E(t). A flat block carries no information at all (identity
/// effect operator); its mean and cov are ignored and fusion with it is an
/// exact identity.
struct GaussianBlock {
  Vec3 mean = Vec3::Zero();
  Mat3 cov = Mat3::Identity();
  bool flat = false;

  static GaussianBlock Flat();
  /// Finite stand-in for a flat block: zero mean, cov = c * I.
  static GaussianBlock FlatFallback(double c);
};

/// Gaussian over (B, x_at, p_at, x_ph, p_ph), used by the exact
/// (unreduced) propagation path.
struct FullGaussian {
  Vec5 mean = Vec5::Zero();
  Mat5 cov = Mat5::Identity();

  /// Embeds `block` with a fresh light segment: photonic covariance I,
  /// no correlation with the atoms and field, zero photonic mean.
  static FullGaussian WithFreshLight(const GaussianBlock& block);

  GaussianBlock block() const;
};

/// Result of check_valid.
struct Diagnostics {
  double symmetry_defect = 0.0;  ///< max |cov_ij - cov_ji|
  double min_eigenvalue = 0.0;
  bool ok = true;
};

// Tolerances of the covariance invariants.
inline constexpr double kSymmetryTolerance = 1e-10;   // x max(1, |cov_ij|)
inline constexpr double kEigenvalueTolerance = 1e-9;  // x trace
inline constexpr double kInvertibleFloor = 1e-12;     // x trace
inline constexpr double kPseudoInverseFloor = 1e-12;  // absolute, on B11

Diagnostics check_valid(const GaussianBlock& g);
Diagnostics check_valid(const FullGaussian& g);

void symmetrize(Mat3& m);
void symmetrize(Mat5& m);

/// Product of two Gaussians in information form:
///   cov = (a^-1 + b^-1)^-1,  mean = cov (a^-1 a.mean + b^-1 b.mean).
/// A flat operand short-circuits and returns the other one unchanged.
/// Throws Error(kSingularCovariance) if a non-flat operand has its smallest
/// eigenvalue at or below kInvertibleFloor * trace.
GaussianBlock fuse_information(const GaussianBlock& a, const GaussianBlock& b);

/// Conditions the (B, x_at, p_at) block of `full` on the outcome x_ms of a
/// projective measurement of x_ph:
///   A -> A - C (pi B pi)^- C^T,  m -> m + C (pi B pi)^- (x_ms - n1, 0)^T
/// with pi = diag(1, 0). The pseudoinverse is diag(1/B11, 0) when B11 is
/// above kPseudoInverseFloor and zero otherwise (no update). The returned
/// covariance is symmetrized.
GaussianBlock condition_on_photon_quadrature(const FullGaussian& full, double x_ms);

}  // namespace pqsmag
