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

#include "pqsmag/dynamics.hpp"

namespace pqsmag {

namespace {

double sign_of(Direction dir) { return dir == Direction::kForward ? 1.0 : -1.0; }

}  // namespace

Mat5 interaction_matrix(Direction dir, const OuParams& ou, const CouplingParams& coupling) {
  const double s = sign_of(dir);
  const double k = coupling.kappa_sqrt_tau();
  Mat5 S = Mat5::Identity();
  S(kField, kField) = 1.0 - s * ou.gamma_b * coupling.tau;
  S(kAtomX, kPhotonP) = s * k;
  S(kAtomP, kField) = -s * coupling.mu * coupling.tau;
  S(kPhotonX, kAtomP) = s * k;
  return S;
}

FullGaussian propagate_full(const GaussianBlock& g, Direction dir, const OuParams& ou,
                            const CouplingParams& coupling) {
  const Mat5 S = interaction_matrix(dir, ou, coupling);
  FullGaussian full = FullGaussian::WithFreshLight(g);
  full.mean = S * full.mean;
  full.cov = S * full.cov * S.transpose();
  full.cov(kField, kField) += 2.0 * ou.sigma_b * coupling.tau;
  symmetrize(full.cov);
  return full;
}

GaussianBlock exact_step(const GaussianBlock& g, double x_ms, Direction dir, const OuParams& ou,
                         const CouplingParams& coupling) {
  const FullGaussian full = propagate_full(g, dir, ou, coupling);
  return condition_on_photon_quadrature(full, sign_of(dir) * x_ms);
}

bool within_first_order_regime(const Mat3& cov, const CouplingParams& coupling) {
  const double a11 = cov(kField, kField);
  const double a33 = cov(kAtomP, kAtomP);
  const double mt = coupling.mu * coupling.tau;
  return coupling.kappa_sq * coupling.tau * a33 <= kFirstOrderLimit &&
         mt * mt * a11 <= kFirstOrderLimit * a33;
}

MeanMap mean_map(const Mat3& cov, Direction dir, bool exact, const OuParams& ou,
                 const CouplingParams& coupling) {
  const double s = sign_of(dir);
  const double k = coupling.kappa_sqrt_tau();
  MeanMap map;
  if (!exact) {
    // m1' = (1 -+ g t) m1 + k a13 (x - k m3)
    // m2' = m2 + k a23 (x - k m3)
    // m3' = m3 -+ mu t m1 + k a33 (x - k m3)
    const Vec3 col = cov.col(kAtomP);
    map.transition = Mat3::Identity();
    map.transition(kField, kField) = 1.0 - s * ou.gamma_b * coupling.tau;
    map.transition(kAtomP, kField) = -s * coupling.mu * coupling.tau;
    map.transition.col(kAtomP) -= (k * k) * col;
    map.gain = k * col;
    return map;
  }
  // Exact step: m' = S3 m + (C / B11) s (x - k m3), with C and B11 taken
  // from the propagated 5x5 covariance. Independent of the mean.
  GaussianBlock probe;
  probe.cov = cov;
  const FullGaussian full = propagate_full(probe, dir, ou, coupling);
  const Mat5 S = interaction_matrix(dir, ou, coupling);
  const double b11 = full.cov(kPhotonX, kPhotonX);
  map.transition = S.topLeftCorner<3, 3>();
  if (b11 > kPseudoInverseFloor) {
    const Vec3 c = full.cov.block<3, 1>(0, kPhotonX) / b11;
    map.gain = s * c;
    map.transition.col(kAtomP) -= (s * k) * c;
  }
  return map;
}

Mat3 reduced_cov_step(const Mat3& a, Direction dir, const OuParams& ou,
                      const CouplingParams& coupling) {
  const double s = sign_of(dir);
  const double gt = s * ou.gamma_b * coupling.tau;
  const double mt = s * coupling.mu * coupling.tau;
  const double kt = coupling.kappa_sq * coupling.tau;

  Mat3 n;
  n(0, 0) = (1.0 - 2.0 * gt) * a(0, 0) + 2.0 * ou.sigma_b * coupling.tau;
  n(0, 1) = (1.0 - gt) * a(0, 1);
  n(0, 2) = (1.0 - gt) * a(0, 2) - mt * a(0, 0);
  n(1, 0) = (1.0 - gt) * a(1, 0);
  n(1, 1) = a(1, 1) + kt;
  n(1, 2) = a(1, 2) - mt * a(1, 0);
  n(2, 0) = (1.0 - gt) * a(2, 0) - mt * a(0, 0);
  n(2, 1) = a(2, 1) - mt * a(0, 1);
  n(2, 2) = a(2, 2) - mt * (a(2, 0) + a(0, 2));

  const Vec3 v = a.col(kAtomP);
  n -= kt * (v * v.transpose());
  symmetrize(n);
  return n;
}

Vec3 reduced_mean_step(const Vec3& m, const Mat3& a, double x_ms, Direction dir,
                       const OuParams& ou, const CouplingParams& coupling) {
  const double s = sign_of(dir);
  const double k = coupling.kappa_sqrt_tau();
  const double innovation = x_ms - k * m(kAtomP);
  Vec3 n;
  n(0) = (1.0 - s * ou.gamma_b * coupling.tau) * m(0) + k * a(0, 2) * innovation;
  n(1) = m(1) + k * a(1, 2) * innovation;
  n(2) = m(2) - s * coupling.mu * coupling.tau * m(0) + k * a(2, 2) * innovation;
  return n;
}

bool PassStepper::decide(const Mat3& cov) {
  if (!reduced_ && within_first_order_regime(cov, coupling_)) reduced_ = true;
  last_exact_ = !reduced_;
  if (last_exact_) ++exact_steps_;
  return last_exact_;
}

GaussianBlock PassStepper::step(const GaussianBlock& g, double x_ms) {
  if (decide(g.cov)) return exact_step(g, x_ms, dir_, ou_, coupling_);
  GaussianBlock next;
  next.mean = reduced_mean_step(g.mean, g.cov, x_ms, dir_, ou_, coupling_);
  next.cov = reduced_cov_step(g.cov, dir_, ou_, coupling_);
  return next;
}

Mat3 PassStepper::step_cov(const Mat3& cov) {
  if (decide(cov)) {
    GaussianBlock g;
    g.cov = cov;
    return exact_step(g, 0.0, dir_, ou_, coupling_).cov;
  }
  return reduced_cov_step(cov, dir_, ou_, coupling_);
}

}  // namespace pqsmag
