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

#include <cstddef>

#include "pqsmag/gaussian.hpp"
#include "pqsmag/params.hpp"

namespace pqsmag {

/// Forward propagates rho(t) -> rho(t + tau); backward propagates the
/// effect E(t + tau) -> E(t).
enum class Direction { kForward, kBackward };

/// One-step interaction matrix over (B, x_at, p_at, x_ph, p_ph).
///
/// Forward:                      Backward:
///   [1-g t   0   0    0   0  ]    [1+g t   0   0    0   0  ]
///   [0       1   0    0   k  ]    [0       1   0    0  -k  ]
///   [-mu t   0   1    0   0  ]    [mu t    0   1    0   0  ]
///   [0       0   k    1   0  ]    [0       0  -k    1   0  ]
///   [0       0   0    0   1  ]    [0       0   0    0   1  ]
/// with g = gamma_b, t = tau, k = kappa sqrt(tau).
Mat5 interaction_matrix(Direction dir, const OuParams& ou, const CouplingParams& coupling);

/// Resets the light segment, then applies  <y> -> S<y>,  gamma -> S gamma S^T + L
/// with L = diag(2 sigma_b tau, 0, 0, 0, 0). Not yet conditioned on any
/// outcome.
FullGaussian propagate_full(const GaussianBlock& g, Direction dir, const OuParams& ou,
                            const CouplingParams& coupling);

/// Exact one-step update of a (B, x_at, p_at) Gaussian: propagate_full
/// followed by conditioning on the outcome. Backward steps condition on the
/// mirrored outcome -x_ms, since S_E reads the light quadrature with the
/// opposite sign; the resulting backward innovation is x_ms - k m3, the same
/// as forward.
GaussianBlock exact_step(const GaussianBlock& g, double x_ms, Direction dir, const OuParams& ou,
                         const CouplingParams& coupling);

// Largest second-order terms, relative to the entries they correct, at
// which the reduced (first-order) recursions are still used.
inline constexpr double kFirstOrderLimit = 0.1;

/// True when kappa^2 tau a33 and (mu tau)^2 a11 / a33 are both at most
/// kFirstOrderLimit, i.e. when the terms dropped by the reduced recursions
/// are small. Outside this region (e.g. right after a flat or very wide
/// prior) the reduced recursions can produce indefinite matrices.
bool within_first_order_regime(const Mat3& cov, const CouplingParams& coupling);

/// Affine mean update of one step,  m' = transition m + gain x_ms.
/// For fixed covariance the mean recursions of every path are of this form;
/// the batched ensemble kernels consume it.
struct MeanMap {
  Mat3 transition = Mat3::Identity();
  Vec3 gain = Vec3::Zero();

  Vec3 apply(const Vec3& m, double x_ms) const { return transition * m + gain * x_ms; }
};

/// Mean map of the reduced recursion (exact == false) or of exact_step
/// (exact == true) at pre-step covariance `cov`.
MeanMap mean_map(const Mat3& cov, Direction dir, bool exact, const OuParams& ou,
                 const CouplingParams& coupling);

/// Reduced (first-order) covariance recursion over (B, x_at, p_at), in
/// either direction; unchecked, symmetrized. Forward:
///   a11 -> (1 - 2 g t) a11 + 2 sigma_b t     a12 -> (1 - g t) a12
///   a13 -> (1 - g t) a13 - mu t a11          a22 -> a22 + kappa^2 t
///   a23 -> a23 - mu t a12                    a33 -> a33 - 2 mu t a13
/// minus kappa^2 t v v^T with v = (a13, a23, a33). Backward flips the
/// signs of g and mu and keeps the diffusion and measurement terms.
Mat3 reduced_cov_step(const Mat3& a, Direction dir, const OuParams& ou,
                      const CouplingParams& coupling);

/// Reduced mean recursion; the gain uses the pre-step covariance `a`.
/// Both directions use the innovation x_ms - k m3.
Vec3 reduced_mean_step(const Vec3& m, const Mat3& a, double x_ms, Direction dir,
                       const OuParams& ou, const CouplingParams& coupling);

/// Steps a Gaussian along one direction, using exact_step until the
/// covariance first enters the first-order regime and the reduced
/// recursions from then on. The switch is one-way, and it depends on the
/// covariance only, so the covariance sequence never depends on outcomes.
class PassStepper {
 public:
  PassStepper(Direction dir, const OuParams& ou, const CouplingParams& coupling)
      : dir_(dir), ou_(ou), coupling_(coupling) {}

  GaussianBlock step(const GaussianBlock& g, double x_ms);
  /// Covariance-only step; follows the same exact/reduced switch as step().
  Mat3 step_cov(const Mat3& cov);

  bool last_step_exact() const { return last_exact_; }
  std::size_t exact_steps() const { return exact_steps_; }

 private:
  bool decide(const Mat3& cov);

  Direction dir_;
  OuParams ou_;
  CouplingParams coupling_;
  bool reduced_ = false;
  bool last_exact_ = false;
  std::size_t exact_steps_ = 0;
};

}  // namespace pqsmag
