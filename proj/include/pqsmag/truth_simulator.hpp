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
#include <cstdint>
#include <random>
#include <utility>

#include "pqsmag/params.hpp"
#include "pqsmag/record.hpp"

namespace pqsmag {

/// Euler-Maruyama step of the field: b - gamma_b b tau + sqrt(sigma_b) dw,
/// where dw ~ N(0, tau) is supplied by the caller.
double ou_step(double b, const OuParams& ou, const CouplingParams& coupling, double dw);

/// Conditional atomic state of the true system, field pinned to its true
/// value. Covariance entries use the doubled convention.
struct AtomTruth {
  double x_mean = 0.0;
  double p_mean = 0.0;
  double t_xx = 1.0;
  double t_xp = 0.0;
  double t_pp = 1.0;
};

/// Mean and variance of the next outcome given the atomic state.
struct OutcomeLaw {
  double mean = 0.0;
  double variance = 0.5;
};

OutcomeLaw outcome_law(const AtomTruth& atoms, const CouplingParams& coupling);

/// Advances the atomic state through one step after outcome x_ms was read
/// from it: exact back-action conditioning, then the Larmor kick
/// p -= mu tau b and the x_at diffusion kappa^2 tau.
AtomTruth advance_atoms(const AtomTruth& atoms, double b, double x_ms,
                        const CouplingParams& coupling);

/// Seed of trajectory `index` of an ensemble with master seed `seed`.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  return seed ^ index;
}

/// Stateful generator of one record. b starts from the stationary law,
/// the atoms from mean 0, cov I. Each step draws the outcome first, then dW.
class TruthSimulator {
 public:
  TruthSimulator(const OuParams& ou, const CouplingParams& coupling, std::uint64_t seed);

  /// Draws the outcome for [t_k, t_k + tau) and advances to t_{k+1}.
  double step();

  double b() const { return b_; }
  const AtomTruth& atoms() const { return atoms_; }

 private:
  OuParams ou_;
  CouplingParams coupling_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
  double b_ = 0.0;
  AtomTruth atoms_;
};

/// Simulates n_steps outcomes; the truth has n_steps + 1 rows. Deterministic
/// in `seed`. Throws Error(kInvalidParams) for n_steps < 1 or bad params.
std::pair<MeasurementRecord, TruthTrajectory> generate_record(const OuParams& ou,
                                                              const CouplingParams& coupling,
                                                              std::size_t n_steps,
                                                              std::uint64_t seed);

/// Re-runs the atomic recursion on the stored field and outcomes and
/// compares it with the stored trajectory bit for bit. Throws
/// Error(kMismatchedRecord) naming the first outcome index that disagrees.
void replay_check(const MeasurementRecord& record, const TruthTrajectory& truth,
                  const OuParams& ou, const CouplingParams& coupling);

}  // namespace pqsmag
