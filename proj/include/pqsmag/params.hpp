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

#include <cmath>
#include <string>
#include <vector>

namespace pqsmag {

// Units are fixed throughout: seconds and picotesla.

/// Ornstein-Uhlenbeck field process dB = -gamma_b B dt + sqrt(sigma_b) dW.
struct OuParams {
  double gamma_b = 1.0e3;  ///< decay rate [1/s]
  double sigma_b = 1.0e3;  ///< diffusion coefficient [pT^2/s]

  /// Stationary probability variance sigma_b / (2 gamma_b) [pT^2].
  double stationary_variance() const { return sigma_b / (2.0 * gamma_b); }

  /// Throws Error(kInvalidParams) naming the offending field.
  void validate() const;
};

/// Probe couplings and the discretization step.
struct CouplingParams {
  double mu = 2.0e5;      ///< field-to-spin coupling [1/(pT s)]
  double kappa_sq = 1.0e4;  ///< probe coupling kappa^2 [1/s]
  double tau = 1.0e-6;    ///< time step [s]

  double kappa_sqrt_tau() const { return std::sqrt(kappa_sq * tau); }

  void validate() const;
};

// Recursions are first order in tau; above these products the results drift.
inline constexpr double kStabilityLimit = 0.01;

/// Human-readable warnings for gamma_b*tau or kappa_sq*tau above the limit.
/// Empty when the step is fine.
std::vector<std::string> stability_warnings(const OuParams& ou,
                                            const CouplingParams& coupling);

}  // namespace pqsmag
