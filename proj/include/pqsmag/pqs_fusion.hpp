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

#include "pqsmag/backward_effect.hpp"
#include "pqsmag/estimate_series.hpp"
#include "pqsmag/gaussian.hpp"
#include "pqsmag/params.hpp"
#include "pqsmag/record.hpp"

namespace pqsmag {

struct PointEstimate {
  double b = 0.0;
  double var = 0.0;  ///< probability variance [pT^2]
};

/// Smoothed estimate of B from the forward state and the effect at the same
/// time: first component of the fused mean, half the fused (0, 0) entry.
/// A flat effect gives back the filter estimate exactly.
/// Throws Error(kSingularCovariance) if a non-flat operand is singular.
PointEstimate smooth_point(const GaussianBlock& rho, const GaussianBlock& eff);

/// Marginal-only fusion 1/2 (1/A_rho[0,0] + 1/A_E[0,0])^-1. Ignores the
/// atomic correlations, so it is never below the full fusion.
double naive_scalar_variance(const GaussianBlock& rho, const GaussianBlock& eff);

/// Runs the forward and backward passes once each and fuses them at every
/// t_k, k = 0..N. Fills the filter, PQS and naive columns; b_true is left
/// empty. Throws Error(kEmptyRecord) for an empty record.
EstimateSeries smooth_series(const MeasurementRecord& record, double v_b, const OuParams& ou,
                             const CouplingParams& coupling, const BackwardOptions& options = {});

}  // namespace pqsmag
