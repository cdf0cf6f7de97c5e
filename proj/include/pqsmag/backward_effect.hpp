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
#include <vector>

#include "pqsmag/forward_filter.hpp"
#include "pqsmag/gaussian.hpp"
#include "pqsmag/params.hpp"
#include "pqsmag/record.hpp"

namespace pqsmag {

// Effect Gaussians E(t) are propagated from the end of the record towards
// its start. E at the end of the record is the identity operator (flat).

/// Covariance used for the first step out of the flat terminal condition.
inline constexpr double kDefaultFlatFallback = 1e8;

GaussianBlock terminal_effect();

/// One reduced backward covariance step (signs of gamma_b and mu flipped
/// relative to the forward step). The (3,2) entry is a32 + mu tau a12, the
/// transpose of (2,3). Throws Error(kInvalidState) if `a_e` is invalid.
Mat3 step_backward_cov(const Mat3& a_e, const OuParams& ou, const CouplingParams& coupling);

/// One reduced backward mean step on the pre-step A_E:
///   m1 -> (1 + g t) m1 + k a13 (x_ms - k m3)
///   m2 -> m2 + k a23 (x_ms - k m3)
///   m3 -> m3 + mu t m1 + k a33 (x_ms - k m3)
Vec3 step_backward_mean(const Vec3& m_e, const Mat3& a_e, double x_ms, const OuParams& ou,
                        const CouplingParams& coupling);

struct BackwardOptions {
  double flat_fallback = kDefaultFlatFallback;
};

/// Effects E(t_k), k = 0..N. Element k holds outcomes k..N-1, so element N
/// is flat. With kappa = 0 no outcome carries information and every element
/// stays flat. Throws Error(kEmptyRecord) for an empty record.
std::vector<GaussianBlock> run_backward(const MeasurementRecord& record, const OuParams& ou,
                                        const CouplingParams& coupling,
                                        const BackwardOptions& options = {});

/// Fixed point of the backward covariance recursion, reached from the flat
/// fallback through the same exact warm-up run_backward uses.
SteadyState steady_backward_cov(const OuParams& ou, const CouplingParams& coupling,
                                const SteadyStateOptions& options = {});

}  // namespace pqsmag
