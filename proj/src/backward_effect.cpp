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

#include "pqsmag/backward_effect.hpp"

#include "pqsmag/error.hpp"

namespace pqsmag {

GaussianBlock terminal_effect() { return GaussianBlock::Flat(); }

Mat3 step_backward_cov(const Mat3& a_e, const OuParams& ou, const CouplingParams& coupling) {
  GaussianBlock g;
  g.cov = a_e;
  if (!check_valid(g).ok) {
    throw Error(ErrorCode::kInvalidState, "step_backward_cov: covariance is not symmetric PSD");
  }
  return reduced_cov_step(a_e, Direction::kBackward, ou, coupling);
}

Vec3 step_backward_mean(const Vec3& m_e, const Mat3& a_e, double x_ms, const OuParams& ou,
                        const CouplingParams& coupling) {
  return reduced_mean_step(m_e, a_e, x_ms, Direction::kBackward, ou, coupling);
}

std::vector<GaussianBlock> run_backward(const MeasurementRecord& record, const OuParams& ou,
                                        const CouplingParams& coupling,
                                        const BackwardOptions& options) {
  if (record.empty()) throw Error(ErrorCode::kEmptyRecord, "run_backward: record is empty");
  ou.validate();
  coupling.validate();
  if (!(options.flat_fallback > 0.0)) {
    throw Error(ErrorCode::kInvalidParams, "run_backward: flat_fallback must be > 0");
  }

  const std::size_t n = record.size();
  std::vector<GaussianBlock> effects(n + 1, terminal_effect());
  if (coupling.kappa_sq == 0.0) return effects;

  PassStepper stepper(Direction::kBackward, ou, coupling);
  GaussianBlock current = GaussianBlock::FlatFallback(options.flat_fallback);
  for (std::size_t k = n; k-- > 0;) {
    current = stepper.step(current, record.outcomes[k]);
    effects[k] = current;
  }
  if (!check_valid(effects.front()).ok) {
    throw Error(ErrorCode::kInvalidState, "run_backward: covariance is not symmetric PSD");
  }
  return effects;
}

SteadyState steady_backward_cov(const OuParams& ou, const CouplingParams& coupling,
                                const SteadyStateOptions& options) {
  ou.validate();
  coupling.validate();
  return detail::iterate_to_fixed_point(PassStepper(Direction::kBackward, ou, coupling),
                                        GaussianBlock::FlatFallback(kDefaultFlatFallback).cov,
                                        options);
}

}  // namespace pqsmag
