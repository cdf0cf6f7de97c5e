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

#include "pqsmag/forward_filter.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pqsmag/error.hpp"

namespace pqsmag {

namespace {

// Full eigen-checks every step would dominate the pass cost.
constexpr std::size_t kValidationStride = 4096;

void require_valid(const Mat3& cov, const char* where) {
  GaussianBlock g;
  g.cov = cov;
  if (!check_valid(g).ok) {
    throw Error(ErrorCode::kInvalidState, std::string(where) + ": covariance is not symmetric PSD");
  }
}

}  // namespace

GaussianBlock initial_state(double v_b) {
  if (!(v_b >= 0.0)) {
    throw Error(ErrorCode::kNegativeVariance, "initial_state: v_b must be >= 0");
  }
  GaussianBlock g;
  g.cov.diagonal() << 2.0 * v_b, 1.0, 1.0;
  return g;
}

Mat3 step_reduced_cov(const Mat3& a, const OuParams& ou, const CouplingParams& coupling) {
  require_valid(a, "step_reduced_cov");
  return reduced_cov_step(a, Direction::kForward, ou, coupling);
}

Vec3 step_reduced_mean(const Vec3& m, const Mat3& a, double x_ms, const OuParams& ou,
                       const CouplingParams& coupling) {
  return reduced_mean_step(m, a, x_ms, Direction::kForward, ou, coupling);
}

FullGaussian step_full(const FullGaussian& full, double x_ms, const OuParams& ou,
                       const CouplingParams& coupling) {
  if (!check_valid(full).ok) {
    throw Error(ErrorCode::kInvalidState, "step_full: covariance is not symmetric PSD");
  }
  return FullGaussian::WithFreshLight(
      exact_step(full.block(), x_ms, Direction::kForward, ou, coupling));
}

ForwardPass forward_pass(const MeasurementRecord& record, double v_b, const OuParams& ou,
                         const CouplingParams& coupling) {
  if (record.empty()) throw Error(ErrorCode::kEmptyRecord, "forward_pass: record is empty");
  ou.validate();
  coupling.validate();

  const std::size_t n = record.size();
  ForwardPass pass;
  pass.states.reserve(n + 1);
  pass.states.push_back(initial_state(v_b));

  PassStepper stepper(Direction::kForward, ou, coupling);
  for (std::size_t k = 0; k < n; ++k) {
    pass.states.push_back(stepper.step(pass.states[k], record.outcomes[k]));
    if ((k + 1) % kValidationStride == 0) require_valid(pass.states.back().cov, "forward_pass");
  }
  require_valid(pass.states.back().cov, "forward_pass");
  pass.exact_steps = stepper.exact_steps();
  return pass;
}

EstimateSeries run_filter(const MeasurementRecord& record, double v_b, const OuParams& ou,
                          const CouplingParams& coupling) {
  const ForwardPass pass = forward_pass(record, v_b, ou, coupling);
  EstimateSeries series;
  const std::size_t n = pass.states.size();
  series.times.resize(n);
  series.b_filter.resize(n);
  series.var_filter.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    series.times[k] = static_cast<double>(k) * coupling.tau;
    series.b_filter[k] = pass.states[k].mean(kField);
    series.var_filter[k] = 0.5 * pass.states[k].cov(kField, kField);
  }
  return series;
}

std::vector<double> normalized_innovations(const MeasurementRecord& record,
                                           const ForwardPass& pass,
                                           const CouplingParams& coupling) {
  const double k = coupling.kappa_sqrt_tau();
  std::vector<double> out(record.size());
  for (std::size_t i = 0; i < record.size(); ++i) {
    const GaussianBlock& g = pass.states[i];
    const double variance = 0.5 * (1.0 + k * k * g.cov(kAtomP, kAtomP));
    out[i] = (record.outcomes[i] - k * g.mean(kAtomP)) / std::sqrt(variance);
  }
  return out;
}

namespace detail {

double relative_change(const Mat3& prev, const Mat3& next) {
  double scale = 0.0;
  double change = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i == kAtomX && j == kAtomX) continue;
      scale = std::max(scale, std::abs(next(i, j)));
      change = std::max(change, std::abs(next(i, j) - prev(i, j)));
    }
  }
  if (scale == 0.0) return change;
  return change / scale;
}

SteadyState iterate_to_fixed_point(PassStepper stepper, Mat3 cov,
                                   const SteadyStateOptions& options) {
  SteadyState out;
  for (long it = 1; it <= options.max_iterations; ++it) {
    const Mat3 next = stepper.step_cov(cov);
    const double change = relative_change(cov, next);
    cov = next;
    out.iterations = it;
    if (!std::isfinite(change)) break;
    // The exact warm-up steps are never taken as converged.
    if (change < options.tolerance && !stepper.last_step_exact()) {
      out.converged = true;
      break;
    }
  }
  out.cov = cov;
  return out;
}

}  // namespace detail

SteadyState steady_state_cov(const OuParams& ou, const CouplingParams& coupling,
                             const SteadyStateOptions& options) {
  ou.validate();
  coupling.validate();
  return detail::iterate_to_fixed_point(PassStepper(Direction::kForward, ou, coupling),
                                        initial_state(ou.stationary_variance()).cov, options);
}

}  // namespace pqsmag
