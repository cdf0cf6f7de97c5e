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

#include "pqsmag/dynamics.hpp"
#include "pqsmag/estimate_series.hpp"
#include "pqsmag/gaussian.hpp"
#include "pqsmag/params.hpp"
#include "pqsmag/record.hpp"

namespace pqsmag {

/// Prior before any probing: zero means, cov = diag(2 v_b, 1, 1).
/// Throws Error(kNegativeVariance) for v_b < 0.
GaussianBlock initial_state(double v_b);

/// One reduced forward covariance step. Throws Error(kInvalidState) when
/// `a` fails check_valid.
Mat3 step_reduced_cov(const Mat3& a, const OuParams& ou, const CouplingParams& coupling);

/// One reduced forward mean step; `a` is the covariance before the step.
Vec3 step_reduced_mean(const Vec3& m, const Mat3& a, double x_ms, const OuParams& ou,
                       const CouplingParams& coupling);

/// One step of the unreduced 5x5 path: fresh light segment, S and L, then
/// conditioning on x_ms. The result carries a fresh light segment again, so
/// step_full can be chained. Throws Error(kInvalidState) on invalid input.
FullGaussian step_full(const FullGaussian& full, double x_ms, const OuParams& ou,
                       const CouplingParams& coupling);

/// Forward states rho(t_k), k = 0..N. State k holds outcomes 0..k-1.
struct ForwardPass {
  std::vector<GaussianBlock> states;
  std::size_t exact_steps = 0;  ///< leading steps taken with the 5x5 path
};

/// Throws Error(kEmptyRecord) for an empty record and Error(kInvalidState)
/// if a covariance leaves the valid set.
ForwardPass forward_pass(const MeasurementRecord& record, double v_b, const OuParams& ou,
                         const CouplingParams& coupling);

/// Filter estimate: b_filter = m1, var_filter = a11 / 2 on t_0..t_N.
EstimateSeries run_filter(const MeasurementRecord& record, double v_b, const OuParams& ou,
                          const CouplingParams& coupling);

/// Innovations (x_k - k m3) / sqrt((1 + kappa^2 tau a33) / 2) of every
/// outcome against the state that predicted it.
std::vector<double> normalized_innovations(const MeasurementRecord& record,
                                           const ForwardPass& pass,
                                           const CouplingParams& coupling);

struct SteadyState {
  Mat3 cov = Mat3::Identity();
  long iterations = 0;
  bool converged = false;
};

struct SteadyStateOptions {
  long max_iterations = 10'000'000;
  double tolerance = 1e-12;
};

/// Fixed point of the forward covariance recursion, iterated from the
/// stationary prior. Convergence is judged on every entry except the x_at
/// variance, which diffuses by kappa^2 tau per step and never settles.
/// Non-convergence is reported through the flag (with the last iterate),
/// not thrown: e.g. kappa = 0 with mu > 0 leaves p_at unbounded.
SteadyState steady_state_cov(const OuParams& ou, const CouplingParams& coupling,
                             const SteadyStateOptions& options = {});

namespace detail {

/// Largest relative change between two iterates, excluding the x_at variance.
double relative_change(const Mat3& prev, const Mat3& next);

SteadyState iterate_to_fixed_point(PassStepper stepper, Mat3 cov,
                                   const SteadyStateOptions& options);

}  // namespace detail

}  // namespace pqsmag
