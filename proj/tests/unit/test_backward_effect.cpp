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


#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "frozen_values.hpp"
#include "pqsmag/backward_effect.hpp"
#include "pqsmag/error.hpp"
#include "pqsmag/truth_simulator.hpp"

namespace pqsmag {
namespace {

const OuParams kOu;
const CouplingParams kCoupling;

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kUsage;
}

MeasurementRecord zeros(std::size_t n) {
  MeasurementRecord r;
  r.tau = kCoupling.tau;
  r.outcomes.assign(n, 0.0);
  return r;
}

TEST(TerminalEffect, IsFlat) { EXPECT_TRUE(terminal_effect().flat); }

TEST(StepBackwardCov, RejectsInvalidInput) {
  Mat3 bad = Mat3::Identity();
  bad(0, 1) = 3.0;
  EXPECT_EQ(code_of([&] { step_backward_cov(bad, kOu, kCoupling); }), ErrorCode::kInvalidState);
}

TEST(StepBackwardCov, FieldGrowsWithoutObservation) {
  const Mat3 n = step_backward_cov(Mat3::Identity(), kOu, kCoupling);
  const double tau = kCoupling.tau;
  EXPECT_NEAR(n(0, 0), 1.0 + 2.0 * kOu.gamma_b * tau + 2.0 * kOu.sigma_b * tau, 1e-15);
  EXPECT_NEAR(n(0, 2), kCoupling.mu * tau, 1e-15);
  EXPECT_EQ(n(2, 0), n(0, 2));
}

TEST(StepBackwardMean, UsesInnovationOnAtomP) {
  Mat3 a = Mat3::Identity();
  a(0, 2) = a(2, 0) = 0.5;
  const Vec3 m(1.0, 0.0, 2.0);
  const double k = kCoupling.kappa_sqrt_tau();
  const double innov = 0.3 - k * 2.0;
  const Vec3 n = step_backward_mean(m, a, 0.3, kOu, kCoupling);
  EXPECT_DOUBLE_EQ(n(0), (1.0 + kOu.gamma_b * kCoupling.tau) + k * 0.5 * innov);
  EXPECT_DOUBLE_EQ(n(1), 0.0);
  EXPECT_DOUBLE_EQ(n(2), 2.0 + kCoupling.mu * kCoupling.tau + k * innov);
}

TEST(RunBackward, ShapeAndTerminalRow) {
  const auto record = generate_record(kOu, kCoupling, 200, 4).first;
  const auto eff = run_backward(record, kOu, kCoupling);
  ASSERT_EQ(eff.size(), 201u);
  EXPECT_TRUE(eff.back().flat);
  for (std::size_t k = 0; k < 200; ++k) {
    EXPECT_FALSE(eff[k].flat);
    EXPECT_TRUE(check_valid(eff[k]).ok) << k;
  }
}

TEST(RunBackward, NoCouplingMeansNoInformation) {
  CouplingParams c = kCoupling;
  c.kappa_sq = 0.0;
  for (const auto& e : run_backward(zeros(50), kOu, c)) EXPECT_TRUE(e.flat);
}

TEST(RunBackward, Errors) {
  EXPECT_EQ(code_of([] { run_backward(MeasurementRecord{}, kOu, kCoupling); }),
            ErrorCode::kEmptyRecord);
  BackwardOptions opts;
  opts.flat_fallback = 0.0;
  EXPECT_EQ(code_of([&] { run_backward(zeros(3), kOu, kCoupling, opts); }),
            ErrorCode::kInvalidParams);
}

TEST(RunBackward, ZeroOutcomesKeepZeroMean) {
  for (const auto& e : run_backward(zeros(300), kOu, kCoupling)) {
    if (!e.flat) {
      EXPECT_EQ(e.mean, Vec3::Zero());
    }
  }
}

TEST(RunBackward, CovariancesIgnoreOutcomes) {
  const auto a = generate_record(kOu, kCoupling, 2000, 21).first;
  const auto b = generate_record(kOu, kCoupling, 2000, 22).first;
  const auto ea = run_backward(a, kOu, kCoupling);
  const auto eb = run_backward(b, kOu, kCoupling);
  for (std::size_t k = 0; k + 1 < ea.size(); ++k) ASSERT_EQ(ea[k].cov, eb[k].cov) << k;
}

TEST(RunBackward, LongRecordReachesFixedPoint) {
  const auto eff = run_backward(zeros(20000), kOu, kCoupling);
  EXPECT_NEAR(eff.front().cov(0, 0) / oracle::kDefault.bwd_a11, 1.0, 1e-9);
}

TEST(SteadyBackward, MatchesOracle) {
  for (const auto* row : {&oracle::kDefault, &oracle::kFastField, &oracle::kSlowField}) {
    const OuParams ou{row->gamma_b, row->sigma_b};
    CouplingParams c{row->mu, row->kappa_sq, 1e-6};
    c.tau = std::min(c.tau, kStabilityLimit / std::max(ou.gamma_b, c.kappa_sq));
    const SteadyState s = steady_backward_cov(ou, c);
    ASSERT_TRUE(s.converged) << row->gamma_b;
    EXPECT_NEAR(s.cov(0, 0) / row->bwd_a11, 1.0, 1e-8) << row->gamma_b;
    EXPECT_NEAR(s.cov(0, 2) / row->bwd_a13, 1.0, 1e-8) << row->gamma_b;
    EXPECT_NEAR(s.cov(2, 2) / row->bwd_a33, 1.0, 1e-8) << row->gamma_b;
  }
}

}  // namespace
}  // namespace pqsmag
