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

#include "pqsmag/pqs_fusion.hpp"

#include "pqsmag/error.hpp"
#include "pqsmag/forward_filter.hpp"

namespace pqsmag {

PointEstimate smooth_point(const GaussianBlock& rho, const GaussianBlock& eff) {
  const GaussianBlock fused = fuse_information(rho, eff);
  return {fused.mean(kField), 0.5 * fused.cov(kField, kField)};
}

double naive_scalar_variance(const GaussianBlock& rho, const GaussianBlock& eff) {
  const double a = rho.cov(kField, kField);
  if (eff.flat) return 0.5 * a;
  const double e = eff.cov(kField, kField);
  return 0.5 / (1.0 / a + 1.0 / e);
}

EstimateSeries smooth_series(const MeasurementRecord& record, double v_b, const OuParams& ou,
                             const CouplingParams& coupling, const BackwardOptions& options) {
  if (record.empty()) throw Error(ErrorCode::kEmptyRecord, "smooth_series: record is empty");
  const ForwardPass pass = forward_pass(record, v_b, ou, coupling);
  const std::vector<GaussianBlock> effects = run_backward(record, ou, coupling, options);

  const std::size_t n = pass.states.size();
  EstimateSeries series;
  series.times.resize(n);
  series.b_filter.resize(n);
  series.var_filter.resize(n);
  series.b_pqs.resize(n);
  series.var_pqs.resize(n);
  series.var_naive_scalar.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const GaussianBlock& rho = pass.states[k];
    series.times[k] = static_cast<double>(k) * coupling.tau;
    series.b_filter[k] = rho.mean(kField);
    series.var_filter[k] = 0.5 * rho.cov(kField, kField);
    const PointEstimate pqs = smooth_point(rho, effects[k]);
    series.b_pqs[k] = pqs.b;
    series.var_pqs[k] = pqs.var;
    series.var_naive_scalar[k] = naive_scalar_variance(rho, effects[k]);
  }
  return series;
}

}  // namespace pqsmag
