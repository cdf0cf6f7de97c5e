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

namespace pqsmag {

/// Per-time-step estimates of B on the grid t_k = k tau, k = 0..N.
///
/// Variances are probability variances [pT^2] (half the doubled-convention
/// matrix entry). b_true is empty unless the hidden truth is known. The PQS
/// columns are empty for a filter-only run.
struct EstimateSeries {
  std::vector<double> times;
  std::vector<double> b_true;
  std::vector<double> b_filter;
  std::vector<double> var_filter;
  std::vector<double> b_pqs;
  std::vector<double> var_pqs;
  /// Fusion of the two marginal B variances only, ignoring the atomic
  /// correlations: 1/2 (1/A_rho[0,0] + 1/A_E[0,0])^-1.
  std::vector<double> var_naive_scalar;

  std::size_t size() const { return times.size(); }
  bool has_pqs() const { return !b_pqs.empty(); }
  bool has_truth() const { return !b_true.empty(); }
};

}  // namespace pqsmag
