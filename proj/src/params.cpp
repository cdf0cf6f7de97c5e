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

#include "pqsmag/params.hpp"

#include <cstdio>

#include "pqsmag/error.hpp"

namespace pqsmag {

namespace {

void require(bool ok, const char* field, const char* rule, double value) {
  if (ok) return;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s must be %s (got %.17g)", field, rule, value);
  throw Error(ErrorCode::kInvalidParams, buf);
}

}  // namespace

void OuParams::validate() const {
  require(std::isfinite(gamma_b) && gamma_b > 0.0, "gamma_b", "> 0", gamma_b);
  require(std::isfinite(sigma_b) && sigma_b >= 0.0, "sigma_b", ">= 0", sigma_b);
}

void CouplingParams::validate() const {
  require(std::isfinite(mu) && mu >= 0.0, "mu", ">= 0", mu);
  require(std::isfinite(kappa_sq) && kappa_sq >= 0.0, "kappa_sq", ">= 0", kappa_sq);
  require(std::isfinite(tau) && tau > 0.0, "tau", "> 0", tau);
}

std::vector<std::string> stability_warnings(const OuParams& ou,
                                            const CouplingParams& coupling) {
  std::vector<std::string> out;
  char buf[160];
  const double gt = ou.gamma_b * coupling.tau;
  const double kt = coupling.kappa_sq * coupling.tau;
  if (gt > kStabilityLimit) {
    std::snprintf(buf, sizeof buf, "gamma_b*tau = %.3g exceeds %.2g", gt, kStabilityLimit);
    out.emplace_back(buf);
  }
  if (kt > kStabilityLimit) {
    std::snprintf(buf, sizeof buf, "kappa_sq*tau = %.3g exceeds %.2g", kt, kStabilityLimit);
    out.emplace_back(buf);
  }
  return out;
}

}  // namespace pqsmag
