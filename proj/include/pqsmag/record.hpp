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
#include <cstdint>
#include <string>
#include <vector>

#include "pqsmag/params.hpp"

namespace pqsmag {

/// Homodyne record: outcome k is the x_ph reading of the light segment that
/// interacted with the atoms during [t_k, t_k + tau).
struct MeasurementRecord {
  double tau = 0.0;
  std::vector<double> outcomes;
  std::uint64_t seed = 0;
  std::string params_hash;
  // Generating parameters, kept so a record file is self-describing.
  OuParams ou;
  CouplingParams coupling;

  std::size_t size() const { return outcomes.size(); }
  bool empty() const { return outcomes.empty(); }
};

/// Hidden truth behind a simulated record. Row k is the state at t_k,
/// k = 0..N, where N is the number of outcomes; row k is the state the
/// outcome k was read from.
struct TruthTrajectory {
  std::vector<double> b;       ///< field [pT]
  std::vector<double> x_mean;  ///< conditional atomic means
  std::vector<double> p_mean;
  std::vector<double> t_xx;    ///< conditional atomic covariance, doubled convention
  std::vector<double> t_xp;
  std::vector<double> t_pp;

  std::size_t size() const { return b.size(); }
};

/// Hex digest of the generating parameters (FNV-1a over their 17-digit
/// decimal rendering). Stable across platforms.
std::string params_digest(const OuParams& ou, const CouplingParams& coupling);

}  // namespace pqsmag
