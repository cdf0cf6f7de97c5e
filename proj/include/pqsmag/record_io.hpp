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

#include <string>

#include "pqsmag/record.hpp"

namespace pqsmag {

inline constexpr int kSchemaVersion = 1;

// Record file: `key=value` header lines (tau, seed, n_steps, gamma_b,
// sigma_b, mu, kappa_sq, params_hash, schema_version), then one outcome per
// line. Truth file: CSV with header b,x_mean,p_mean,t_xx,t_xp,t_pp.
// Reals are written with 17 significant digits, so round trips are exact.

/// Formats a double with 17 significant digits.
std::string format_real(double v);

/// Throws Error(kIo) if the file cannot be written.
void write_record(const std::string& path, const MeasurementRecord& record);

/// Throws Error(kIo) on unreadable files or malformed lines and
/// Error(kEmptyRecord) when the file holds no outcomes.
MeasurementRecord read_record(const std::string& path);

void write_truth(const std::string& path, const TruthTrajectory& truth);
TruthTrajectory read_truth(const std::string& path);

}  // namespace pqsmag
