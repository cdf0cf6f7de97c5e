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
#include <vector>

#include "pqsmag/estimate_series.hpp"

namespace pqsmag {

/// Comma-separated table with a header row, reals at 17 significant digits.
/// All columns must have the same length. Throws Error(kIo).
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<const std::vector<double>*>& columns);

/// Columns t, b_true (if known), b_filter, var_filter, then b_pqs, var_pqs,
/// var_naive_scalar when the series carries PQS estimates.
void write_series_csv(const std::string& path, const EstimateSeries& series);

}  // namespace pqsmag
