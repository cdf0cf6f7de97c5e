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

#include <stdexcept>
#include <string>
#include <string_view>

namespace pqsmag {

/// Stable error codes. The numeric values double as CLI exit statuses and
/// must not be renumbered.
enum class ErrorCode : int {
  kUsage = 2,
  kInvalidState = 10,
  kSingularCovariance = 11,
  kNegativeVariance = 12,
  kEmptyRecord = 13,
  kInvalidParams = 14,
  kMismatchedRecord = 15,
  kNoConvergence = 16,
  kIo = 17,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pqsmag
