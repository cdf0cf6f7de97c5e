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

#include "pqsmag/error.hpp"

namespace pqsmag {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage: return "UsageError";
    case ErrorCode::kInvalidState: return "InvalidState";
    case ErrorCode::kSingularCovariance: return "SingularCovariance";
    case ErrorCode::kNegativeVariance: return "NegativeVariance";
    case ErrorCode::kEmptyRecord: return "EmptyRecord";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kMismatchedRecord: return "MismatchedRecord";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kIo: return "IoError";
  }
  return "UnknownError";
}

}  // namespace pqsmag
