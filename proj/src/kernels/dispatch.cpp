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


#include <string>

#include "pqsmag/error.hpp"
#include "pqsmag/kernels/kernels.hpp"

namespace pqsmag::kernels {

#if !defined(PQSMAG_HAVE_AVX2)
const KernelTable* avx2_table() { return nullptr; }
#endif

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

bool available(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(__x86_64__) || defined(__i386__)
      return avx2_table() != nullptr && __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::kNeon:
      // Advanced SIMD is mandatory on aarch64.
      return neon_table() != nullptr;
  }
  return false;
}

const KernelTable& table_for(Isa isa) {
  if (!available(isa)) {
    throw Error(ErrorCode::kInvalidParams,
                "kernel variant " + std::string(isa_name(isa)) + " is not available");
  }
  switch (isa) {
    case Isa::kAvx2:
      return *avx2_table();
    case Isa::kNeon:
      return *neon_table();
    case Isa::kScalar:
      break;
  }
  return scalar_table();
}

const KernelTable& best_table() {
  if (available(Isa::kAvx2)) return *avx2_table();
  if (available(Isa::kNeon)) return *neon_table();
  return scalar_table();
}

}  // namespace pqsmag::kernels
