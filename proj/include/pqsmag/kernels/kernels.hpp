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
#include <string_view>

namespace pqsmag::kernels {

// Batched kernels for the ensemble. Trajectories are processed in blocks of
// kLanes with structure-of-arrays storage: a 3-vector block is laid out as
// m[c * kLanes + lane]. Every variant performs the same operations in the
// same order, and nothing is contracted into FMAs, so all variants give
// bit-identical results.

inline constexpr std::size_t kLanes = 8;

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

/// m <- T m + g x per lane. `t` is a row-major 3x3, `g` a 3-vector, `m`
/// holds 3 * kLanes values, `x` kLanes outcomes.
using AffineStepFn = void (*)(const double* t, const double* g, double* m, const double* x);

/// Per lane: b_f = mr[0], b_pqs = wr . mr + we . me, then the squared
/// errors (b_f - b)^2 and (b_pqs - b)^2 are written to sq_f and sq_p.
using FuseSquaredErrorFn = void (*)(const double* wr, const double* we, const double* mr,
                                    const double* me, const double* b, double* sq_f,
                                    double* sq_p);

struct KernelTable {
  Isa isa;
  AffineStepFn affine_step;
  FuseSquaredErrorFn fuse_squared_error;
};

const KernelTable& scalar_table();
/// nullptr when the variant is not compiled into this build.
const KernelTable* avx2_table();
const KernelTable* neon_table();

/// True when the variant is compiled in and the CPU supports it.
bool available(Isa isa);

/// Throws Error(kInvalidParams) when `isa` is not available.
const KernelTable& table_for(Isa isa);

/// Widest available variant.
const KernelTable& best_table();

}  // namespace pqsmag::kernels
