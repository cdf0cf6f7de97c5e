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


#include "pqsmag/kernels/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace pqsmag::kernels {

#if defined(__aarch64__)

namespace {

static_assert(kLanes % 2 == 0, "2-wide registers");

// vmulq/vaddq only; vfmaq would round differently from the scalar variant.
void affine_step(const double* t, const double* g, double* m, const double* x) {
  float64x2_t out[3 * kLanes / 2];
  for (std::size_t h = 0; h < kLanes / 2; ++h) {
    const std::size_t o = 2 * h;
    const float64x2_t m0 = vld1q_f64(m + o);
    const float64x2_t m1 = vld1q_f64(m + kLanes + o);
    const float64x2_t m2 = vld1q_f64(m + 2 * kLanes + o);
    const float64x2_t xv = vld1q_f64(x + o);
    for (std::size_t i = 0; i < 3; ++i) {
      float64x2_t a = vmulq_f64(vdupq_n_f64(t[3 * i]), m0);
      a = vaddq_f64(a, vmulq_f64(vdupq_n_f64(t[3 * i + 1]), m1));
      a = vaddq_f64(a, vmulq_f64(vdupq_n_f64(t[3 * i + 2]), m2));
      a = vaddq_f64(a, vmulq_f64(vdupq_n_f64(g[i]), xv));
      out[i * (kLanes / 2) + h] = a;
    }
  }
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t h = 0; h < kLanes / 2; ++h) {
      vst1q_f64(m + i * kLanes + 2 * h, out[i * (kLanes / 2) + h]);
    }
  }
}

void fuse_squared_error(const double* wr, const double* we, const double* mr, const double* me,
                        const double* b, double* sq_f, double* sq_p) {
  for (std::size_t h = 0; h < kLanes / 2; ++h) {
    const std::size_t o = 2 * h;
    const float64x2_t r0 = vld1q_f64(mr + o);
    float64x2_t p = vmulq_f64(vdupq_n_f64(wr[0]), r0);
    p = vaddq_f64(p, vmulq_f64(vdupq_n_f64(wr[1]), vld1q_f64(mr + kLanes + o)));
    p = vaddq_f64(p, vmulq_f64(vdupq_n_f64(wr[2]), vld1q_f64(mr + 2 * kLanes + o)));
    p = vaddq_f64(p, vmulq_f64(vdupq_n_f64(we[0]), vld1q_f64(me + o)));
    p = vaddq_f64(p, vmulq_f64(vdupq_n_f64(we[1]), vld1q_f64(me + kLanes + o)));
    p = vaddq_f64(p, vmulq_f64(vdupq_n_f64(we[2]), vld1q_f64(me + 2 * kLanes + o)));
    const float64x2_t bv = vld1q_f64(b + o);
    const float64x2_t df = vsubq_f64(r0, bv);
    const float64x2_t dp = vsubq_f64(p, bv);
    vst1q_f64(sq_f + o, vmulq_f64(df, df));
    vst1q_f64(sq_p + o, vmulq_f64(dp, dp));
  }
}

constexpr KernelTable kTable{Isa::kNeon, &affine_step, &fuse_squared_error};

}  // namespace

const KernelTable* neon_table() { return &kTable; }

#else

const KernelTable* neon_table() { return nullptr; }

#endif

}  // namespace pqsmag::kernels
