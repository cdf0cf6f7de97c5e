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

#include <immintrin.h>

namespace pqsmag::kernels {

namespace {

static_assert(kLanes == 8, "two 4-wide registers per component");

void affine_step(const double* t, const double* g, double* m, const double* x) {
  __m256d out[6];
  for (int h = 0; h < 2; ++h) {
    const __m256d m0 = _mm256_loadu_pd(m + 4 * h);
    const __m256d m1 = _mm256_loadu_pd(m + kLanes + 4 * h);
    const __m256d m2 = _mm256_loadu_pd(m + 2 * kLanes + 4 * h);
    const __m256d xv = _mm256_loadu_pd(x + 4 * h);
    for (int i = 0; i < 3; ++i) {
      __m256d a = _mm256_mul_pd(_mm256_set1_pd(t[3 * i]), m0);
      a = _mm256_add_pd(a, _mm256_mul_pd(_mm256_set1_pd(t[3 * i + 1]), m1));
      a = _mm256_add_pd(a, _mm256_mul_pd(_mm256_set1_pd(t[3 * i + 2]), m2));
      a = _mm256_add_pd(a, _mm256_mul_pd(_mm256_set1_pd(g[i]), xv));
      out[2 * i + h] = a;
    }
  }
  for (int i = 0; i < 3; ++i) {
    _mm256_storeu_pd(m + i * kLanes, out[2 * i]);
    _mm256_storeu_pd(m + i * kLanes + 4, out[2 * i + 1]);
  }
}

void fuse_squared_error(const double* wr, const double* we, const double* mr, const double* me,
                        const double* b, double* sq_f, double* sq_p) {
  for (int h = 0; h < 2; ++h) {
    const int o = 4 * h;
    const __m256d r0 = _mm256_loadu_pd(mr + o);
    __m256d p = _mm256_mul_pd(_mm256_set1_pd(wr[0]), r0);
    p = _mm256_add_pd(p, _mm256_mul_pd(_mm256_set1_pd(wr[1]), _mm256_loadu_pd(mr + kLanes + o)));
    p = _mm256_add_pd(p,
                      _mm256_mul_pd(_mm256_set1_pd(wr[2]), _mm256_loadu_pd(mr + 2 * kLanes + o)));
    p = _mm256_add_pd(p, _mm256_mul_pd(_mm256_set1_pd(we[0]), _mm256_loadu_pd(me + o)));
    p = _mm256_add_pd(p, _mm256_mul_pd(_mm256_set1_pd(we[1]), _mm256_loadu_pd(me + kLanes + o)));
    p = _mm256_add_pd(p,
                      _mm256_mul_pd(_mm256_set1_pd(we[2]), _mm256_loadu_pd(me + 2 * kLanes + o)));
    const __m256d bv = _mm256_loadu_pd(b + o);
    const __m256d df = _mm256_sub_pd(r0, bv);
    const __m256d dp = _mm256_sub_pd(p, bv);
    _mm256_storeu_pd(sq_f + o, _mm256_mul_pd(df, df));
    _mm256_storeu_pd(sq_p + o, _mm256_mul_pd(dp, dp));
  }
}

constexpr KernelTable kTable{Isa::kAvx2, &affine_step, &fuse_squared_error};

}  // namespace

const KernelTable* avx2_table() { return &kTable; }

}  // namespace pqsmag::kernels
