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

namespace pqsmag::kernels {

namespace {

void affine_step(const double* t, const double* g, double* m, const double* x) {
  double out[3 * kLanes];
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t l = 0; l < kLanes; ++l) {
      double a = t[3 * i] * m[l];
      a = a + t[3 * i + 1] * m[kLanes + l];
      a = a + t[3 * i + 2] * m[2 * kLanes + l];
      a = a + g[i] * x[l];
      out[i * kLanes + l] = a;
    }
  }
  for (std::size_t j = 0; j < 3 * kLanes; ++j) m[j] = out[j];
}

void fuse_squared_error(const double* wr, const double* we, const double* mr, const double* me,
                        const double* b, double* sq_f, double* sq_p) {
  for (std::size_t l = 0; l < kLanes; ++l) {
    double p = wr[0] * mr[l];
    p = p + wr[1] * mr[kLanes + l];
    p = p + wr[2] * mr[2 * kLanes + l];
    p = p + we[0] * me[l];
    p = p + we[1] * me[kLanes + l];
    p = p + we[2] * me[2 * kLanes + l];
    const double df = mr[l] - b[l];
    const double dp = p - b[l];
    sq_f[l] = df * df;
    sq_p[l] = dp * dp;
  }
}

constexpr KernelTable kTable{Isa::kScalar, &affine_step, &fuse_squared_error};

}  // namespace

const KernelTable& scalar_table() { return kTable; }

}  // namespace pqsmag::kernels
