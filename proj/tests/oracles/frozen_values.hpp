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

// Fixed points of the reduced recursions, from steady_state_oracle.py
// (closed-form quartic at 50 digits). Entries use the doubled convention.

namespace pqsmag::oracle {

struct SteadyRow {
  double gamma_b, sigma_b, mu, kappa_sq;
  double fwd_a11, fwd_a13, fwd_a33;
  double bwd_a11, bwd_a13, bwd_a33;
  double var_f, var_pqs, naive;
};

inline constexpr SteadyRow kDefault{
    1e3, 1e3, 2e5, 1e4,
    0.09023172221027322, -0.42656026017193087, 4.1306670656054132,
    0.099180994120272378, 0.46886693082798501, 4.3306670656054132,
    0.04511586110513661, 0.011818467212060078, 0.023623735732667798};

inline constexpr SteadyRow kFastField{
    1e6, 1e6, 2e5, 1e4,
    0.99981077960306294, -0.19453554787598932, 2.7895200151709922,
    5283.8425232542221, 1028.0897356995859, 202.78952001517099,
    0.49990538980153147, 0.48643091234028878, 0.49981081540064793};

inline constexpr SteadyRow kSlowField{
    10, 10, 2e5, 1e4,
    0.0029862296036151654, -0.044654535500806295, 1.3364809837899871,
    0.0029951738805251645, 0.044788283599185293, 1.3384809837899871,
    0.0014931148018075827, 0.00037383709081467629, 0.00074767376366724609};

}  // namespace pqsmag::oracle
