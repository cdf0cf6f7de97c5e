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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pqsmag/backward_effect.hpp"
#include "pqsmag/forward_filter.hpp"
#include "pqsmag/kernels/kernels.hpp"
#include "pqsmag/params.hpp"

namespace pqsmag {

/// First index of the steady window on t_0..t_N: the later of N/2 and five
/// OU correlation times. Throws Error(kInvalidParams) if the window is empty.
std::size_t steady_window_begin(std::size_t n_steps, const OuParams& ou,
                                const CouplingParams& coupling);

struct EnsembleOptions {
  unsigned threads = 0;                     ///< 0: hardware concurrency
  std::optional<double> v_b;                ///< prior B variance; default stationary
  double flat_fallback = kDefaultFlatFallback;
  std::optional<kernels::Isa> isa;          ///< default: widest available
  /// false gives every trajectory the master seed itself (degenerate runs).
  bool distinct_substreams = true;
};

/// Per-time MSE and Bayesian variance of the filter and PQS estimates on
/// t_0..t_N, with averages over the steady window [steady_begin, N].
struct EnsembleReport {
  std::size_t m = 0;
  std::size_t n_steps = 0;
  double tau = 0.0;
  std::uint64_t seed = 0;
  std::string isa;

  std::vector<double> times;
  std::vector<double> mse_filter;
  std::vector<double> mse_pqs;
  std::vector<double> bayes_var_filter;
  std::vector<double> bayes_var_pqs;
  /// Fraction of trajectories with |b_filter - b| <= sqrt(bayes_var_filter).
  std::vector<double> coverage_filter;

  std::size_t steady_begin = 0;
  double mse_filter_steady = 0.0;
  double mse_pqs_steady = 0.0;
  double bayes_var_filter_steady = 0.0;
  double bayes_var_pqs_steady = 0.0;
  double coverage_filter_steady = 0.0;
};

/// Simulates m records (trajectory i uses substream_seed(seed, i)), runs the
/// filter and the smoother on each, and averages squared errors per time.
/// Covariances, and so the Bayesian columns, are computed once. The result
/// does not depend on the thread count. Throws Error(kInvalidParams) for
/// m < 2 or an empty steady window.
EnsembleReport run_ensemble(const OuParams& ou, const CouplingParams& coupling,
                            std::size_t n_steps, std::size_t m, std::uint64_t seed,
                            const EnsembleOptions& options = {});

enum class SweepAxis { kGammaB, kKappaSq };

struct SweepRow {
  double value = 0.0;
  double gamma_b = 0.0;
  double sigma_b = 0.0;
  double kappa_sq = 0.0;
  double tau = 0.0;  ///< step used for this row
  double var_filter = 0.0;
  double var_pqs = 0.0;
  bool converged = false;
  long iterations = 0;  ///< forward plus backward fixed-point iterations
};

/// Steady-state filter and PQS variances along one axis. sigma_b follows
/// gamma_b at the fixed ratio sigma_b / gamma_b of `ou`. Each row uses
/// tau_row = min(tau, kStabilityLimit / max(gamma_b, kappa_sq)). Rows that
/// fail to converge keep their last iterate and converged = false.
/// Values must be ascending, positive for gamma_b and non-negative for
/// kappa_sq; otherwise Error(kInvalidParams).
std::vector<SweepRow> sweep_steady_variance(SweepAxis axis, const std::vector<double>& values,
                                            const OuParams& ou, const CouplingParams& coupling,
                                            const SteadyStateOptions& options = {});

/// Log-spaced grid lo..hi with `per_decade` points per decade, both ends
/// included.
std::vector<double> log_grid(double lo, double hi, int per_decade);

enum class Figure { kFig1, kFig2, kFig3a, kFig3b };

std::string figure_name(Figure figure);
/// Throws Error(kUsage) for an unknown name.
Figure parse_figure(const std::string& name);

struct FigureOptions {
  OuParams ou;
  CouplingParams coupling;
  std::size_t n_steps = 20000;
  std::size_t m = 500;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::vector<double> sweep_values;  ///< empty: default grid
};

struct FigureFiles {
  std::string csv;
  std::string manifest;
};

/// Writes <name>.csv and <name>.json into out_dir (created if missing).
///   fig1:  t, b_true, b_filter, b_pqs
///   fig2:  t, mse_filter, mse_pqs, bayes_filter, bayes_pqs
///   fig3a: gamma_b, var_filter, var_pqs, converged
///   fig3b: kappa_sq, var_filter, var_pqs, converged
/// Throws Error(kIo) when the files cannot be written.
FigureFiles reproduce_figure(Figure figure, const std::string& out_dir,
                             const FigureOptions& options = {});

}  // namespace pqsmag
