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


// End-to-end acceptance checks. Prints one PASS/FAIL line per check and
// exits non-zero if any check fails. Tolerances are pinned below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "kalman_oracle.hpp"
#include "pqsmag/backward_effect.hpp"
#include "pqsmag/experiments.hpp"
#include "pqsmag/forward_filter.hpp"
#include "pqsmag/pqs_fusion.hpp"
#include "pqsmag/truth_simulator.hpp"

namespace {

using namespace pqsmag;
using Clock = std::chrono::steady_clock;

// Pinned tolerances.
constexpr double kRatioLo = 1.0 / 5.0;
constexpr double kRatioHi = 1.0 / 3.0;
constexpr double kSteadyRuntimeLimit = 1.0;  // s
constexpr double kGapLo = 1.0;
constexpr double kGapHi = 2.0;
constexpr double kPriorTolerance = 1e-6;
constexpr double kSlowProbeTolerance = 0.10;
constexpr double kScalingTarget = 4.0;
constexpr double kScalingTolerance = 0.20;
constexpr double kOracleTolerance = 1e-6;
constexpr double kOracleTau = 1e-11;
constexpr double kWhitenessVarTolerance = 0.05;
constexpr double kFallbackTolerance = 1e-4;

const OuParams kOu;
const CouplingParams kCoupling;

int failures = 0;

void report(bool ok, const char* id, const char* what, const std::string& detail) {
  std::printf("%s  %-4s %-40s %s\n", ok ? "PASS" : "FAIL", id, what, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool in_band(double v, double lo, double hi) { return v >= lo && v <= hi; }

void steady_ratio() {
  const auto t0 = Clock::now();
  GaussianBlock rho, eff;
  rho.cov = steady_state_cov(kOu, kCoupling).cov;
  eff.cov = steady_backward_cov(kOu, kCoupling).cov;
  const double var_f = 0.5 * rho.cov(0, 0);
  const double var_p = smooth_point(rho, eff).var;
  const double elapsed = seconds_since(t0);
  const double r = var_p / var_f;
  report(in_band(r, kRatioLo, kRatioHi) && elapsed < kSteadyRuntimeLimit, "1",
         "steady Var_pqs/Var_f",
         fmt("ratio=%.5f var_f=%.6g var_pqs=%.6g time=%.3fs", r, var_f, var_p, elapsed));
}

void ensemble_checks() {
  const auto t0 = Clock::now();
  const EnsembleReport e = run_ensemble(kOu, kCoupling, 20000, 500, 2026);
  const double elapsed = seconds_since(t0);
  const double gf = e.mse_filter_steady / e.bayes_var_filter_steady;
  const double gp = e.mse_pqs_steady / e.bayes_var_pqs_steady;
  report(in_band(gf, kGapLo, kGapHi) && in_band(gp, kGapLo, kGapHi), "2",
         "ensemble MSE/Bayesian variance",
         fmt("filter=%.4f pqs=%.4f time=%.2fs", gf, gp, elapsed) + " isa=" + e.isa);
  const double r = e.mse_pqs_steady / e.mse_filter_steady;
  report(in_band(r, kRatioLo, kRatioHi), "3", "ensemble mse_pqs/mse_filter",
         fmt("ratio=%.4f coverage=%.3f", r, e.coverage_filter_steady));
}

void unobserved_limit() {
  const double prior = kOu.stationary_variance();
  const auto none = sweep_steady_variance(SweepAxis::kKappaSq, {0.0}, kOu, kCoupling).front();
  const double e0 = std::max(std::abs(none.var_filter / prior - 1.0),
                             std::abs(none.var_pqs / prior - 1.0));
  const auto slow =
      sweep_steady_variance(SweepAxis::kGammaB, {100.0 * kCoupling.kappa_sq}, kOu, kCoupling)
          .front();
  const double e1 = std::max(std::abs(slow.var_filter / prior - 1.0),
                             std::abs(slow.var_pqs / prior - 1.0));
  report(e0 <= kPriorTolerance && e1 <= kSlowProbeTolerance && slow.converged, "4",
         "unobserved limit", fmt("kappa0_err=%.2e gamma100k_err=%.4f", e0, e1));
}

// Largest per-step covariance gap between the 5x5 step and the reduced
// recursion along a 1000-step filter run.
double max_step_gap(double tau) {
  CouplingParams c = kCoupling;
  c.tau = tau;
  const auto record = generate_record(kOu, c, 1000, 6).first;
  GaussianBlock g = initial_state(kOu.stationary_variance());
  double gap = 0.0;
  for (double x : record.outcomes) {
    const Mat3 full = step_full(FullGaussian::WithFreshLight(g), x, kOu, c).block().cov;
    const Mat3 reduced = step_reduced_cov(g.cov, kOu, c);
    gap = std::max(gap, (full - reduced).cwiseAbs().maxCoeff());
    g.mean = step_reduced_mean(g.mean, g.cov, x, kOu, c);
    g.cov = reduced;
  }
  return gap;
}

void reduced_vs_full() {
  const double r = max_step_gap(kCoupling.tau) / max_step_gap(0.5 * kCoupling.tau);
  report(std::abs(r / kScalingTarget - 1.0) <= kScalingTolerance, "5",
         "reduced vs 5x5 step, tau halved", fmt("ratio=%.4f", r));
}

double oracle_gap(double tau, std::size_t n) {
  CouplingParams c = kCoupling;
  c.tau = tau;
  const auto record = generate_record(kOu, c, n, 7).first;
  const EstimateSeries s = run_filter(record, 0.5, kOu, c);
  const auto model = oracle::field_model(kOu.gamma_b, kOu.sigma_b, c.mu, c.kappa_sq, tau);
  const auto track =
      oracle::kalman_filter(model, Vec3::Zero(), 0.5 * initial_state(0.5).cov, record.outcomes);
  double gap = 0.0, scale = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    gap = std::max(gap, std::abs(s.b_filter[k] - track.mean[k](0)));
    scale = std::max(scale, std::abs(track.mean[k](0)));
  }
  return gap / scale;
}

void kalman_oracle() {
  const double fine = oracle_gap(kOracleTau, 10000);
  const double coarse = oracle_gap(kCoupling.tau, 10000);
  report(fine <= kOracleTolerance, "6", "textbook Kalman filter agreement",
         fmt("rel_gap=%.2e at tau=%.0e (rel_gap=%.2e at tau=%.0e)", fine, kOracleTau, coarse,
             kCoupling.tau));
}

void covariance_determinism() {
  const auto a = generate_record(kOu, kCoupling, 20000, 101).first;
  const auto b = generate_record(kOu, kCoupling, 20000, 202).first;
  const auto fa = forward_pass(a, 0.5, kOu, kCoupling).states;
  const auto fb = forward_pass(b, 0.5, kOu, kCoupling).states;
  const auto ea = run_backward(a, kOu, kCoupling);
  const auto eb = run_backward(b, kOu, kCoupling);
  std::size_t diff = 0;
  for (std::size_t k = 0; k < fa.size(); ++k) {
    diff += fa[k].cov != fb[k].cov;
    diff += ea[k].flat != eb[k].flat || (!ea[k].flat && ea[k].cov != eb[k].cov);
  }
  report(diff == 0, "7", "covariances independent of outcomes",
         fmt("differing_rows=%.0f of %.0f", static_cast<double>(diff),
             static_cast<double>(2 * fa.size())));
}

void psd_and_symmetry() {
  const auto record = generate_record(kOu, kCoupling, 100000, 303).first;
  const auto fwd = forward_pass(record, 0.5, kOu, kCoupling).states;
  const auto bwd = run_backward(record, kOu, kCoupling);
  std::size_t bad = 0, checked = 0;
  double worst_sym = 0.0;
  for (std::size_t k = 0; k < fwd.size(); ++k) {
    const Diagnostics d = check_valid(fwd[k]);
    bad += !d.ok;
    worst_sym = std::max(worst_sym, d.symmetry_defect);
    ++checked;
    if (!bwd[k].flat) {
      const Diagnostics e = check_valid(bwd[k]);
      bad += !e.ok;
      worst_sym = std::max(worst_sym, e.symmetry_defect);
      ++checked;
    }
  }
  report(bad == 0, "8", "every covariance symmetric PSD",
         fmt("invalid=%.0f checked=%.0f max_asym=%.1e", static_cast<double>(bad),
             static_cast<double>(checked), worst_sym));
}

void terminal_degeneracy() {
  const auto record = generate_record(kOu, kCoupling, 5000, 404).first;
  const EstimateSeries s = smooth_series(record, 0.5, kOu, kCoupling);
  bool ok = s.b_pqs.back() == s.b_filter.back() && s.var_pqs.back() == s.var_filter.back();
  const auto states = forward_pass(record, 0.5, kOu, kCoupling).states;
  for (std::size_t k = 0; k < states.size(); k += 97) {
    const GaussianBlock f = fuse_information(states[k], terminal_effect());
    const GaussianBlock g = fuse_information(terminal_effect(), states[k]);
    ok = ok && f.mean == states[k].mean && f.cov == states[k].cov && g.mean == states[k].mean &&
         g.cov == states[k].cov;
  }
  report(ok, "9", "flat effect is an identity", "final index and sampled fusions exact");
}

void innovation_whiteness() {
  const std::size_t n = 1000000;
  const auto record = generate_record(kOu, kCoupling, n, 505).first;
  const auto z = normalized_innovations(record, forward_pass(record, 0.5, kOu, kCoupling),
                                        kCoupling);
  double sum = 0.0, sq = 0.0;
  for (double v : z) {
    sum += v;
    sq += v * v;
  }
  const double count = static_cast<double>(z.size());
  const double mean = sum / count;
  const double var = sq / count - mean * mean;
  report(std::abs(mean) < 3.0 / std::sqrt(count) && std::abs(var - 1.0) <= kWhitenessVarTolerance,
         "10", "normalized innovations white",
         fmt("mean=%.2e bound=%.2e var=%.5f", mean, 3.0 / std::sqrt(count), var));
}

// Max-norm change over the whole series, relative to max |b_pqs|. The L2
// measure and the distance of the worst point from t_N are printed too.
void fallback_insensitivity() {
  const auto record = generate_record(kOu, kCoupling, 20000, 606).first;
  const EstimateSeries ref = smooth_series(record, 0.5, kOu, kCoupling);
  double scale = 0.0, norm2 = 0.0;
  for (double b : ref.b_pqs) {
    scale = std::max(scale, std::abs(b));
    norm2 += b * b;
  }
  double worst = 0.0, worst_l2 = 0.0;
  std::size_t worst_at = 0;
  for (double c : {1e6, 1e7, 1e9, 1e10}) {
    BackwardOptions o;
    o.flat_fallback = c;
    const EstimateSeries s = smooth_series(record, 0.5, kOu, kCoupling, o);
    double diff2 = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      const double d = std::abs(s.b_pqs[k] - ref.b_pqs[k]);
      diff2 += d * d;
      if (d / scale > worst) {
        worst = d / scale;
        worst_at = k;
      }
    }
    worst_l2 = std::max(worst_l2, std::sqrt(diff2 / norm2));
  }
  report(worst < kFallbackTolerance, "11", "flat fallback in [1e6, 1e10]",
         fmt("max_rel_change=%.2e l2_rel_change=%.2e worst_steps_before_end=%.0f", worst,
             worst_l2, static_cast<double>(ref.size() - 1 - worst_at)));
}

template <typename Get>
bool monotone(const std::vector<SweepRow>& rows, Get get, int direction) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (direction * (get(rows[i]) - get(rows[i - 1])) < 0.0) return false;
  }
  return true;
}

void sweep_trends() {
  const auto a = sweep_steady_variance(SweepAxis::kGammaB, log_grid(1e1, 1e6, 4), kOu, kCoupling);
  std::vector<double> kappas = log_grid(1e1, 1e6, 4);
  kappas.insert(kappas.begin(), 0.0);
  const auto b = sweep_steady_variance(SweepAxis::kKappaSq, kappas, kOu, kCoupling);
  bool converged = true;
  for (const auto& r : a) converged = converged && r.converged;
  for (const auto& r : b) converged = converged && r.converged;
  auto vf = [](const SweepRow& r) { return r.var_filter; };
  auto vp = [](const SweepRow& r) { return r.var_pqs; };
  auto ratio = [](const SweepRow& r) { return r.var_pqs / r.var_filter; };
  const bool trends = monotone(a, vf, +1) && monotone(a, vp, +1) && monotone(a, ratio, +1) &&
                      monotone(b, vf, -1) && monotone(b, vp, -1);
  // Advantage regime: every gamma_b below kappa^2 beats every gamma_b above it.
  double worst_below = 0.0, best_above = 1.0;
  for (const auto& r : a) {
    if (r.gamma_b < kCoupling.kappa_sq) worst_below = std::max(worst_below, ratio(r));
    if (r.gamma_b > kCoupling.kappa_sq) best_above = std::min(best_above, ratio(r));
  }
  report(converged && trends && worst_below < best_above, "F3", "sweep trends and regime",
         fmt("ratio(gamma<k2)<=%.4f ratio(gamma>k2)>=%.4f ratio(1e6)=%.4f", worst_below,
             best_above, ratio(a.back())));
}

}  // namespace

int main() {
  steady_ratio();
  ensemble_checks();
  unobserved_limit();
  reduced_vs_full();
  kalman_oracle();
  covariance_determinism();
  psd_and_symmetry();
  terminal_degeneracy();
  innovation_whiteness();
  fallback_insensitivity();
  sweep_trends();
  std::printf("%d check(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
