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


#include "pqsmag/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "pqsmag/csv.hpp"
#include "pqsmag/error.hpp"
#include "pqsmag/pqs_fusion.hpp"
#include "pqsmag/record_io.hpp"
#include "pqsmag/truth_simulator.hpp"
#include "pqsmag/version.hpp"

namespace pqsmag {

namespace {

using kernels::kLanes;
using Row9 = std::array<double, 9>;
using Row3 = std::array<double, 3>;

// Trajectories per unit of work. Partial sums are formed per chunk and
// merged in chunk order, which fixes the summation order for any number of
// threads.
constexpr std::size_t kBlocksPerChunk = 8;

// Record-independent part of an ensemble run.
struct Plan {
  std::size_t n = 0;
  std::vector<Row9> fwd_t;  // map k consumes outcome k: rho(t_k) -> rho(t_k+1)
  std::vector<Row3> fwd_g;
  std::vector<Row9> bwd_t;  // map k consumes outcome k: E(t_k+1) -> E(t_k)
  std::vector<Row3> bwd_g;
  std::vector<Row3> w_rho;  // b_pqs(t_k) = w_rho[k] . m_rho + w_eff[k] . m_eff
  std::vector<Row3> w_eff;
  std::vector<double> var_f;
  std::vector<double> var_p;
};

void store(const MeanMap& map, Row9& t, Row3& g) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) t[3 * i + j] = map.transition(i, j);
    g[i] = map.gain(i);
  }
}

Plan make_plan(const OuParams& ou, const CouplingParams& coupling, std::size_t n, double v_b,
               double fallback) {
  Plan plan;
  plan.n = n;
  plan.fwd_t.resize(n);
  plan.fwd_g.resize(n);
  plan.bwd_t.assign(n, Row9{1, 0, 0, 0, 1, 0, 0, 0, 1});
  plan.bwd_g.assign(n, Row3{0, 0, 0});
  plan.w_rho.resize(n + 1);
  plan.w_eff.resize(n + 1);
  plan.var_f.resize(n + 1);
  plan.var_p.resize(n + 1);

  std::vector<Mat3> rho(n + 1);
  rho[0] = initial_state(v_b).cov;
  PassStepper forward(Direction::kForward, ou, coupling);
  for (std::size_t k = 0; k < n; ++k) {
    rho[k + 1] = forward.step_cov(rho[k]);
    store(mean_map(rho[k], Direction::kForward, forward.last_step_exact(), ou, coupling),
          plan.fwd_t[k], plan.fwd_g[k]);
  }

  std::vector<GaussianBlock> eff(n + 1, terminal_effect());
  if (coupling.kappa_sq != 0.0) {
    PassStepper backward(Direction::kBackward, ou, coupling);
    Mat3 cov = GaussianBlock::FlatFallback(fallback).cov;
    for (std::size_t k = n; k-- > 0;) {
      const Mat3 next = backward.step_cov(cov);
      store(mean_map(cov, Direction::kBackward, backward.last_step_exact(), ou, coupling),
            plan.bwd_t[k], plan.bwd_g[k]);
      cov = next;
      eff[k] = GaussianBlock{Vec3::Zero(), cov, false};
    }
  }

  for (std::size_t k = 0; k <= n; ++k) {
    GaussianBlock r;
    r.cov = rho[k];
    if (!check_valid(r).ok || !check_valid(eff[k]).ok) {
      throw Error(ErrorCode::kInvalidState, "run_ensemble: covariance is not symmetric PSD");
    }
    plan.var_f[k] = 0.5 * rho[k](kField, kField);
    if (eff[k].flat) {
      plan.w_rho[k] = Row3{1, 0, 0};
      plan.w_eff[k] = Row3{0, 0, 0};
      plan.var_p[k] = plan.var_f[k];
      continue;
    }
    const GaussianBlock fused = fuse_information(r, eff[k]);
    plan.var_p[k] = 0.5 * fused.cov(kField, kField);
    const Eigen::RowVector3d wr = fused.cov.row(kField) * rho[k].inverse();
    const Eigen::RowVector3d we = fused.cov.row(kField) * eff[k].cov.inverse();
    for (int j = 0; j < 3; ++j) {
      plan.w_rho[k][j] = wr(j);
      plan.w_eff[k][j] = we(j);
    }
  }
  return plan;
}

struct Sums {
  std::vector<double> sq_f;
  std::vector<double> sq_p;
  std::vector<double> cover;

  explicit Sums(std::size_t rows) : sq_f(rows, 0.0), sq_p(rows, 0.0), cover(rows, 0.0) {}
};

struct Scratch {
  std::vector<double> x;   // n x kLanes outcomes
  std::vector<double> b;   // (n + 1) x kLanes true field
  std::vector<double> fm;  // (n + 1) x 3 kLanes forward means

  explicit Scratch(std::size_t n) : x(n * kLanes), b((n + 1) * kLanes), fm((n + 1) * 3 * kLanes) {}
};

void run_block(const Plan& plan, const kernels::KernelTable& kt, const OuParams& ou,
               const CouplingParams& coupling, const std::uint64_t* seeds, std::size_t active,
               Scratch& s, Sums& sums) {
  const std::size_t n = plan.n;
  std::fill(s.x.begin(), s.x.end(), 0.0);
  std::fill(s.b.begin(), s.b.end(), 0.0);
  for (std::size_t l = 0; l < active; ++l) {
    TruthSimulator sim(ou, coupling, seeds[l]);
    s.b[l] = sim.b();
    for (std::size_t k = 0; k < n; ++k) {
      s.x[k * kLanes + l] = sim.step();
      s.b[(k + 1) * kLanes + l] = sim.b();
    }
  }

  double m[3 * kLanes] = {};
  std::copy(m, m + 3 * kLanes, s.fm.begin());
  for (std::size_t k = 0; k < n; ++k) {
    kt.affine_step(plan.fwd_t[k].data(), plan.fwd_g[k].data(), m, &s.x[k * kLanes]);
    std::copy(m, m + 3 * kLanes, s.fm.begin() + (k + 1) * 3 * kLanes);
  }

  double me[3 * kLanes] = {};
  double sq_f[kLanes];
  double sq_p[kLanes];
  for (std::size_t k = n + 1; k-- > 0;) {
    if (k < n) kt.affine_step(plan.bwd_t[k].data(), plan.bwd_g[k].data(), me, &s.x[k * kLanes]);
    kt.fuse_squared_error(plan.w_rho[k].data(), plan.w_eff[k].data(), &s.fm[k * 3 * kLanes], me,
                          &s.b[k * kLanes], sq_f, sq_p);
    for (std::size_t l = 0; l < active; ++l) {
      sums.sq_f[k] += sq_f[l];
      sums.sq_p[k] += sq_p[l];
      sums.cover[k] += sq_f[l] <= plan.var_f[k] ? 1.0 : 0.0;
    }
  }
}

double window_mean(const std::vector<double>& v, std::size_t begin) {
  double sum = 0.0;
  for (std::size_t k = begin; k < v.size(); ++k) sum += v[k];
  return sum / static_cast<double>(v.size() - begin);
}

}  // namespace

std::size_t steady_window_begin(std::size_t n_steps, const OuParams& ou,
                                const CouplingParams& coupling) {
  const double burn = std::ceil(5.0 / (ou.gamma_b * coupling.tau));
  const std::size_t begin = std::max(n_steps / 2, static_cast<std::size_t>(burn));
  if (begin >= n_steps) {
    throw Error(ErrorCode::kInvalidParams,
                "horizon of " + std::to_string(n_steps) +
                    " steps leaves no steady window after a burn-in of " +
                    std::to_string(static_cast<std::size_t>(burn)) + " steps");
  }
  return begin;
}

EnsembleReport run_ensemble(const OuParams& ou, const CouplingParams& coupling,
                            std::size_t n_steps, std::size_t m, std::uint64_t seed,
                            const EnsembleOptions& options) {
  ou.validate();
  coupling.validate();
  if (m < 2) throw Error(ErrorCode::kInvalidParams, "m must be >= 2 (got " + std::to_string(m) + ")");
  if (n_steps < 1) throw Error(ErrorCode::kInvalidParams, "n_steps must be >= 1 (got 0)");
  const std::size_t begin = steady_window_begin(n_steps, ou, coupling);
  const double v_b = options.v_b.value_or(ou.stationary_variance());
  const kernels::KernelTable& kt =
      options.isa ? kernels::table_for(*options.isa) : kernels::best_table();

  const Plan plan = make_plan(ou, coupling, n_steps, v_b, options.flat_fallback);

  const std::size_t blocks = (m + kLanes - 1) / kLanes;
  const std::size_t chunks = (blocks + kBlocksPerChunk - 1) / kBlocksPerChunk;
  std::vector<Sums> partial(chunks, Sums(0));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    try {
      Scratch scratch(n_steps);
      for (std::size_t c = next++; c < chunks; c = next++) {
        Sums sums(n_steps + 1);
        const std::size_t b_end = std::min(blocks, (c + 1) * kBlocksPerChunk);
        for (std::size_t blk = c * kBlocksPerChunk; blk < b_end; ++blk) {
          std::uint64_t seeds[kLanes];
          const std::size_t first = blk * kLanes;
          const std::size_t active = std::min(kLanes, m - first);
          for (std::size_t l = 0; l < active; ++l) {
            seeds[l] = options.distinct_substreams ? substream_seed(seed, first + l) : seed;
          }
          run_block(plan, kt, ou, coupling, seeds, active, scratch, sums);
        }
        partial[c] = std::move(sums);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = static_cast<unsigned>(std::clamp<std::size_t>(threads, 1, chunks));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  Sums total(n_steps + 1);
  for (const Sums& p : partial) {
    for (std::size_t k = 0; k <= n_steps; ++k) {
      total.sq_f[k] += p.sq_f[k];
      total.sq_p[k] += p.sq_p[k];
      total.cover[k] += p.cover[k];
    }
  }

  EnsembleReport r;
  r.m = m;
  r.n_steps = n_steps;
  r.tau = coupling.tau;
  r.seed = seed;
  r.isa = std::string(kernels::isa_name(kt.isa));
  r.times.resize(n_steps + 1);
  r.mse_filter.resize(n_steps + 1);
  r.mse_pqs.resize(n_steps + 1);
  r.coverage_filter.resize(n_steps + 1);
  const double inv_m = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k <= n_steps; ++k) {
    r.times[k] = static_cast<double>(k) * coupling.tau;
    r.mse_filter[k] = total.sq_f[k] * inv_m;
    r.mse_pqs[k] = total.sq_p[k] * inv_m;
    r.coverage_filter[k] = total.cover[k] * inv_m;
  }
  r.bayes_var_filter = plan.var_f;
  r.bayes_var_pqs = plan.var_p;
  r.steady_begin = begin;
  r.mse_filter_steady = window_mean(r.mse_filter, begin);
  r.mse_pqs_steady = window_mean(r.mse_pqs, begin);
  r.bayes_var_filter_steady = window_mean(r.bayes_var_filter, begin);
  r.bayes_var_pqs_steady = window_mean(r.bayes_var_pqs, begin);
  r.coverage_filter_steady = window_mean(r.coverage_filter, begin);
  return r;
}

std::vector<SweepRow> sweep_steady_variance(SweepAxis axis, const std::vector<double>& values,
                                            const OuParams& ou, const CouplingParams& coupling,
                                            const SteadyStateOptions& options) {
  ou.validate();
  coupling.validate();
  const char* name = axis == SweepAxis::kGammaB ? "gamma_b" : "kappa_sq";
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    const bool ok = axis == SweepAxis::kGammaB ? v > 0.0 : v >= 0.0;
    if (!ok || !std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidParams,
                  std::string("sweep value for ") + name + " out of range (got " + format_real(v) + ")");
    }
    if (i > 0 && v < values[i - 1]) {
      throw Error(ErrorCode::kInvalidParams, "sweep values must be ascending");
    }
  }

  const double ratio = ou.sigma_b / ou.gamma_b;
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (double v : values) {
    OuParams o = ou;
    CouplingParams c = coupling;
    if (axis == SweepAxis::kGammaB) {
      o.gamma_b = v;
    } else {
      c.kappa_sq = v;
    }
    o.sigma_b = ratio * o.gamma_b;
    c.tau = std::min(coupling.tau, kStabilityLimit / std::max(o.gamma_b, c.kappa_sq));

    SweepRow row;
    row.value = v;
    row.gamma_b = o.gamma_b;
    row.sigma_b = o.sigma_b;
    row.kappa_sq = c.kappa_sq;
    row.tau = c.tau;
    if (c.kappa_sq == 0.0) {
      // Unobserved: the B block decouples and the stationary prior is its
      // fixed point; the effect stays flat.
      row.var_filter = row.var_pqs = o.stationary_variance();
      row.converged = true;
      rows.push_back(row);
      continue;
    }
    const SteadyState f = steady_state_cov(o, c, options);
    const SteadyState b = steady_backward_cov(o, c, options);
    row.iterations = f.iterations + b.iterations;
    row.var_filter = 0.5 * f.cov(kField, kField);
    row.converged = f.converged && b.converged;
    row.var_pqs = std::nan("");
    try {
      GaussianBlock r;
      r.cov = f.cov;
      GaussianBlock e;
      e.cov = b.cov;
      row.var_pqs = smooth_point(r, e).var;
    } catch (const Error&) {
      row.converged = false;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi >= lo) || per_decade < 1) {
    throw Error(ErrorCode::kInvalidParams, "log_grid: need 0 < lo <= hi and per_decade >= 1");
  }
  const double l0 = std::log10(lo);
  const int count = static_cast<int>(std::lround((std::log10(hi) - l0) * per_decade));
  std::vector<double> out;
  for (int i = 0; i <= count; ++i) out.push_back(std::pow(10.0, l0 + double(i) / per_decade));
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::string figure_name(Figure figure) {
  switch (figure) {
    case Figure::kFig1:
      return "fig1";
    case Figure::kFig2:
      return "fig2";
    case Figure::kFig3a:
      return "fig3a";
    case Figure::kFig3b:
      return "fig3b";
  }
  return "unknown";
}

Figure parse_figure(const std::string& name) {
  for (Figure f : {Figure::kFig1, Figure::kFig2, Figure::kFig3a, Figure::kFig3b}) {
    if (figure_name(f) == name) return f;
  }
  throw Error(ErrorCode::kUsage, "unknown figure '" + name + "' (fig1, fig2, fig3a, fig3b)");
}

FigureFiles reproduce_figure(Figure figure, const std::string& out_dir,
                             const FigureOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create '" + out_dir + "': " + ec.message());

  const std::string name = figure_name(figure);
  FigureFiles files;
  files.csv = (std::filesystem::path(out_dir) / (name + ".csv")).string();
  files.manifest = (std::filesystem::path(out_dir) / (name + ".json")).string();

  nlohmann::ordered_json manifest;
  manifest["figure"] = name;
  manifest["params"] = {{"gamma_b", options.ou.gamma_b},
                        {"sigma_b", options.ou.sigma_b},
                        {"mu", options.coupling.mu},
                        {"kappa_sq", options.coupling.kappa_sq},
                        {"tau", options.coupling.tau}};
  manifest["seed"] = options.seed;
  manifest["m"] = nullptr;
  manifest["n_steps"] = options.n_steps;
  manifest["tau"] = options.coupling.tau;
  manifest["schema_version"] = kSchemaVersion;
  manifest["version"] = std::string(version_string());

  switch (figure) {
    case Figure::kFig1: {
      auto [record, truth] =
          generate_record(options.ou, options.coupling, options.n_steps, options.seed);
      const EstimateSeries s = smooth_series(record, options.ou.stationary_variance(), options.ou,
                                             options.coupling);
      write_csv(files.csv, {"t", "b_true", "b_filter", "b_pqs"},
                {&s.times, &truth.b, &s.b_filter, &s.b_pqs});
      manifest["m"] = 1;
      break;
    }
    case Figure::kFig2: {
      EnsembleOptions eo;
      eo.threads = options.threads;
      const EnsembleReport r = run_ensemble(options.ou, options.coupling, options.n_steps,
                                            options.m, options.seed, eo);
      write_csv(files.csv, {"t", "mse_filter", "mse_pqs", "bayes_filter", "bayes_pqs"},
                {&r.times, &r.mse_filter, &r.mse_pqs, &r.bayes_var_filter, &r.bayes_var_pqs});
      manifest["m"] = options.m;
      manifest["steady"] = {{"begin_index", r.steady_begin},
                            {"mse_filter", r.mse_filter_steady},
                            {"mse_pqs", r.mse_pqs_steady},
                            {"bayes_filter", r.bayes_var_filter_steady},
                            {"bayes_pqs", r.bayes_var_pqs_steady}};
      break;
    }
    case Figure::kFig3a:
    case Figure::kFig3b: {
      const bool gamma_axis = figure == Figure::kFig3a;
      std::vector<double> values = options.sweep_values;
      if (values.empty()) {
        values = log_grid(1e1, 1e6, 4);
        if (!gamma_axis) values.insert(values.begin(), 0.0);
      }
      const auto rows = sweep_steady_variance(gamma_axis ? SweepAxis::kGammaB : SweepAxis::kKappaSq,
                                              values, options.ou, options.coupling);
      std::vector<double> x, vf, vp, conv;
      for (const SweepRow& row : rows) {
        x.push_back(row.value);
        vf.push_back(row.var_filter);
        vp.push_back(row.var_pqs);
        conv.push_back(row.converged ? 1.0 : 0.0);
      }
      write_csv(files.csv, {gamma_axis ? "gamma_b" : "kappa_sq", "var_filter", "var_pqs", "converged"},
                {&x, &vf, &vp, &conv});
      manifest["seed"] = nullptr;
      manifest["n_steps"] = nullptr;
      manifest["sigma_over_gamma"] = options.ou.sigma_b / options.ou.gamma_b;
      break;
    }
  }

  manifest["files"] = {std::filesystem::path(files.csv).filename().string()};
  std::FILE* f = std::fopen(files.manifest.c_str(), "w");
  if (!f) throw Error(ErrorCode::kIo, "cannot open '" + files.manifest + "' for writing");
  const std::string text = manifest.dump(2) + "\n";
  const bool ok = std::fputs(text.c_str(), f) >= 0;
  if (std::fclose(f) != 0 || !ok) throw Error(ErrorCode::kIo, "write to '" + files.manifest + "' failed");
  return files;
}

}  // namespace pqsmag
