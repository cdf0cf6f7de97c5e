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

#include "pqsmag/truth_simulator.hpp"

#include <cmath>
#include <string>

#include "pqsmag/error.hpp"

namespace pqsmag {

double ou_step(double b, const OuParams& ou, const CouplingParams& coupling, double dw) {
  return b + (-ou.gamma_b * b * coupling.tau) + std::sqrt(ou.sigma_b) * dw;
}

OutcomeLaw outcome_law(const AtomTruth& atoms, const CouplingParams& coupling) {
  const double k = coupling.kappa_sqrt_tau();
  return {k * atoms.p_mean, 0.5 * (1.0 + k * k * atoms.t_pp)};
}

AtomTruth advance_atoms(const AtomTruth& atoms, double b, double x_ms,
                        const CouplingParams& coupling) {
  const double k = coupling.kappa_sqrt_tau();
  const double b11 = 1.0 + k * k * atoms.t_pp;
  const double cx = k * atoms.t_xp;
  const double cp = k * atoms.t_pp;
  const double innovation = x_ms - k * atoms.p_mean;

  AtomTruth next;
  next.x_mean = atoms.x_mean + cx * innovation / b11;
  next.p_mean = atoms.p_mean + cp * innovation / b11 - coupling.mu * coupling.tau * b;
  next.t_xx = atoms.t_xx + k * k - cx * cx / b11;
  next.t_xp = atoms.t_xp - cx * cp / b11;
  next.t_pp = atoms.t_pp - cp * cp / b11;
  return next;
}

TruthSimulator::TruthSimulator(const OuParams& ou, const CouplingParams& coupling,
                               std::uint64_t seed)
    : ou_(ou), coupling_(coupling), rng_(seed) {
  b_ = std::sqrt(ou_.stationary_variance()) * normal_(rng_);
}

double TruthSimulator::step() {
  const OutcomeLaw law = outcome_law(atoms_, coupling_);
  const double x_ms = law.mean + std::sqrt(law.variance) * normal_(rng_);
  const double dw = std::sqrt(coupling_.tau) * normal_(rng_);
  atoms_ = advance_atoms(atoms_, b_, x_ms, coupling_);
  b_ = ou_step(b_, ou_, coupling_, dw);
  return x_ms;
}

namespace {

void push_row(TruthTrajectory& truth, double b, const AtomTruth& a) {
  truth.b.push_back(b);
  truth.x_mean.push_back(a.x_mean);
  truth.p_mean.push_back(a.p_mean);
  truth.t_xx.push_back(a.t_xx);
  truth.t_xp.push_back(a.t_xp);
  truth.t_pp.push_back(a.t_pp);
}

bool same_row(const TruthTrajectory& truth, std::size_t k, const AtomTruth& a) {
  return truth.x_mean[k] == a.x_mean && truth.p_mean[k] == a.p_mean && truth.t_xx[k] == a.t_xx &&
         truth.t_xp[k] == a.t_xp && truth.t_pp[k] == a.t_pp;
}

}  // namespace

std::pair<MeasurementRecord, TruthTrajectory> generate_record(const OuParams& ou,
                                                              const CouplingParams& coupling,
                                                              std::size_t n_steps,
                                                              std::uint64_t seed) {
  ou.validate();
  coupling.validate();
  if (n_steps < 1) throw Error(ErrorCode::kInvalidParams, "n_steps must be >= 1 (got 0)");

  MeasurementRecord record;
  record.tau = coupling.tau;
  record.seed = seed;
  record.ou = ou;
  record.coupling = coupling;
  record.params_hash = params_digest(ou, coupling);
  record.outcomes.reserve(n_steps);

  TruthTrajectory truth;
  TruthSimulator sim(ou, coupling, seed);
  push_row(truth, sim.b(), sim.atoms());
  for (std::size_t k = 0; k < n_steps; ++k) {
    record.outcomes.push_back(sim.step());
    push_row(truth, sim.b(), sim.atoms());
  }
  return {std::move(record), std::move(truth)};
}

void replay_check(const MeasurementRecord& record, const TruthTrajectory& truth,
                  const OuParams& ou, const CouplingParams& coupling) {
  ou.validate();
  coupling.validate();
  const std::size_t n = record.size();
  if (truth.size() != n + 1 || truth.x_mean.size() != n + 1 || truth.p_mean.size() != n + 1 ||
      truth.t_xx.size() != n + 1 || truth.t_xp.size() != n + 1 || truth.t_pp.size() != n + 1) {
    throw Error(ErrorCode::kMismatchedRecord,
                "replay_check: truth has " + std::to_string(truth.size()) + " rows, expected " +
                    std::to_string(n + 1));
  }
  AtomTruth atoms;
  if (!same_row(truth, 0, atoms)) {
    throw Error(ErrorCode::kMismatchedRecord, "replay_check: initial atomic state differs");
  }
  for (std::size_t k = 0; k < n; ++k) {
    atoms = advance_atoms(atoms, truth.b[k], record.outcomes[k], coupling);
    if (!same_row(truth, k + 1, atoms)) {
      throw Error(ErrorCode::kMismatchedRecord,
                  "replay_check: mismatch at outcome index " + std::to_string(k));
    }
  }
}

}  // namespace pqsmag
