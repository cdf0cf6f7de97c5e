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


// Regression against the archived steady-state sweep tables.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "pqsmag/experiments.hpp"

namespace pqsmag {
namespace {

struct BaselineRow {
  double value, var_filter, var_pqs;
};

std::vector<BaselineRow> load(const std::string& name) {
  std::ifstream in(std::string(PQSMAG_TEST_DATA_DIR) + "/" + name);
  std::string line;
  std::getline(in, line);
  std::vector<BaselineRow> rows;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    double v[4];
    for (double& x : v) {
      std::getline(ss, cell, ',');
      x = std::stod(cell);
    }
    rows.push_back({v[0], v[1], v[2]});
  }
  return rows;
}

void check_axis(SweepAxis axis, const char* file) {
  const auto base = load(file);
  ASSERT_FALSE(base.empty()) << file;
  std::vector<double> values;
  for (const auto& r : base) values.push_back(r.value);
  const auto rows = sweep_steady_variance(axis, values, OuParams{}, CouplingParams{});
  ASSERT_EQ(rows.size(), base.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_TRUE(rows[i].converged) << i;
    EXPECT_NEAR(rows[i].var_filter / base[i].var_filter, 1.0, 1e-9) << file << " row " << i;
    EXPECT_NEAR(rows[i].var_pqs / base[i].var_pqs, 1.0, 1e-9) << file << " row " << i;
  }
}

TEST(SweepBaseline, GammaAxis) { check_axis(SweepAxis::kGammaB, "fig3a_baseline.csv"); }

TEST(SweepBaseline, KappaAxis) { check_axis(SweepAxis::kKappaSq, "fig3b_baseline.csv"); }

}  // namespace
}  // namespace pqsmag
