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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pqsmag/backward_effect.hpp"
#include "pqsmag/params.hpp"

namespace pqsmag::cli {

/// Fully resolved run configuration.
struct RunConfig {
  std::string command;  ///< simulate, filter, smooth, ensemble, sweep, figure
  std::string figure;   ///< figure name for `figure`

  OuParams ou;
  CouplingParams coupling;
  std::size_t n_steps = 20000;
  std::size_t m = 500;
  std::uint64_t seed = 1;
  std::optional<double> v_b;  ///< default: stationary variance
  double flat_fallback = kDefaultFlatFallback;
  unsigned threads = 0;
  std::string isa = "auto";
  std::string axis = "gamma_b";
  std::vector<double> values;  ///< sweep values; empty: default grid
  std::string record;          ///< record file (input of filter/smooth)
  std::string truth;           ///< truth file (optional input of smooth)
  std::string out_dir = ".";

  /// Keys set by the config file or a flag, as opposed to defaults.
  std::set<std::string> explicit_keys;
  /// Every key with its resolved textual value.
  std::map<std::string, std::string> resolved;

  bool help = false;
  std::string help_text;
};

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "PQSMAG_OUT_DIR";

/// Parses `args` (without the program name). Values come from flags, then
/// from the key=value file named by --config (or `config_file`), then from
/// defaults. Throws Error(kUsage) naming the offending key.
RunConfig parse_config(const std::vector<std::string>& args,
                       const std::optional<std::string>& config_file = std::nullopt);

/// Runs the command. Returns 0 on success; module errors propagate as
/// pqsmag::Error.
int dispatch(const RunConfig& config);

/// parse_config + dispatch; prints one line
///   error code=<n> name=<Name> message="<text>"
/// to stderr on failure and returns the code.
int run(const std::vector<std::string>& args);

}  // namespace pqsmag::cli
