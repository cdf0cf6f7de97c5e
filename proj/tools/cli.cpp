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


#include "cli.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pqsmag/csv.hpp"
#include "pqsmag/error.hpp"
#include "pqsmag/experiments.hpp"
#include "pqsmag/forward_filter.hpp"
#include "pqsmag/pqs_fusion.hpp"
#include "pqsmag/record_io.hpp"
#include "pqsmag/truth_simulator.hpp"
#include "pqsmag/version.hpp"

namespace pqsmag::cli {

namespace {

struct Key {
  const char* name;
  const char* help;
};

constexpr Key kKeys[] = {
    {"gamma_b", "field decay rate [1/s]"},
    {"sigma_b", "field diffusion [pT^2/s]"},
    {"mu", "field-to-spin coupling [1/(pT s)]"},
    {"kappa_sq", "probe coupling kappa^2 [1/s]"},
    {"tau", "time step [s]"},
    {"n_steps", "number of outcomes per record"},
    {"m", "ensemble size"},
    {"seed", "master seed"},
    {"v_b", "prior field variance [pT^2]; default stationary"},
    {"flat_fallback", "covariance scale standing in for a flat effect"},
    {"threads", "worker threads; 0 = all cores"},
    {"isa", "kernel variant: auto, scalar, avx2, neon"},
    {"axis", "sweep axis: gamma_b or kappa_sq"},
    {"values", "comma-separated sweep values"},
    {"record", "record file"},
    {"truth", "truth file"},
    {"out_dir", "output directory"},
};

const std::set<std::string> kCommands = {"simulate", "filter", "smooth",
                                         "ensemble", "sweep",  "figure"};

std::map<std::string, std::string> defaults() {
  const OuParams ou;
  const CouplingParams c;
  const char* env = std::getenv(kOutDirEnv);
  return {{"gamma_b", format_real(ou.gamma_b)},
          {"sigma_b", format_real(ou.sigma_b)},
          {"mu", format_real(c.mu)},
          {"kappa_sq", format_real(c.kappa_sq)},
          {"tau", format_real(c.tau)},
          {"n_steps", "20000"},
          {"m", "500"},
          {"seed", "1"},
          {"v_b", ""},
          {"flat_fallback", format_real(kDefaultFlatFallback)},
          {"threads", "0"},
          {"isa", "auto"},
          {"axis", "gamma_b"},
          {"values", ""},
          {"record", ""},
          {"truth", ""},
          {"out_dir", env && *env ? env : "."}};
}

std::string flag_of(const std::string& key) {
  std::string f = "--" + key;
  for (char& ch : f) {
    if (ch == '_') ch = '-';
  }
  return f;
}

[[noreturn]] void usage(const std::string& message) { throw Error(ErrorCode::kUsage, message); }

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) usage("config: cannot read '" + path + "'");
  const auto known = defaults();
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      usage("config: " + path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (!known.count(key)) usage("config: unknown key " + key);
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

double to_real(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    usage(key + " must be a number (got '" + text + "')");
  }
  return v;
}

std::uint64_t to_count(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (text.empty() || text[0] == '-' || end != text.c_str() + text.size() || errno == ERANGE) {
    usage(key + " must be a non-negative integer (got '" + text + "')");
  }
  return v;
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size() && !text.empty()) {
    const auto comma = text.find(',', start);
    const std::string item =
        trim(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    out.push_back(to_real(key, item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

void resolve(RunConfig& cfg) {
  const auto& r = cfg.resolved;
  cfg.ou.gamma_b = to_real("gamma_b", r.at("gamma_b"));
  cfg.ou.sigma_b = to_real("sigma_b", r.at("sigma_b"));
  cfg.coupling.mu = to_real("mu", r.at("mu"));
  cfg.coupling.kappa_sq = to_real("kappa_sq", r.at("kappa_sq"));
  cfg.coupling.tau = to_real("tau", r.at("tau"));
  try {
    cfg.ou.validate();
    cfg.coupling.validate();
  } catch (const Error& e) {
    usage(e.what());
  }
  cfg.n_steps = to_count("n_steps", r.at("n_steps"));
  if (cfg.n_steps < 1) usage("n_steps must be >= 1 (got 0)");
  cfg.m = to_count("m", r.at("m"));
  if (cfg.m < 2) usage("m must be >= 2 (got " + r.at("m") + ")");
  cfg.seed = to_count("seed", r.at("seed"));
  if (!r.at("v_b").empty()) {
    cfg.v_b = to_real("v_b", r.at("v_b"));
    if (!(*cfg.v_b >= 0.0)) usage("v_b must be >= 0 (got " + r.at("v_b") + ")");
  }
  cfg.flat_fallback = to_real("flat_fallback", r.at("flat_fallback"));
  if (!(cfg.flat_fallback > 0.0)) usage("flat_fallback must be > 0");
  cfg.threads = static_cast<unsigned>(to_count("threads", r.at("threads")));
  cfg.isa = r.at("isa");
  if (cfg.isa != "auto" && cfg.isa != "scalar" && cfg.isa != "avx2" && cfg.isa != "neon") {
    usage("isa must be auto, scalar, avx2 or neon (got '" + cfg.isa + "')");
  }
  cfg.axis = r.at("axis");
  if (cfg.axis != "gamma_b" && cfg.axis != "kappa_sq") {
    usage("axis must be gamma_b or kappa_sq (got '" + cfg.axis + "')");
  }
  cfg.values = to_list("values", r.at("values"));
  cfg.record = r.at("record");
  cfg.truth = r.at("truth");
  cfg.out_dir = r.at("out_dir");
  if (cfg.out_dir.empty()) usage("out_dir must not be empty");
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create '" + dir + "': " + ec.message());
}

void write_manifest(const RunConfig& cfg, const std::vector<std::string>& outputs,
                    const nlohmann::ordered_json& extra = nlohmann::ordered_json::object()) {
  nlohmann::ordered_json j;
  j["command"] = cfg.command;
  if (!cfg.figure.empty()) j["figure"] = cfg.figure;
  j["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : cfg.resolved) j["config"][k] = v;
  j["version"] = std::string(version_string());
  j["schema_version"] = kSchemaVersion;
  j["outputs"] = nlohmann::ordered_json::array();
  for (const auto& o : outputs) j["outputs"].push_back(std::filesystem::path(o).filename().string());
  for (const auto& [k, v] : extra.items()) j[k] = v;
  const std::string path = out_path(cfg, cfg.command + ".json");
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path + "' failed");
}

// Record parameters apply unless the config or a flag sets them.
void adopt_record_params(RunConfig& cfg, const MeasurementRecord& record) {
  auto take = [&](const char* key, double& field, double value) {
    if (cfg.explicit_keys.count(key)) return;
    field = value;
    cfg.resolved[key] = format_real(value);
  };
  take("gamma_b", cfg.ou.gamma_b, record.ou.gamma_b);
  take("sigma_b", cfg.ou.sigma_b, record.ou.sigma_b);
  take("mu", cfg.coupling.mu, record.coupling.mu);
  take("kappa_sq", cfg.coupling.kappa_sq, record.coupling.kappa_sq);
  take("tau", cfg.coupling.tau, record.tau);
}

MeasurementRecord load_record(const RunConfig& cfg) {
  if (cfg.record.empty()) usage(cfg.command + " needs --record");
  return read_record(cfg.record);
}

void warn_stability(const RunConfig& cfg) {
  for (const auto& w : stability_warnings(cfg.ou, cfg.coupling)) {
    std::cerr << "warning: " << w << '\n';
  }
}

int cmd_simulate(const RunConfig& cfg) {
  ensure_dir(cfg.out_dir);
  warn_stability(cfg);
  const auto [record, truth] = generate_record(cfg.ou, cfg.coupling, cfg.n_steps, cfg.seed);
  const std::string rec = cfg.record.empty() ? out_path(cfg, "record.txt") : cfg.record;
  const std::string tru = cfg.truth.empty() ? out_path(cfg, "truth.csv") : cfg.truth;
  write_record(rec, record);
  write_truth(tru, truth);
  write_manifest(cfg, {rec, tru}, {{"params_hash", record.params_hash}});
  return 0;
}

int cmd_estimate(RunConfig cfg, bool smooth) {
  const MeasurementRecord record = load_record(cfg);
  adopt_record_params(cfg, record);
  ensure_dir(cfg.out_dir);
  warn_stability(cfg);
  const double v_b = cfg.v_b.value_or(cfg.ou.stationary_variance());
  EstimateSeries series;
  if (smooth) {
    BackwardOptions bo;
    bo.flat_fallback = cfg.flat_fallback;
    series = smooth_series(record, v_b, cfg.ou, cfg.coupling, bo);
  } else {
    series = run_filter(record, v_b, cfg.ou, cfg.coupling);
  }
  if (!cfg.truth.empty()) {
    const TruthTrajectory truth = read_truth(cfg.truth);
    if (truth.size() != series.size()) {
      throw Error(ErrorCode::kMismatchedRecord,
                  "truth has " + std::to_string(truth.size()) + " rows, series has " +
                      std::to_string(series.size()));
    }
    series.b_true = truth.b;
  }
  const std::string csv = out_path(cfg, cfg.command + ".csv");
  write_series_csv(csv, series);
  write_manifest(cfg, {csv}, {{"record_seed", record.seed}, {"params_hash", record.params_hash}});
  return 0;
}

int cmd_ensemble(const RunConfig& cfg) {
  ensure_dir(cfg.out_dir);
  warn_stability(cfg);
  EnsembleOptions eo;
  eo.threads = cfg.threads;
  eo.v_b = cfg.v_b;
  eo.flat_fallback = cfg.flat_fallback;
  if (cfg.isa == "scalar") eo.isa = kernels::Isa::kScalar;
  if (cfg.isa == "avx2") eo.isa = kernels::Isa::kAvx2;
  if (cfg.isa == "neon") eo.isa = kernels::Isa::kNeon;
  const EnsembleReport r = run_ensemble(cfg.ou, cfg.coupling, cfg.n_steps, cfg.m, cfg.seed, eo);
  const std::string csv = out_path(cfg, "ensemble.csv");
  write_csv(csv,
            {"t", "mse_filter", "mse_pqs", "bayes_var_filter", "bayes_var_pqs", "coverage_filter"},
            {&r.times, &r.mse_filter, &r.mse_pqs, &r.bayes_var_filter, &r.bayes_var_pqs,
             &r.coverage_filter});
  write_manifest(cfg, {csv},
                 {{"steady",
                   {{"begin_index", r.steady_begin},
                    {"mse_filter", r.mse_filter_steady},
                    {"mse_pqs", r.mse_pqs_steady},
                    {"bayes_var_filter", r.bayes_var_filter_steady},
                    {"bayes_var_pqs", r.bayes_var_pqs_steady},
                    {"coverage_filter", r.coverage_filter_steady}}}});
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  ensure_dir(cfg.out_dir);
  const bool gamma_axis = cfg.axis == "gamma_b";
  std::vector<double> values = cfg.values;
  if (values.empty()) {
    values = log_grid(1e1, 1e6, 4);
    if (!gamma_axis) values.insert(values.begin(), 0.0);
  }
  const auto rows = sweep_steady_variance(gamma_axis ? SweepAxis::kGammaB : SweepAxis::kKappaSq,
                                          values, cfg.ou, cfg.coupling);
  std::vector<std::vector<double>> cols(9);
  std::size_t unconverged = 0;
  for (const SweepRow& row : rows) {
    const double fields[] = {row.value,      row.gamma_b, row.sigma_b,
                             row.kappa_sq,   row.tau,     row.var_filter,
                             row.var_pqs,    row.converged ? 1.0 : 0.0,
                             static_cast<double>(row.iterations)};
    for (std::size_t i = 0; i < cols.size(); ++i) cols[i].push_back(fields[i]);
    if (!row.converged) ++unconverged;
  }
  std::vector<const std::vector<double>*> ptrs;
  for (const auto& c : cols) ptrs.push_back(&c);
  const std::string csv = out_path(cfg, "sweep.csv");
  write_csv(csv,
            {"value", "gamma_b", "sigma_b", "kappa_sq", "tau", "var_filter", "var_pqs",
             "converged", "iterations"},
            ptrs);
  write_manifest(cfg, {csv}, {{"unconverged_rows", unconverged}});
  if (unconverged) std::cerr << "warning: " << unconverged << " sweep rows did not converge\n";
  return 0;
}

int cmd_figure(const RunConfig& cfg) {
  FigureOptions fo;
  fo.ou = cfg.ou;
  fo.coupling = cfg.coupling;
  fo.n_steps = cfg.n_steps;
  fo.m = cfg.m;
  fo.seed = cfg.seed;
  fo.threads = cfg.threads;
  fo.sweep_values = cfg.values;
  reproduce_figure(parse_figure(cfg.figure), cfg.out_dir, fo);
  return 0;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch == '\n' ? ' ' : ch;
  }
  return out;
}

void print_error(int code, std::string_view name, const std::string& message) {
  std::cerr << "error code=" << code << " name=" << name << " message=\"" << escape(message)
            << "\"\n";
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& args,
                       const std::optional<std::string>& config_file) {
  CLI::App app{"Field tracking by filtering and past quantum state smoothing", "pqsmag"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::map<std::string, std::string> flag_values;
  std::map<std::string, CLI::Option*> flag_opts;
  for (const Key& k : kKeys) {
    flag_opts[k.name] = app.add_option(flag_of(k.name), flag_values[k.name], k.help);
  }
  std::string config_path = config_file.value_or("");
  app.add_option("--config", config_path, "key=value configuration file");

  RunConfig cfg;
  std::map<std::string, CLI::App*> subs;
  for (const std::string& c : kCommands) subs[c] = app.add_subcommand(c);
  subs["simulate"]->description("simulate a record and its hidden truth");
  subs["filter"]->description("filter estimates of a record");
  subs["smooth"]->description("filter and smoothed estimates of a record");
  subs["ensemble"]->description("MSE and Bayesian variance over simulated records");
  subs["sweep"]->description("steady-state variances along gamma_b or kappa_sq");
  subs["figure"]->description("data files of fig1, fig2, fig3a or fig3b");
  subs["figure"]->add_option("name", cfg.figure, "fig1, fig2, fig3a or fig3b")->required();

  std::vector<const char*> argv{"pqsmag"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    cfg.help = true;
    cfg.help_text = app.help();
    return cfg;
  } catch (const CLI::ParseError& e) {
    usage(e.what());
  }
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) cfg.command = name;
  }
  if (cfg.command.empty()) usage("missing command (simulate, filter, smooth, ensemble, sweep, figure)");

  cfg.resolved = defaults();
  if (!config_path.empty()) {
    for (const auto& [k, v] : read_config_file(config_path)) {
      cfg.resolved[k] = v;
      cfg.explicit_keys.insert(k);
    }
  }
  for (const auto& [k, opt] : flag_opts) {
    if (opt->count() > 0) {
      cfg.resolved[k] = flag_values[k];
      cfg.explicit_keys.insert(k);
    }
  }
  resolve(cfg);
  if (cfg.command == "figure") parse_figure(cfg.figure);
  return cfg;
}

int dispatch(const RunConfig& config) {
  if (config.command == "simulate") return cmd_simulate(config);
  if (config.command == "filter") return cmd_estimate(config, false);
  if (config.command == "smooth") return cmd_estimate(config, true);
  if (config.command == "ensemble") return cmd_ensemble(config);
  if (config.command == "sweep") return cmd_sweep(config);
  if (config.command == "figure") return cmd_figure(config);
  usage("unknown command '" + config.command + "'");
}

int run(const std::vector<std::string>& args) {
  try {
    const RunConfig cfg = parse_config(args);
    if (cfg.help) {
      std::cout << cfg.help_text;
      return 0;
    }
    return dispatch(cfg);
  } catch (const Error& e) {
    print_error(static_cast<int>(e.code()), error_name(e.code()), e.what());
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    print_error(1, "InternalError", e.what());
    return 1;
  }
}

}  // namespace pqsmag::cli
