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


#include "pqsmag/record_io.hpp"

#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "pqsmag/error.hpp"

namespace pqsmag {

namespace {

double parse_real(const std::string& text, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw Error(ErrorCode::kIo, where + ": cannot parse '" + text + "' as a number");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& text, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw Error(ErrorCode::kIo, where + ": cannot parse '" + text + "' as an integer");
  }
  return v;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string params_digest(const OuParams& ou, const CouplingParams& coupling) {
  const std::string text = format_real(ou.gamma_b) + "," + format_real(ou.sigma_b) + "," +
                           format_real(coupling.mu) + "," + format_real(coupling.kappa_sq) + "," +
                           format_real(coupling.tau);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_record(const std::string& path, const MeasurementRecord& record) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out << "schema_version=" << kSchemaVersion << '\n'
      << "tau=" << format_real(record.tau) << '\n'
      << "seed=" << record.seed << '\n'
      << "n_steps=" << record.size() << '\n'
      << "gamma_b=" << format_real(record.ou.gamma_b) << '\n'
      << "sigma_b=" << format_real(record.ou.sigma_b) << '\n'
      << "mu=" << format_real(record.coupling.mu) << '\n'
      << "kappa_sq=" << format_real(record.coupling.kappa_sq) << '\n'
      << "params_hash=" << record.params_hash << '\n';
  for (double x : record.outcomes) out << format_real(x) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path + "' failed");
}

MeasurementRecord read_record(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for reading");

  std::map<std::string, std::string> header;
  MeasurementRecord record;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const std::string where = path + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq != std::string::npos) {
      if (!record.outcomes.empty()) throw Error(ErrorCode::kIo, where + ": header after outcomes");
      header[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    } else {
      record.outcomes.push_back(parse_real(line, where));
    }
  }
  if (record.outcomes.empty()) {
    throw Error(ErrorCode::kEmptyRecord, "'" + path + "' holds no outcomes");
  }

  auto need = [&](const char* key) -> const std::string& {
    const auto it = header.find(key);
    if (it == header.end()) {
      throw Error(ErrorCode::kIo, "'" + path + "': missing header key " + key);
    }
    return it->second;
  };
  const std::string where = path + " header";
  if (parse_u64(need("schema_version"), where) != kSchemaVersion) {
    throw Error(ErrorCode::kIo, "'" + path + "': unsupported schema_version");
  }
  record.tau = parse_real(need("tau"), where);
  record.seed = parse_u64(need("seed"), where);
  record.ou.gamma_b = parse_real(need("gamma_b"), where);
  record.ou.sigma_b = parse_real(need("sigma_b"), where);
  record.coupling.mu = parse_real(need("mu"), where);
  record.coupling.kappa_sq = parse_real(need("kappa_sq"), where);
  record.coupling.tau = record.tau;
  if (parse_u64(need("n_steps"), where) != record.size()) {
    throw Error(ErrorCode::kIo, "'" + path + "': n_steps does not match the outcome count");
  }
  const auto hash = header.find("params_hash");
  record.params_hash =
      hash != header.end() ? hash->second : params_digest(record.ou, record.coupling);
  return record;
}

void write_truth(const std::string& path, const TruthTrajectory& truth) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out << "b,x_mean,p_mean,t_xx,t_xp,t_pp\n";
  for (std::size_t k = 0; k < truth.size(); ++k) {
    out << format_real(truth.b[k]) << ',' << format_real(truth.x_mean[k]) << ','
        << format_real(truth.p_mean[k]) << ',' << format_real(truth.t_xx[k]) << ','
        << format_real(truth.t_xp[k]) << ',' << format_real(truth.t_pp[k]) << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path + "' failed");
}

TruthTrajectory read_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line) || trim(line) != "b,x_mean,p_mean,t_xx,t_xp,t_pp") {
    throw Error(ErrorCode::kIo, "'" + path + "': unexpected truth header");
  }
  TruthTrajectory truth;
  std::vector<double>* cols[] = {&truth.b,    &truth.x_mean, &truth.p_mean,
                                 &truth.t_xx, &truth.t_xp,   &truth.t_pp};
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    std::stringstream ss(line);
    std::string field;
    int c = 0;
    while (std::getline(ss, field, ',')) {
      if (c == 6) throw Error(ErrorCode::kIo, where + ": too many columns");
      cols[c++]->push_back(parse_real(trim(field), where));
    }
    if (c != 6) throw Error(ErrorCode::kIo, where + ": expected 6 columns");
  }
  return truth;
}

}  // namespace pqsmag
