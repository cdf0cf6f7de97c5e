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


#include "pqsmag/csv.hpp"

#include <cstdio>
#include <memory>

#include "pqsmag/error.hpp"

namespace pqsmag {

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<const std::vector<double>*>& columns) {
  if (header.size() != columns.size() || columns.empty()) {
    throw Error(ErrorCode::kInvalidParams, "write_csv: header and column counts differ");
  }
  const std::size_t rows = columns.front()->size();
  for (const auto* c : columns) {
    if (c->size() != rows) throw Error(ErrorCode::kInvalidParams, "write_csv: ragged columns");
  }
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> f(std::fopen(path.c_str(), "w"), &std::fclose);
  if (!f) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  for (std::size_t j = 0; j < header.size(); ++j) {
    std::fputs(header[j].c_str(), f.get());
    std::fputc(j + 1 < header.size() ? ',' : '\n', f.get());
  }
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      std::fprintf(f.get(), "%.17g", (*columns[j])[i]);
      std::fputc(j + 1 < columns.size() ? ',' : '\n', f.get());
    }
  }
  if (std::ferror(f.get())) throw Error(ErrorCode::kIo, "write to '" + path + "' failed");
}

void write_series_csv(const std::string& path, const EstimateSeries& series) {
  std::vector<std::string> header{"t"};
  std::vector<const std::vector<double>*> cols{&series.times};
  if (series.has_truth()) {
    header.push_back("b_true");
    cols.push_back(&series.b_true);
  }
  header.insert(header.end(), {"b_filter", "var_filter"});
  cols.insert(cols.end(), {&series.b_filter, &series.var_filter});
  if (series.has_pqs()) {
    header.insert(header.end(), {"b_pqs", "var_pqs", "var_naive_scalar"});
    cols.insert(cols.end(), {&series.b_pqs, &series.var_pqs, &series.var_naive_scalar});
  }
  write_csv(path, header, cols);
}

}  // namespace pqsmag
