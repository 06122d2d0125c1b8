// Copyright 2026 The qst authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qst/design.hpp"
#include "qst/herm.hpp"
#include "qst/measurement.hpp"

namespace qst {

using Json = nlohmann::json;

/// Dense self-adjoint matrix as a row-major array; re/im interleaved for the
/// complex field, plain reals otherwise.
Json herm_to_json(const HermMat& m);
HermMat herm_from_json(const Json& j, FieldTag field, int q);

/// Design files: schema qst-design-v1 with per-observable dense matrices.
Json design_to_json(const Design& d);
Design design_from_json(const Json& j);
void save_design(const Design& d, const std::filesystem::path& path);
Design load_design(const std::filesystem::path& path);

/// Counts files: schema qst-counts-v1; shots == 0 marks exact probabilities.
Json counts_to_json(const CountsTable& counts);
CountsTable counts_from_json(const Json& j);
void save_counts(const CountsTable& counts, const std::filesystem::path& path);
CountsTable load_counts(const std::filesystem::path& path);

Json load_json(const std::filesystem::path& path);
void save_json(const Json& j, const std::filesystem::path& path);

/// CSV emitter with a schema-version header row; numbers are printed with
/// round-trip precision so identical runs produce byte-identical files.
class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::string& schema,
              const std::vector<std::string>& columns);

    void row(const std::vector<std::string>& cells);
    void row(const std::vector<double>& cells);

    static std::string format(double v);

  private:
    std::ofstream out_;
    std::size_t width_;
};

}  // namespace qst
