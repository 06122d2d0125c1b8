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

#include "qst/io.hpp"

#include <cstdio>

namespace qst {

namespace {
constexpr const char* kDesignSchema = "qst-design-v1";
constexpr const char* kCountsSchema = "qst-counts-v1";
}  // namespace

Json herm_to_json(const HermMat& m) {
    const int q = m.dim();
    Json arr = Json::array();
    for (int i = 0; i < q; ++i) {
        for (int j = 0; j < q; ++j) {
            arr.push_back(m.mat()(i, j).real());
            if (m.field() == FieldTag::Complex) arr.push_back(m.mat()(i, j).imag());
        }
    }
    return arr;
}

HermMat herm_from_json(const Json& j, FieldTag field, int q) {
    const int stride = field == FieldTag::Complex ? 2 : 1;
    if (!j.is_array() || static_cast<int>(j.size()) != q * q * stride) {
        throw ConfigError("matrix array has the wrong length");
    }
    Matrix m(q, q);
    int idx = 0;
    for (int r = 0; r < q; ++r) {
        for (int c = 0; c < q; ++c) {
            const double re = j.at(idx++).get<double>();
            const double im = field == FieldTag::Complex ? j.at(idx++).get<double>() : 0.0;
            m(r, c) = Complex(re, im);
        }
    }
    return HermMat(field, std::move(m));
}

Json design_to_json(const Design& d) {
    Json j;
    j["schema"] = kDesignSchema;
    j["field"] = field_name(d.field());
    j["q"] = d.q();
    Json obs = Json::array();
    for (int i = 0; i < d.size(); ++i) {
        Json o;
        o["matrix"] = herm_to_json(HermMat(d.field(), d.observable(i).to_matrix()));
        obs.push_back(std::move(o));
    }
    j["observables"] = std::move(obs);
    return j;
}

Design design_from_json(const Json& j) {
    if (j.value("schema", "") != kDesignSchema) {
        throw ConfigError("design file: unknown schema (expected qst-design-v1)");
    }
    const FieldTag field = field_from_name(j.at("field").get<std::string>());
    const int q = j.at("q").get<int>();
    std::vector<SpectralDecomp> obs;
    for (const Json& o : j.at("observables")) {
        obs.push_back(spectral(herm_from_json(o.at("matrix"), field, q)));
    }
    return Design(field, q, std::move(obs));
}

void save_design(const Design& d, const std::filesystem::path& path) {
    save_json(design_to_json(d), path);
}

Design load_design(const std::filesystem::path& path) { return design_from_json(load_json(path)); }

Json counts_to_json(const CountsTable& counts) {
    Json j;
    j["schema"] = kCountsSchema;
    j["shots"] = counts.shots;
    Json rows = Json::array();
    for (const CountsTable::Row& row : counts.rows) {
        Json r = Json::array();
        if (counts.exact()) {
            for (int k = 0; k < row.probs.size(); ++k) r.push_back(row.probs(k));
        } else {
            for (std::int64_t c : row.counts) r.push_back(c);
        }
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j;
}

CountsTable counts_from_json(const Json& j) {
    if (j.value("schema", "") != kCountsSchema) {
        throw ConfigError("counts file: unknown schema (expected qst-counts-v1)");
    }
    CountsTable table;
    table.shots = j.at("shots").get<std::int64_t>();
    if (table.shots < 0) throw ConfigError("counts file: shots must be >= 0");
    for (const Json& r : j.at("rows")) {
        CountsTable::Row row;
        const int l = static_cast<int>(r.size());
        row.probs = RealVector(l);
        if (table.exact()) {
            for (int k = 0; k < l; ++k) row.probs(k) = r.at(k).get<double>();
            if (std::abs(row.probs.sum() - 1.0) > 1e-9 || row.probs.minCoeff() < 0.0) {
                throw ConfigError("counts file: exact probabilities must form a distribution");
            }
        } else {
            std::int64_t total = 0;
            for (int k = 0; k < l; ++k) {
                const std::int64_t c = r.at(k).get<std::int64_t>();
                if (c < 0) throw ConfigError("counts file: negative count");
                row.counts.push_back(c);
                total += c;
            }
            if (total != table.shots) {
                throw ConfigError("counts file: row total does not match shots");
            }
            for (int k = 0; k < l; ++k) {
                row.probs(k) = static_cast<double>(row.counts[k]) / table.shots;
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

void save_counts(const CountsTable& counts, const std::filesystem::path& path) {
    save_json(counts_to_json(counts), path);
}

CountsTable load_counts(const std::filesystem::path& path) {
    return counts_from_json(load_json(path));
}

Json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    Json j;
    in >> j;
    return j;
}

void save_json(const Json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::string& schema,
                     const std::vector<std::string>& columns)
    : out_(path), width_(columns.size()) {
    if (!out_) throw ConfigError("cannot write " + path.string());
    out_ << "schema," << schema << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    }
}

std::string CsvWriter::format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw ShapeError("CsvWriter: cell count mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
    }
}

void CsvWriter::row(const std::vector<double>& cells) {
    std::vector<std::string> text;
    text.reserve(cells.size());
    for (double v : cells) text.push_back(format(v));
    row(text);
}

}  // namespace qst
