// Copyright 2026 The cliffproxy Authors
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

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cliffproxy/circuit.hpp"
#include "cliffproxy/errors.hpp"

namespace cliffproxy::bench {

using CsvRow = std::vector<std::string>;

struct CsvTable {
    CsvRow header;
    std::vector<CsvRow> rows;
};

inline std::string csv_escape(const std::string &s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

inline std::string csv_line(const CsvRow &row) {
    std::string s;
    for (size_t i = 0; i < row.size(); i++) {
        if (i) s += ',';
        s += csv_escape(row[i]);
    }
    return s + "\n";
}

inline std::string to_csv(const CsvTable &t) {
    std::string s = csv_line(t.header);
    for (const auto &r : t.rows) s += csv_line(r);
    return s;
}

inline CsvTable parse_csv(const std::string &text) {
    CsvTable t;
    std::vector<CsvRow> rows;
    CsvRow row;
    std::string field;
    bool quoted = false, any = false;
    for (size_t i = 0; i < text.size(); i++) {
        char ch = text[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    i++;
                } else {
                    quoted = false;
                }
            } else {
                field += ch;
            }
            continue;
        }
        if (ch == '"') {
            quoted = true;
            any = true;
        } else if (ch == ',') {
            row.push_back(field);
            field.clear();
            any = true;
        } else if (ch == '\n' || ch == '\r') {
            if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') i++;
            if (any || !field.empty()) {
                row.push_back(field);
                rows.push_back(row);
            }
            row.clear();
            field.clear();
            any = false;
        } else {
            field += ch;
            any = true;
        }
    }
    if (quoted) throw Error("unterminated quoted CSV field");
    if (any || !field.empty()) {
        row.push_back(field);
        rows.push_back(row);
    }
    if (rows.empty()) throw Error("CSV input is empty");
    t.header = rows.front();
    t.rows.assign(rows.begin() + 1, rows.end());
    for (const auto &r : t.rows) {
        if (r.size() != t.header.size()) throw Error("CSV row has " + std::to_string(r.size()) + " fields, expected " +
                                                     std::to_string(t.header.size()));
    }
    return t;
}

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes via a temporary file and rename so readers never see a partial file.
inline void write_file_atomic(const std::string &path, const std::string &content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp);
        out << content;
        if (!out) throw Error("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw Error("cannot move " + tmp + " to " + path);
}

inline const CsvRow &results_header() {
    static const CsvRow h{"experiment_id", "protocol", "n",     "depth", "randomization_id",
                          "pauli",         "estimate", "stderr", "shots", "seed"};
    return h;
}

struct ResultRow {
    std::string experiment_id;
    std::string protocol;
    size_t n = 0;
    size_t depth = 0;
    size_t randomization_id = 0;
    std::string pauli;
    double estimate = 0;
    double std_error = 0;
    size_t shots = 0;
    uint64_t seed = 0;

    CsvRow to_csv() const {
        return {experiment_id,  protocol,          std::to_string(n),       std::to_string(depth),
                std::to_string(randomization_id), pauli, exact_decimal(estimate), exact_decimal(std_error),
                std::to_string(shots),            std::to_string(seed)};
    }
};

/// Column layouts of the figure summary tables.
enum class FigureKind { Hist, Bars, Scatter };

inline FigureKind figure_kind_from_name(const std::string &s) {
    if (s == "hist") return FigureKind::Hist;
    if (s == "bars") return FigureKind::Bars;
    if (s == "scatter") return FigureKind::Scatter;
    throw Error("unknown figure kind '" + s + "' (expected hist, bars or scatter)");
}

inline const CsvRow &summary_header(FigureKind k) {
    static const CsvRow hist{"group", "value"};
    static const CsvRow bars{"group", "series", "value", "stderr"};
    static const CsvRow scatter{"group", "x", "y"};
    switch (k) {
        case FigureKind::Hist: return hist;
        case FigureKind::Bars: return bars;
        case FigureKind::Scatter: return scatter;
    }
    return hist;
}

}  // namespace cliffproxy::bench
