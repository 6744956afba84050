// Copyright 2026 The quest Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "quest/csv.hpp"

#include "quest/value.hpp"

namespace quest {

bool CsvReader::next(CsvRow& row) {
    row.clear();
    int c = in_.get();
    if (c == EOF) return false;
    record_line_ = line_;
    std::string field;
    bool quoted = false;
    bool in_quotes = false;
    auto finish_field = [&] {
        if (field.empty() && !quoted) row.emplace_back(std::nullopt);
        else row.emplace_back(std::move(field));
        field.clear();
        quoted = false;
    };
    for (;; c = in_.get()) {
        if (in_quotes) {
            if (c == EOF) throw DataError("unterminated quoted field starting on line " + std::to_string(record_line_));
            if (c == '"') {
                if (in_.peek() == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line_;
                field.push_back(static_cast<char>(c));
            }
            continue;
        }
        if (c == EOF || c == '\n') {
            if (c == '\n') ++line_;
            finish_field();
            return true;
        }
        if (c == '\r') {
            if (in_.peek() == '\n') continue;
            field.push_back('\r');
        } else if (c == ',') {
            finish_field();
        } else if (c == '"' && field.empty() && !quoted) {
            quoted = true;
            in_quotes = true;
        } else {
            field.push_back(static_cast<char>(c));
        }
    }
}

std::string csv_field(const std::optional<std::string>& field) {
    if (!field) return {};
    const auto& s = *field;
    bool needs = s.empty() || s.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += "\"\"";
        else out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

void write_csv_row(std::ostream& out, const CsvRow& row) {
    for (size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        out << csv_field(row[i]);
    }
    out << '\n';
}

}  // namespace quest
