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

#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace quest {

/// An unquoted empty field reads as nullopt; a quoted "" is an empty string.
using CsvRow = std::vector<std::optional<std::string>>;

/// RFC-4180 reader: quoted fields, doubled quotes, embedded newlines, CRLF.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    /// Reads the next record; false at end of input.
    bool next(CsvRow& row);
    /// 1-based line on which the last returned record started.
    uint64_t line() const { return record_line_; }

private:
    std::istream& in_;
    uint64_t line_ = 1;
    uint64_t record_line_ = 0;
};

void write_csv_row(std::ostream& out, const CsvRow& row);
std::string csv_field(const std::optional<std::string>& field);

}  // namespace quest
