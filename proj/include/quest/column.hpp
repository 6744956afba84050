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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "quest/bitset.hpp"
#include "quest/relation.hpp"
#include "quest/value.hpp"

namespace quest {

enum class ColumnKind : uint8_t { Counter = 1, Indicator = 2, Number = 3, String = 4, Bool = 5, Relation = 6 };

constexpr uint16_t kFormatVersion = 1;

/// Values of one Primitive (or repeated primitive) node. Nulls are tracked in
/// a validity bitmap; the slot of a null value holds a zero/empty filler.
class PrimitiveColumn {
public:
    PrimitiveColumn() = default;
    explicit PrimitiveColumn(PrimitiveKind kind) : kind_(kind) {}

    PrimitiveKind kind() const { return kind_; }
    uint64_t size() const { return size_; }

    void append(const Value& v);
    void append_null();

    bool is_null(uint64_t i) const { return !valid_[i]; }
    double number(uint64_t i) const { return numbers_[i]; }
    bool boolean(uint64_t i) const { return bools_[i] != 0; }
    std::string_view string(uint64_t i) const {
        uint64_t lo = i == 0 ? 0 : str_ends_[i - 1];
        return std::string_view(blob_).substr(lo, str_ends_[i] - lo);
    }
    Value get(uint64_t i) const;

    /// Mean payload bytes per unit (S_v): 8 for numbers, 1 for booleans,
    /// 8 plus the mean length for strings.
    double avg_unit_size() const;

    const std::vector<bool>& validity() const { return valid_; }

    std::string encode() const;
    static PrimitiveColumn decode(ColumnKind kind, uint64_t cardinality, std::string_view payload);

    friend bool operator==(const PrimitiveColumn&, const PrimitiveColumn&) = default;

private:
    PrimitiveKind kind_ = PrimitiveKind::Null;
    uint64_t size_ = 0;
    std::vector<bool> valid_;
    std::vector<double> numbers_;
    std::vector<uint8_t> bools_;
    std::vector<uint64_t> str_ends_;
    std::string blob_;
};

ColumnKind column_kind_for(PrimitiveKind k);

/// Whole `.col` file: header, payload, CRC32 trailer.
std::string encode_file(ColumnKind kind, uint64_t cardinality, std::string_view payload);

struct DecodedFile {
    ColumnKind kind;
    uint64_t cardinality = 0;
    std::string_view payload;
};
/// Validates magic, version, and checksum. `what` names the file in errors.
DecodedFile decode_file(std::string_view bytes, const std::string& what);

std::string encode_counter(const CounterArray& c);
CounterArray decode_counter(uint64_t cardinality, std::string_view payload);
std::string encode_indicator(const IndicatorArray& ind);
IndicatorArray decode_indicator(uint64_t cardinality, std::string_view payload);
std::string encode_relation(const Relation& r);
Relation decode_relation(uint64_t cardinality, std::string_view payload);

}  // namespace quest
