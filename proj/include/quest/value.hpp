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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace quest {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (exit code 3 in the CLI).
class DataError : public Error {
public:
    using Error::Error;
};

/// Malformed schema, query, or usage of the API.
class SchemaError : public Error {
public:
    using Error::Error;
};

class QueryError : public Error {
public:
    using Error::Error;
};

/// Raised when a wandering plan breaks the subtree re-entry rule.
class ConstraintViolation : public Error {
public:
    using Error::Error;
};

enum class PrimitiveKind : uint8_t { String = 0, Number = 1, Boolean = 2, Null = 3 };

std::string_view to_string(PrimitiveKind kind);
PrimitiveKind primitive_kind_from_string(std::string_view name);

/// A single primitive unit. monostate is null.
using Value = std::variant<std::monostate, double, std::string, bool>;

inline bool is_null(const Value& v) { return std::holds_alternative<std::monostate>(v); }

/// Parses text into a value of the given kind. Empty text is null for
/// non-string kinds. Returns nullopt on a parse failure.
std::optional<Value> parse_value(std::string_view text, PrimitiveKind kind);

/// Shortest round-trip text form; null renders as the empty string.
std::string format_value(const Value& v);

/// Total order used by predicates and join keys. Both sides must be non-null
/// and of the same alternative.
int compare_values(const Value& a, const Value& b);

std::string format_number(double d);

enum class CompareOp : uint8_t { Eq, Ne, Lt, Le, Gt, Ge, In };

std::string_view to_string(CompareOp op);
CompareOp compare_op_from_string(std::string_view s);

/// Outcome of `cmp(value, operand) op 0` for a scalar operator.
inline bool op_holds(CompareOp op, int cmp) {
    switch (op) {
        case CompareOp::Eq:
        case CompareOp::In: return cmp == 0;
        case CompareOp::Ne: return cmp != 0;
        case CompareOp::Lt: return cmp < 0;
        case CompareOp::Le: return cmp <= 0;
        case CompareOp::Gt: return cmp > 0;
        case CompareOp::Ge: return cmp >= 0;
    }
    return false;
}

/// Null never matches. IN matches any operand.
bool value_matches(const Value& v, CompareOp op, const std::vector<Value>& operands);

}  // namespace quest
