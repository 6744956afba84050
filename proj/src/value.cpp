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

#include "quest/value.hpp"

#include <charconv>
#include <cmath>

namespace quest {

std::string_view to_string(PrimitiveKind kind) {
    switch (kind) {
        case PrimitiveKind::String: return "string";
        case PrimitiveKind::Number: return "number";
        case PrimitiveKind::Boolean: return "boolean";
        case PrimitiveKind::Null: return "null";
    }
    return "?";
}

PrimitiveKind primitive_kind_from_string(std::string_view name) {
    if (name == "string") return PrimitiveKind::String;
    if (name == "number") return PrimitiveKind::Number;
    if (name == "boolean" || name == "bool") return PrimitiveKind::Boolean;
    if (name == "null") return PrimitiveKind::Null;
    throw SchemaError("unknown primitive kind '" + std::string(name) + "'");
}

std::optional<Value> parse_value(std::string_view text, PrimitiveKind kind) {
    switch (kind) {
        case PrimitiveKind::String:
            return Value{std::string(text)};
        case PrimitiveKind::Null:
            if (text.empty()) return Value{};
            return std::nullopt;
        case PrimitiveKind::Number: {
            if (text.empty()) return Value{};
            double d = 0;
            auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), d);
            if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(d))
                return std::nullopt;
            return Value{d};
        }
        case PrimitiveKind::Boolean:
            if (text.empty()) return Value{};
            if (text == "true" || text == "1") return Value{true};
            if (text == "false" || text == "0") return Value{false};
            return std::nullopt;
    }
    return std::nullopt;
}

std::string format_number(double d) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), d);
    return std::string(buf, ptr);
}

std::string format_value(const Value& v) {
    struct Visitor {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(double d) const { return format_number(d); }
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
    };
    return std::visit(Visitor{}, v);
}

int compare_values(const Value& a, const Value& b) {
    if (a.index() != b.index()) throw QueryError("comparing values of different kinds");
    if (auto* x = std::get_if<double>(&a)) {
        double y = std::get<double>(b);
        return *x < y ? -1 : (*x > y ? 1 : 0);
    }
    if (auto* x = std::get_if<std::string>(&a)) {
        int c = x->compare(std::get<std::string>(b));
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    if (auto* x = std::get_if<bool>(&a)) {
        bool y = std::get<bool>(b);
        return static_cast<int>(*x) - static_cast<int>(y);
    }
    return 0;
}

std::string_view to_string(CompareOp op) {
    switch (op) {
        case CompareOp::Eq: return "=";
        case CompareOp::Ne: return "!=";
        case CompareOp::Lt: return "<";
        case CompareOp::Le: return "<=";
        case CompareOp::Gt: return ">";
        case CompareOp::Ge: return ">=";
        case CompareOp::In: return "in";
    }
    return "?";
}

CompareOp compare_op_from_string(std::string_view s) {
    if (s == "=" || s == "==" || s == "eq") return CompareOp::Eq;
    if (s == "!=" || s == "<>" || s == "ne") return CompareOp::Ne;
    if (s == "<" || s == "lt") return CompareOp::Lt;
    if (s == "<=" || s == "le") return CompareOp::Le;
    if (s == ">" || s == "gt") return CompareOp::Gt;
    if (s == ">=" || s == "ge") return CompareOp::Ge;
    if (s == "in" || s == "IN") return CompareOp::In;
    throw QueryError("unknown operator '" + std::string(s) + "'");
}

bool value_matches(const Value& v, CompareOp op, const std::vector<Value>& operands) {
    if (is_null(v)) return false;
    if (op == CompareOp::In) {
        for (const auto& o : operands)
            if (compare_values(v, o) == 0) return true;
        return false;
    }
    return op_holds(op, compare_values(v, operands.at(0)));
}

}  // namespace quest
