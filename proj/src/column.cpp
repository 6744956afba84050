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

#include "quest/column.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>

namespace quest {

namespace {

constexpr char kMagic[4] = {'Q', 'S', 'T', 'C'};
constexpr size_t kHeaderSize = 4 + 2 + 1 + 8;

void put_u8(std::string& out, uint8_t v) { out.push_back(static_cast<char>(v)); }
void put_u16(std::string& out, uint16_t v) {
    for (int b = 0; b < 2; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}
void put_u32(std::string& out, uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}
void put_u64(std::string& out, uint64_t v) {
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

class Reader {
public:
    Reader(std::string_view data, const char* what) : data_(data), what_(what) {}

    uint8_t u8() { return static_cast<uint8_t>(take(1)[0]); }
    uint16_t u16() {
        auto s = take(2);
        return static_cast<uint16_t>(static_cast<uint8_t>(s[0]) | (static_cast<uint8_t>(s[1]) << 8));
    }
    uint64_t u64() {
        auto s = take(8);
        uint64_t v = 0;
        for (int b = 7; b >= 0; --b) v = (v << 8) | static_cast<uint8_t>(s[b]);
        return v;
    }
    std::string_view bytes(uint64_t n) { return take(n); }
    /// Guards allocations sized from untrusted counts.
    void need(uint64_t count, uint64_t width) {
        if (width && count > (data_.size() - pos_) / width) throw DataError(std::string("truncated ") + what_);
    }
    bool done() const { return pos_ == data_.size(); }

private:
    std::string_view take(uint64_t n) {
        if (n > data_.size() - pos_) throw DataError(std::string("truncated ") + what_);
        auto s = data_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    std::string_view data_;
    size_t pos_ = 0;
    const char* what_;
};

void put_validity(std::string& out, const std::vector<bool>& valid) {
    uint64_t word = 0;
    for (size_t i = 0; i < valid.size(); ++i) {
        if (valid[i]) word |= 1ULL << (i & 63);
        if ((i & 63) == 63) {
            put_u64(out, word);
            word = 0;
        }
    }
    if (valid.size() & 63) put_u64(out, word);
}

std::vector<bool> get_validity(Reader& r, uint64_t n) {
    std::vector<bool> valid(n);
    for (uint64_t w = 0; w < (n + 63) / 64; ++w) {
        uint64_t word = r.u64();
        for (uint64_t b = 0; b < 64 && w * 64 + b < n; ++b) valid[w * 64 + b] = (word >> b) & 1;
    }
    return valid;
}

}  // namespace

ColumnKind column_kind_for(PrimitiveKind k) {
    switch (k) {
        case PrimitiveKind::Number: return ColumnKind::Number;
        case PrimitiveKind::String: return ColumnKind::String;
        case PrimitiveKind::Boolean: return ColumnKind::Bool;
        case PrimitiveKind::Null: break;
    }
    // A null-typed field stores only its validity bitmap, which Bool covers.
    return ColumnKind::Bool;
}

void PrimitiveColumn::append_null() {
    valid_.push_back(false);
    ++size_;
    switch (kind_) {
        case PrimitiveKind::Number: numbers_.push_back(0.0); break;
        case PrimitiveKind::String: str_ends_.push_back(blob_.size()); break;
        case PrimitiveKind::Boolean:
        case PrimitiveKind::Null: bools_.push_back(0); break;
    }
}

void PrimitiveColumn::append(const Value& v) {
    if (quest::is_null(v)) return append_null();
    switch (kind_) {
        case PrimitiveKind::Number:
            if (!std::holds_alternative<double>(v)) throw DataError("expected a number");
            numbers_.push_back(std::get<double>(v));
            break;
        case PrimitiveKind::String:
            if (!std::holds_alternative<std::string>(v)) throw DataError("expected a string");
            blob_ += std::get<std::string>(v);
            str_ends_.push_back(blob_.size());
            break;
        case PrimitiveKind::Boolean:
            if (!std::holds_alternative<bool>(v)) throw DataError("expected a boolean");
            bools_.push_back(std::get<bool>(v) ? 1 : 0);
            break;
        case PrimitiveKind::Null:
            throw DataError("null-typed field holds a non-null value");
    }
    valid_.push_back(true);
    ++size_;
}

Value PrimitiveColumn::get(uint64_t i) const {
    if (!valid_[i]) return std::monostate{};
    switch (kind_) {
        case PrimitiveKind::Number: return numbers_[i];
        case PrimitiveKind::String: return std::string(string(i));
        case PrimitiveKind::Boolean: return bools_[i] != 0;
        case PrimitiveKind::Null: break;
    }
    return std::monostate{};
}

double PrimitiveColumn::avg_unit_size() const {
    switch (kind_) {
        case PrimitiveKind::Number: return 8.0;
        case PrimitiveKind::String:
            return 8.0 + (size_ ? static_cast<double>(blob_.size()) / static_cast<double>(size_) : 0.0);
        case PrimitiveKind::Boolean:
        case PrimitiveKind::Null: return 1.0;
    }
    return 1.0;
}

std::string PrimitiveColumn::encode() const {
    std::string out;
    put_validity(out, valid_);
    switch (kind_) {
        case PrimitiveKind::Number:
            for (double d : numbers_) put_u64(out, std::bit_cast<uint64_t>(d));
            break;
        case PrimitiveKind::String:
            for (uint64_t e : str_ends_) put_u64(out, e);
            put_u64(out, blob_.size());
            out += blob_;
            break;
        case PrimitiveKind::Boolean:
        case PrimitiveKind::Null:
            for (uint8_t b : bools_) put_u8(out, b);
            break;
    }
    return out;
}

PrimitiveColumn PrimitiveColumn::decode(ColumnKind kind, uint64_t n, std::string_view payload) {
    Reader r(payload, "column payload");
    PrimitiveColumn c;
    c.size_ = n;
    r.need(n, 1);
    c.valid_ = get_validity(r, n);
    switch (kind) {
        case ColumnKind::Number:
            c.kind_ = PrimitiveKind::Number;
            c.numbers_.resize(n);
            for (auto& d : c.numbers_) d = std::bit_cast<double>(r.u64());
            break;
        case ColumnKind::String: {
            c.kind_ = PrimitiveKind::String;
            c.str_ends_.resize(n);
            for (auto& e : c.str_ends_) e = r.u64();
            uint64_t len = r.u64();
            c.blob_ = std::string(r.bytes(len));
            uint64_t prev = 0;
            for (uint64_t e : c.str_ends_) {
                if (e < prev || e > len) throw DataError("corrupt string offsets");
                prev = e;
            }
            break;
        }
        case ColumnKind::Bool:
            c.kind_ = PrimitiveKind::Boolean;
            c.bools_.resize(n);
            for (auto& b : c.bools_) b = r.u8();
            break;
        default:
            throw DataError("file does not hold a primitive column");
    }
    if (!r.done()) throw DataError("trailing bytes in column payload");
    return c;
}

std::string encode_file(ColumnKind kind, uint64_t cardinality, std::string_view payload) {
    std::string out;
    out.reserve(kHeaderSize + payload.size() + 4);
    out.append(kMagic, 4);
    put_u16(out, kFormatVersion);
    put_u8(out, static_cast<uint8_t>(kind));
    put_u64(out, cardinality);
    out.append(payload);
    uLong crc = crc32(0L, reinterpret_cast<const Bytef*>(out.data()), static_cast<uInt>(out.size()));
    put_u32(out, static_cast<uint32_t>(crc));
    return out;
}

DecodedFile decode_file(std::string_view bytes, const std::string& what) {
    if (bytes.size() < kHeaderSize + 4) throw DataError("truncated file " + what);
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw DataError("bad magic in " + what);
    auto body = bytes.substr(0, bytes.size() - 4);
    uLong crc = crc32(0L, reinterpret_cast<const Bytef*>(body.data()), static_cast<uInt>(body.size()));
    Reader trailer(bytes.substr(bytes.size() - 4), "trailer");
    uint32_t stored = 0;
    for (int b = 0; b < 4; ++b) stored |= static_cast<uint32_t>(trailer.u8()) << (8 * b);
    if (stored != static_cast<uint32_t>(crc)) throw DataError("checksum mismatch in " + what);
    Reader r(body, "header");
    r.bytes(4);
    uint16_t version = r.u16();
    if (version != kFormatVersion) throw DataError("unsupported format version in " + what);
    DecodedFile f;
    f.kind = static_cast<ColumnKind>(r.u8());
    f.cardinality = r.u64();
    f.payload = body.substr(kHeaderSize);
    return f;
}

std::string encode_counter(const CounterArray& c) {
    std::string out;
    out.reserve(c.size() * 8);
    for (uint64_t e : c.ends) put_u64(out, e);
    return out;
}

CounterArray decode_counter(uint64_t n, std::string_view payload) {
    Reader r(payload, "counter payload");
    CounterArray c;
    r.need(n, 8);
    c.ends.resize(n);
    for (auto& e : c.ends) e = r.u64();
    if (!r.done()) throw DataError("trailing bytes in counter payload");
    return c;
}

std::string encode_indicator(const IndicatorArray& ind) {
    std::string out;
    put_u64(out, ind.target_cardinality);
    for (uint64_t p : ind.pointers) put_u64(out, p);
    return out;
}

IndicatorArray decode_indicator(uint64_t n, std::string_view payload) {
    Reader r(payload, "indicator payload");
    IndicatorArray ind;
    ind.target_cardinality = r.u64();
    r.need(n, 8);
    ind.pointers.resize(n);
    for (auto& p : ind.pointers) p = r.u64();
    if (!r.done()) throw DataError("trailing bytes in indicator payload");
    return ind;
}

std::string encode_relation(const Relation& rel) {
    std::string out;
    put_u8(out, static_cast<uint8_t>(rel.kind));
    put_u64(out, rel.lower);
    put_u64(out, rel.ends.size());
    for (uint64_t e : rel.ends) put_u64(out, e);
    put_u64(out, rel.targets.size());
    for (uint64_t t : rel.targets) put_u64(out, t);
    return out;
}

Relation decode_relation(uint64_t n, std::string_view payload) {
    Reader r(payload, "relation payload");
    Relation rel;
    rel.kind = static_cast<RelationKind>(r.u8());
    if (rel.kind > RelationKind::Csr) throw DataError("unknown relation kind");
    rel.upper = n;
    rel.lower = r.u64();
    uint64_t ne = r.u64();
    r.need(ne, 8);
    rel.ends.resize(ne);
    for (auto& e : rel.ends) e = r.u64();
    uint64_t nt = r.u64();
    r.need(nt, 8);
    rel.targets.resize(nt);
    for (auto& t : rel.targets) t = r.u64();
    if (!r.done()) throw DataError("trailing bytes in relation payload");
    rel.validate();
    return rel;
}

}  // namespace quest
