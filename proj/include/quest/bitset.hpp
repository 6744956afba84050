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

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "quest/value.hpp"

namespace quest {

/// Word-packed validity bits, one per instance of a schema node's domain.
/// Bit i lives in word i/64 at position i%64; bits past size() are always 0.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(uint64_t size, bool fill = false) : size_(size), words_((size + 63) / 64, fill ? ~0ULL : 0ULL) {
        trim();
    }

    /// Builds from a '0'/'1' string, leftmost character is bit 0.
    static Bitset from_string(std::string_view s) {
        Bitset b(s.size());
        for (size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1') b.set(i);
            else if (s[i] != '0') throw Error("bitset literal may only contain 0 and 1");
        }
        return b;
    }

    uint64_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    bool test(uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1ULL; }
    void set(uint64_t i) { words_[i >> 6] |= 1ULL << (i & 63); }
    void reset(uint64_t i) { words_[i >> 6] &= ~(1ULL << (i & 63)); }
    void assign(uint64_t i, bool v) { v ? set(i) : reset(i); }

    /// Sets every bit in [lo, hi).
    void set_range(uint64_t lo, uint64_t hi) {
        if (lo >= hi) return;
        uint64_t wl = lo >> 6, wh = (hi - 1) >> 6;
        uint64_t ml = ~0ULL << (lo & 63);
        uint64_t mh = ~0ULL >> (63 - ((hi - 1) & 63));
        if (wl == wh) {
            words_[wl] |= ml & mh;
            return;
        }
        words_[wl] |= ml;
        for (uint64_t w = wl + 1; w < wh; ++w) words_[w] = ~0ULL;
        words_[wh] |= mh;
    }

    /// True if any bit in [lo, hi) is set.
    bool any_in(uint64_t lo, uint64_t hi) const {
        if (lo >= hi) return false;
        uint64_t wl = lo >> 6, wh = (hi - 1) >> 6;
        uint64_t ml = ~0ULL << (lo & 63);
        uint64_t mh = ~0ULL >> (63 - ((hi - 1) & 63));
        if (wl == wh) return (words_[wl] & ml & mh) != 0;
        if (words_[wl] & ml) return true;
        for (uint64_t w = wl + 1; w < wh; ++w)
            if (words_[w]) return true;
        return (words_[wh] & mh) != 0;
    }

    uint64_t count() const {
        uint64_t c = 0;
        for (uint64_t w : words_) c += static_cast<uint64_t>(std::popcount(w));
        return c;
    }
    bool any() const {
        for (uint64_t w : words_)
            if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    Bitset& operator&=(const Bitset& o) {
        check_same(o);
        for (size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    Bitset& operator|=(const Bitset& o) {
        check_same(o);
        for (size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }

    /// a is a subset of b, bitwise a <= b.
    bool is_subset_of(const Bitset& o) const {
        check_same(o);
        for (size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    /// Calls f(index) for every set bit in increasing order.
    template <typename F>
    void for_each_set(F&& f) const {
        for (uint64_t w = 0; w < words_.size(); ++w) {
            uint64_t word = words_[w];
            while (word) {
                uint64_t bit = static_cast<uint64_t>(std::countr_zero(word));
                f((w << 6) + bit);
                word &= word - 1;
            }
        }
    }

    const std::vector<uint64_t>& words() const { return words_; }
    std::vector<uint64_t>& mutable_words() { return words_; }

    std::string to_string() const {
        std::string s(size_, '0');
        for_each_set([&](uint64_t i) { s[i] = '1'; });
        return s;
    }

    friend bool operator==(const Bitset& a, const Bitset& b) { return a.size_ == b.size_ && a.words_ == b.words_; }

private:
    void trim() {
        if (size_ & 63) words_.back() &= (1ULL << (size_ & 63)) - 1;
    }
    void check_same(const Bitset& o) const {
        if (o.size_ != size_) throw Error("bitset length mismatch");
    }

    uint64_t size_ = 0;
    std::vector<uint64_t> words_;
};

}  // namespace quest
