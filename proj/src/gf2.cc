// Copyright 2026 lomatch Contributors
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

#include "lomatch/gf2.h"

#include <bit>
#include <stdexcept>

namespace lomatch {

namespace {
size_t first_set_bit(const std::vector<uint64_t> &v) {
    for (size_t w = 0; w < v.size(); w++) {
        if (v[w]) {
            return w * 64 + size_t(std::countr_zero(v[w]));
        }
    }
    return SIZE_MAX;
}
}  // namespace

bool GF2Span::insert(std::vector<uint64_t> v) {
    if (words_ == 0) {
        words_ = v.size();
    }
    if (v.size() != words_) {
        throw std::invalid_argument("GF2Span: inconsistent vector width");
    }
    std::vector<uint64_t> combo(n_inserted_ / 64 + 1, 0);
    combo[n_inserted_ >> 6] |= uint64_t{1} << (n_inserted_ & 63);
    n_inserted_++;
    for (const auto &row : rows_) {
        if ((v[row.pivot >> 6] >> (row.pivot & 63)) & 1) {
            for (size_t w = 0; w < words_; w++) {
                v[w] ^= row.bits[w];
            }
            if (combo.size() < row.combo.size()) {
                combo.resize(row.combo.size(), 0);
            }
            for (size_t w = 0; w < row.combo.size(); w++) {
                combo[w] ^= row.combo[w];
            }
        }
    }
    size_t pivot = first_set_bit(v);
    if (pivot == SIZE_MAX) {
        return false;
    }
    rows_.push_back(Row{std::move(v), std::move(combo), pivot});
    return true;
}

std::optional<std::vector<size_t>> GF2Span::express(std::vector<uint64_t> v) const {
    if (words_ != 0 && v.size() != words_) {
        throw std::invalid_argument("GF2Span: inconsistent vector width");
    }
    std::vector<uint64_t> combo(n_inserted_ / 64 + 1, 0);
    for (const auto &row : rows_) {
        if ((v[row.pivot >> 6] >> (row.pivot & 63)) & 1) {
            for (size_t w = 0; w < v.size(); w++) {
                v[w] ^= row.bits[w];
            }
            if (combo.size() < row.combo.size()) {
                combo.resize(row.combo.size(), 0);
            }
            for (size_t w = 0; w < row.combo.size(); w++) {
                combo[w] ^= row.combo[w];
            }
        }
    }
    if (first_set_bit(v) != SIZE_MAX) {
        return std::nullopt;
    }
    std::vector<size_t> indices;
    for (size_t i = 0; i < n_inserted_; i++) {
        if ((combo[i >> 6] >> (i & 63)) & 1) {
            indices.push_back(i);
        }
    }
    return indices;
}

}  // namespace lomatch
