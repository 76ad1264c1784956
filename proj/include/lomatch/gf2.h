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

#ifndef LOMATCH_GF2_H
#define LOMATCH_GF2_H

#include <cstdint>
#include <optional>
#include <vector>

namespace lomatch {

/// Incremental GF(2) row space with expression tracking: each inserted basis
/// vector remembers which original vectors combine into it, so membership
/// queries return the combination over the original insertion indices.
class GF2Span {
   public:
    /// The word width is adopted from the first inserted vector; the
    /// constructor argument is a capacity hint only.
    explicit GF2Span(size_t n_bits) : n_bits_(n_bits) {
    }

    size_t n_inserted() const {
        return n_inserted_;
    }
    size_t rank() const {
        return rows_.size();
    }

    /// Inserts a vector; returns false if it was already in the span.
    bool insert(std::vector<uint64_t> v);

    /// If v is in the span, returns the set of original insertion indices
    /// whose XOR equals v.
    std::optional<std::vector<size_t>> express(std::vector<uint64_t> v) const;

    bool contains(std::vector<uint64_t> v) const {
        return express(std::move(v)).has_value();
    }

   private:
    size_t n_bits_;
    size_t words_ = 0;
    size_t n_inserted_ = 0;
    struct Row {
        std::vector<uint64_t> bits;
        std::vector<uint64_t> combo;  // over original insertion indices
        size_t pivot;
    };
    std::vector<Row> rows_;
};

}  // namespace lomatch

#endif
