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

#ifndef LOMATCH_DISTANCE_H
#define LOMATCH_DISTANCE_H

#include "lomatch/lom.h"

namespace lomatch {

struct DistanceQuery {
    enum class Mode { Circuit, Lom } mode = Mode::Circuit;
    size_t observable_index = 0;  // for Lom mode
    int max_weight = 0;
    /// Upper bound on enumerated combinations before giving up.
    uint64_t budget = 200'000'000;
};

struct DistanceResult {
    bool found = false;
    int weight = 0;
    std::vector<int> witness;  // hyperedge ids
};

class BudgetExceeded : public std::runtime_error {
   public:
    BudgetExceeded(uint64_t required, uint64_t budget)
        : std::runtime_error("distance search needs " + std::to_string(required) +
                             " combinations, budget is " + std::to_string(budget)),
          required_(required) {
    }
    uint64_t required() const {
        return required_;
    }

   private:
    uint64_t required_;
};

/// Exhaustive meet-in-the-middle search for the minimum-weight undetectable
/// error. Circuit mode: no defects anywhere and a flip of some declared
/// observable. Lom mode: no defects inside the observable's decoding
/// subgraph and odd observing parity (the errors invisible to that
/// single-matching instance).
DistanceResult brute_force_distance(const DecodingHypergraph &dem, const DistanceQuery &query);

}  // namespace lomatch

#endif
