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

#include "lomatch/distance.h"

#include <algorithm>
#include <functional>
#include <unordered_map>

namespace lomatch {

namespace {

uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

uint64_t set_hash(const std::vector<int> &sorted) {
    uint64_t h = 0x12345ull;
    for (int v : sorted) {
        h = mix64(h ^ uint64_t(uint32_t(v)));
    }
    return h;
}

uint64_t choose(uint64_t n, uint64_t k) {
    if (k > n) {
        return 0;
    }
    uint64_t r = 1;
    for (uint64_t i = 0; i < k; i++) {
        r = r * (n - i) / (i + 1);
        if (r > (uint64_t{1} << 62)) {
            return uint64_t{1} << 62;
        }
    }
    return r;
}

void xor_into(std::vector<int> &acc, const std::vector<int> &other) {
    std::vector<int> merged;
    merged.reserve(acc.size() + other.size());
    std::set_symmetric_difference(acc.begin(), acc.end(), other.begin(), other.end(),
                                  std::back_inserter(merged));
    acc = std::move(merged);
}

}  // namespace

DistanceResult brute_force_distance(const DecodingHypergraph &dem, const DistanceQuery &query) {
    // Candidate edges with their effective defect signature and flip bit.
    std::vector<std::vector<int>> sig;
    std::vector<bool> flips;
    std::vector<int> ids;
    if (query.mode == DistanceQuery::Mode::Circuit) {
        for (const auto &h : dem.edges) {
            sig.push_back(h.detectors);
            flips.push_back(h.obs_mask != 0);
            ids.push_back(h.id);
        }
    } else {
        DecodingSubgraph sub = extract_subgraph(dem, query.observable_index,
                                                HyperedgePolicy::Drop);
        for (const auto &h : dem.edges) {
            std::vector<int> local;
            for (int det : h.detectors) {
                int lv = sub.local_vertex(det);
                if (lv >= 0) {
                    local.push_back(lv);
                }
            }
            bool flip = (h.obs_mask >> query.observable_index) & 1;
            if (local.empty() && !flip) {
                continue;
            }
            sig.push_back(std::move(local));
            flips.push_back(flip);
            ids.push_back(h.id);
        }
    }
    size_t m = sig.size();

    uint64_t required = 0;
    for (int w = 1; w <= query.max_weight; w++) {
        required += choose(m, uint64_t(w) / 2) + choose(m, uint64_t(w + 1) / 2);
    }
    if (required > query.budget) {
        throw BudgetExceeded(required, query.budget);
    }

    // Enumerate k-subsets in lexicographic index order, calling fn with the
    // accumulated signature, flip parity, and index list.
    auto enumerate = [&](int k, auto &&fn) {
        auto idx = std::vector<int>(size_t(k));
        auto acc = std::vector<std::vector<int>>(size_t(k) + 1);
        auto fl = std::vector<bool>(size_t(k) + 1, false);
        std::function<bool(int, int)> rec = [&](int depth, int start) {
            if (depth == k) {
                return fn(acc[size_t(k)], fl[size_t(k)], idx);
            }
            for (int i = start; i < int(m) - (k - depth - 1); i++) {
                idx[size_t(depth)] = i;
                acc[size_t(depth) + 1] = acc[size_t(depth)];
                xor_into(acc[size_t(depth) + 1], sig[size_t(i)]);
                fl[size_t(depth) + 1] = fl[size_t(depth)] ^ bool(flips[size_t(i)]);
                if (rec(depth + 1, i + 1)) {
                    return true;
                }
            }
            return false;
        };
        if (k == 0) {
            return false;
        }
        return rec(0, 0);
    };

    DistanceResult result;
    for (int w = 1; w <= query.max_weight && !result.found; w++) {
        int a = w / 2, b = w - a;
        // First halves indexed by signature hash; entries keep their index
        // tuples for exact verification (hash collisions re-checked).
        struct HalfEntry {
            std::vector<int> indices;
            bool flip;
        };
        std::unordered_multimap<uint64_t, HalfEntry> halves;
        if (a == 0) {
            halves.emplace(set_hash({}), HalfEntry{{}, false});
        } else {
            enumerate(a, [&](const std::vector<int> &s, bool f, const std::vector<int> &idx) {
                halves.emplace(set_hash(s), HalfEntry{idx, f});
                return false;
            });
        }
        enumerate(b, [&](const std::vector<int> &s, bool f, const std::vector<int> &idx) {
            auto range = halves.equal_range(set_hash(s));
            for (auto it = range.first; it != range.second; ++it) {
                const HalfEntry &half = it->second;
                // Disjointness and canonical split: all first-half indices
                // precede the second half's smallest index.
                if (!half.indices.empty() && !idx.empty() && half.indices.back() >= idx.front()) {
                    continue;
                }
                if (!(half.flip ^ f)) {
                    continue;
                }
                // Verify the signatures really cancel (hash equality only).
                std::vector<int> check;
                for (int i : half.indices) {
                    xor_into(check, sig[size_t(i)]);
                }
                std::vector<int> other;
                for (int i : idx) {
                    xor_into(other, sig[size_t(i)]);
                }
                if (check != other) {
                    continue;
                }
                result.found = true;
                result.weight = w;
                for (int i : half.indices) {
                    result.witness.push_back(ids[size_t(i)]);
                }
                for (int i : idx) {
                    result.witness.push_back(ids[size_t(i)]);
                }
                std::sort(result.witness.begin(), result.witness.end());
                return true;
            }
            return false;
        });
    }
    return result;
}

}  // namespace lomatch
