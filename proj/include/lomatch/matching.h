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

#ifndef LOMATCH_MATCHING_H
#define LOMATCH_MATCHING_H

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace lomatch {

/// Integer weight scale for converting log-likelihood ratios; unit-weight
/// graphs use kWeightScale directly so arithmetic stays exact.
constexpr int64_t kWeightScale = 1 << 16;

/// Weighted undirected graph with an implicit boundary. Edges with b == -1
/// connect their single endpoint to the boundary.
struct MatchGraph {
    struct Edge {
        int a;
        int b;  // -1 = boundary
        int64_t weight;
        int payload = -1;   // caller-owned id (e.g. subgraph edge index)
        bool in_obs = false;
    };
    int n_vertices = 0;
    std::vector<Edge> edges;

    void add_edge(int a, int b, int64_t weight, int payload = -1, bool in_obs = false);
    void add_boundary_edge(int a, int64_t weight, int payload = -1, bool in_obs = false);
};

struct MatchingSolution {
    std::vector<int> edges;  // MatchGraph edge indices, XOR-reduced
    int64_t total_weight = 0;
    bool obs_parity = false;  // parity of in_obs edges in the solution
};

/// Exact minimum-weight perfect matching on a dense even graph, via the
/// primal-dual blossom algorithm. wt[i][j] is the cost (kNoEdge = absent).
/// Returns the mate of each node, or nullopt when no perfect matching exists.
constexpr int64_t kNoEdge = INT64_C(0x3FFFFFFFFFFFFFF);
std::optional<std::vector<int>> min_weight_perfect_matching(
    const std::vector<std::vector<int64_t>> &wt);

/// Shortest-path engine with per-source memoization; the boundary acts as a
/// sink-only virtual vertex. Ties are broken toward the lexicographically
/// smaller (predecessor, edge) pair so paths are reproducible.
class ShortestPathEngine {
   public:
    explicit ShortestPathEngine(const MatchGraph &graph);

    struct SourceTable {
        std::vector<int64_t> dist;  // size n_vertices + 1 (last = boundary)
        std::vector<int> pred_vertex;
        std::vector<int> pred_edge;
    };
    const SourceTable &from(int source);
    /// Appends the source->target path's edge indices (target may be the
    /// boundary pseudo-vertex n_vertices).
    void path_edges(int source, int target, std::vector<int> &out);
    int boundary_vertex() const {
        return graph_->n_vertices;
    }

   private:
    const MatchGraph *graph_;
    std::vector<std::vector<std::pair<int, int>>> adjacency_;  // (neighbor, edge)
    std::map<int, SourceTable> cache_;
};

struct DecodeOptions {
    /// Demo-only seeded tie-breaking: perturbs weights in the low bits so an
    /// arbitrary minimum-weight solution is selected per seed.
    std::optional<uint64_t> tie_break_seed;
};

/// Matches the defects (optionally through the boundary), expands matched
/// pairs into underlying edge paths and XOR-reduces them. Throws
/// std::invalid_argument for defects outside the graph and std::runtime_error
/// when no feasible matching exists.
MatchingSolution decode_graph(const MatchGraph &graph, const std::vector<int> &defects,
                              const DecodeOptions &opts = {});

/// Same, reusing a caller-owned path engine (per-source tables are memoized
/// across calls).
MatchingSolution decode_graph_with_engine(const MatchGraph &graph, ShortestPathEngine &engine,
                                          const std::vector<int> &defects);

}  // namespace lomatch

#endif
