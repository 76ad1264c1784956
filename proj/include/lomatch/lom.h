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

#ifndef LOMATCH_LOM_H
#define LOMATCH_LOM_H

#include <memory>

#include "lomatch/dem.h"
#include "lomatch/matching.h"
#include "lomatch/regions.h"

namespace lomatch {

/// Per-shot syndrome at the decoding-hypergraph level.
struct Syndrome {
    std::vector<int> defects;    // sorted detector ids
    uint64_t true_obs_mask = 0;  // ground-truth flips of the declared observables
};

/// How three-or-more-endpoint projections (Y-sourced, phenomenological noise)
/// are handled in a decoding subgraph.
enum class HyperedgePolicy : uint8_t {
    SplitReweight,  // fold the probability into the sibling X/Z component edges
    Drop,           // remove the hyperedge from the subgraph
};

/// Matchable projection of the decoding hypergraph for one observable.
struct DecodingSubgraph {
    size_t observable_index = SIZE_MAX;
    std::vector<int> vertices;  // detector ids, sorted
    MatchGraph graph;           // over local vertex indices; payload = edge list index
    std::vector<std::vector<int>> edge_sources;  // provenance hyperedge ids per edge

    int local_vertex(int detector_id) const;
    /// Restricts a full-circuit defect list to the subgraph's local indices.
    std::vector<int> restrict_defects(const std::vector<int> &defects) const;
};

class SubgraphError : public std::runtime_error {
   public:
    SubgraphError(int hyperedge, const std::string &msg)
        : std::runtime_error(msg), hyperedge_(hyperedge) {
    }
    int hyperedge() const {
        return hyperedge_;
    }

   private:
    int hyperedge_;
};

/// Builds the decoding subgraph for a declared observable: vertices carry the
/// (t, register, Pauli type) tags of the observing edge set's endpoints, and
/// every hyperedge with support on them projects to an edge. A projection
/// with more than two endpoints raises SubgraphError under the basic model
/// and is otherwise handled per `policy`.
DecodingSubgraph extract_subgraph(const DecodingHypergraph &dem, size_t observable_index,
                                  HyperedgePolicy policy = HyperedgePolicy::Drop);

/// Runs matching on the subgraph and returns the parity of observing-set
/// edges in the minimum-weight solution.
bool single_lom_decode(const DecodingSubgraph &sub, const std::vector<int> &defects);

struct LomPrediction {
    enum class Method : uint8_t { Decoded, InferredByProduct, CoinToss };
    struct Entry {
        ObservableSpec spec;
        bool flip = false;
        Method method = Method::Decoded;
    };
    std::vector<Entry> measurements;  // one per circuit measurement, in id order
    std::vector<Entry> requested;     // one per requested final observable
};

/// Static decoding plan for one circuit + realization: which observables get
/// their own matching instance and how fragile measurements are resolved.
struct LomPlan {
    struct MeasurementPlan {
        enum class Kind : uint8_t { Reliable, InferredByProduct, CoinToss } kind;
        ObservableSpec decoded;        // the observable actually matched
        std::vector<int> completion;   // earlier coin-tossed measurement ids
    };
    std::vector<MeasurementPlan> per_measurement;  // by measurement id - 1
    std::vector<ObservableSpec> requested;
    /// All observables that must be declared in the decoding hypergraph.
    std::vector<ObservableSpec> observables;
    size_t observable_index(const ObservableSpec &spec) const;
};

LomPlan plan_lom(const BareCircuit &circuit, const Realization &r,
                 const std::vector<ObservableSpec> &requested);

/// Independent generating set of reliable observables containing every
/// requested spec verbatim (requested specs must be reliable).
std::vector<ObservableSpec> choose_generating_set(const BareCircuit &circuit,
                                                  const Realization &r,
                                                  const std::vector<ObservableSpec> &requested);

/// Windowless LOM decoder: one matching instance per planned observable,
/// sharing nothing between instances except the immutable hypergraph.
class LomDecoder {
   public:
    LomDecoder(const DecodingHypergraph &dem, LomPlan plan,
               HyperedgePolicy policy = HyperedgePolicy::Drop);

    /// Decodes one shot. Coin tosses for unresolvable fragile observables are
    /// drawn from a stream keyed by (coin_seed, measurement id).
    LomPrediction decode(const Syndrome &syndrome, uint64_t coin_seed = 0) const;
    /// Decodes a single declared observable directly.
    bool decode_observable(const Syndrome &syndrome, size_t observable_index) const;
    const DecodingSubgraph &subgraph(size_t observable_index) const;
    const LomPlan &plan() const {
        return plan_;
    }

   private:
    struct Instance {
        DecodingSubgraph sub;
        std::unique_ptr<ShortestPathEngine> engine;
    };
    const DecodingHypergraph *dem_;
    LomPlan plan_;
    std::vector<std::unique_ptr<Instance>> instances_;  // per declared observable

    bool run_instance(size_t observable_index, const std::vector<int> &defects) const;
};

/// Splitting-hyperedge baseline: decodes the full syndrome on the matchable
/// restriction of the hypergraph, after decomposing every >2-endpoint
/// hyperedge into a matching over its own endpoints and folding its
/// probability into the decomposition edges.
class SplittingDecoder {
   public:
    explicit SplittingDecoder(const DecodingHypergraph &dem);

    /// Returns the predicted flip of each declared observable.
    uint64_t decode(const Syndrome &syndrome) const;
    /// Decomposition edge lists per >2-endpoint hyperedge id (for tests).
    const std::map<int, std::vector<int>> &decompositions() const {
        return decompositions_;
    }

   private:
    const DecodingHypergraph *dem_;
    MatchGraph graph_;  // vertices = all detectors
    std::vector<int> edge_hyperedge_;
    std::map<int, std::vector<int>> decompositions_;
    mutable std::unique_ptr<ShortestPathEngine> engine_;
};

}  // namespace lomatch

#endif
