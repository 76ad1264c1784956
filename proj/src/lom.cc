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

#include "lomatch/lom.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "lomatch/gf2.h"

namespace lomatch {

namespace {

int64_t probability_weight(double p) {
    double w = std::log((1.0 - p) / p);
    int64_t scaled = int64_t(std::llround(w * double(kWeightScale)));
    return std::max<int64_t>(scaled, 1);
}

int64_t edge_weight(const DecodingHypergraph &dem, double p) {
    return dem.uniform_probability ? kWeightScale : probability_weight(p);
}

uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

int DecodingSubgraph::local_vertex(int detector_id) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), detector_id);
    if (it == vertices.end() || *it != detector_id) {
        return -1;
    }
    return int(it - vertices.begin());
}

std::vector<int> DecodingSubgraph::restrict_defects(const std::vector<int> &defects) const {
    std::vector<int> out;
    for (int d : defects) {
        int local = local_vertex(d);
        if (local >= 0) {
            out.push_back(local);
        }
    }
    return out;
}

DecodingSubgraph extract_subgraph(const DecodingHypergraph &dem, size_t observable_index,
                                  HyperedgePolicy policy) {
    if (observable_index >= dem.observable_records.size()) {
        throw std::invalid_argument("observable not declared in the hypergraph");
    }
    DecodingSubgraph sub;
    sub.observable_index = observable_index;
    const auto &dets = dem.detector_set.detectors;

    // Vertex tags (t, register, type) from the boundary members of the
    // observing edge set.
    std::set<std::tuple<int, int, bool>> tags;
    for (const auto &h : dem.edges) {
        if (((h.obs_mask >> observable_index) & 1) && h.detectors.size() == 1) {
            const Detector &det = dets[size_t(h.detectors[0])];
            tags.insert({det.t, det.reg, det.x_type});
        }
    }
    if (tags.empty()) {
        throw std::logic_error("observable has an empty observing edge set");
    }
    for (const auto &det : dets) {
        if (tags.count({det.t, det.reg, det.x_type})) {
            sub.vertices.push_back(det.id);
        }
    }
    sub.graph.n_vertices = int(sub.vertices.size());

    auto project = [&](const Hyperedge &h) {
        std::vector<int> local;
        for (int det : h.detectors) {
            int lv = sub.local_vertex(det);
            if (lv >= 0) {
                local.push_back(lv);
            }
        }
        return local;
    };

    // Accumulate projected edges keyed by (endpoints, observing flag);
    // parallel projections combine probabilities as independent XOR sources.
    struct Acc {
        double probability;
        std::vector<int> sources;
    };
    std::map<std::pair<std::pair<int, int>, bool>, Acc> acc;
    auto put = [&](int a, int b, bool in_obs, double p, int hid) {
        if (b >= 0 && b < a) {
            std::swap(a, b);
        }
        auto key = std::make_pair(std::make_pair(a, b), in_obs);
        auto [it, fresh] = acc.emplace(key, Acc{p, {hid}});
        if (!fresh) {
            double q = it->second.probability;
            it->second.probability = q * (1 - p) + p * (1 - q);
            it->second.sources.push_back(hid);
        }
    };
    std::vector<std::pair<int, std::vector<int>>> oversized;  // (hyperedge, endpoints)
    for (const auto &h : dem.edges) {
        std::vector<int> local = project(h);
        bool in_obs = (h.obs_mask >> observable_index) & 1;
        if (local.empty()) {
            // Invisible flips occur only for fragile observables, whose raw
            // outcome carries no information anyway.
            continue;
        }
        if (local.size() <= 2) {
            put(local[0], local.size() == 2 ? local[1] : -1, in_obs, h.probability, h.id);
            continue;
        }
        if (dem.uniform_probability) {
            throw SubgraphError(h.id,
                                "projected hyperedge has more than two endpoints under the "
                                "basic model: edge " +
                                    std::to_string(h.id));
        }
        if (policy == HyperedgePolicy::Drop) {
            continue;
        }
        oversized.emplace_back(h.id, std::move(local));
    }
    auto emit = [&]() {
        sub.graph.edges.clear();
        sub.edge_sources.clear();
        for (auto &[key, val] : acc) {
            auto [endpoints, in_obs] = key;
            auto [a, b] = endpoints;
            int64_t w = edge_weight(dem, val.probability);
            int payload = int(sub.edge_sources.size());
            if (b < 0) {
                sub.graph.add_boundary_edge(a, w, payload, in_obs);
            } else {
                sub.graph.add_edge(a, b, w, payload, in_obs);
            }
            sub.edge_sources.push_back(val.sources);
        }
    };
    emit();
    if (!oversized.empty()) {
        // Split-and-reweight: decompose each oversized projection into a
        // matching over its own endpoints within the subgraph and fold its
        // probability into the decomposition edges.
        ShortestPathEngine engine(sub.graph);
        for (const auto &[hid, endpoints] : oversized) {
            MatchingSolution sol;
            try {
                sol = decode_graph_with_engine(sub.graph, engine, endpoints);
            } catch (const std::runtime_error &) {
                throw SubgraphError(hid, "projected hyperedge cannot be decomposed: " +
                                             std::to_string(hid));
            }
            double p = dem.edges[size_t(hid)].probability;
            for (int e : sol.edges) {
                const auto &edge = sub.graph.edges[size_t(e)];
                auto key = std::make_pair(std::make_pair(edge.a, edge.b < 0 ? -1 : edge.b),
                                          edge.in_obs);
                auto norm = key;
                if (norm.first.second >= 0 && norm.first.second < norm.first.first) {
                    std::swap(norm.first.first, norm.first.second);
                }
                auto it = acc.find(norm);
                if (it != acc.end()) {
                    double q = it->second.probability;
                    it->second.probability = q * (1 - p) + p * (1 - q);
                    it->second.sources.push_back(hid);
                }
            }
        }
        emit();
    }
    return sub;
}

bool single_lom_decode(const DecodingSubgraph &sub, const std::vector<int> &defects) {
    MatchingSolution sol = decode_graph(sub.graph, defects);
    return sol.obs_parity;
}

size_t LomPlan::observable_index(const ObservableSpec &spec) const {
    for (size_t i = 0; i < observables.size(); i++) {
        if (observables[i] == spec) {
            return i;
        }
    }
    throw std::invalid_argument("observable not in plan: " + spec.str());
}

LomPlan plan_lom(const BareCircuit &circuit, const Realization &r,
                 const std::vector<ObservableSpec> &requested) {
    LomPlan plan;
    plan.requested = requested;
    std::set<ObservableSpec> declared;
    auto declare = [&](const ObservableSpec &spec) {
        if (declared.insert(spec).second) {
            plan.observables.push_back(spec);
        }
    };
    std::vector<ObservableSpec> coin_pool;  // earlier coin-tossed singletons
    std::vector<int> coin_ids;
    for (const auto &m : circuit.measurements) {
        ObservableSpec self{{m.id}};
        LomPlan::MeasurementPlan mp;
        if (!is_fragile(circuit, self, r).fragile) {
            mp.kind = LomPlan::MeasurementPlan::Kind::Reliable;
            mp.decoded = self;
            declare(self);
        } else {
            auto completion = find_reliable_completion(circuit, self, coin_pool, r);
            if (completion.has_value() && !completion->empty()) {
                ObservableSpec product = self;
                for (size_t idx : *completion) {
                    mp.completion.push_back(coin_ids[idx]);
                    for (int mid : coin_pool[idx].measurements) {
                        if (!product.measurements.insert(mid).second) {
                            product.measurements.erase(mid);
                        }
                    }
                }
                mp.kind = LomPlan::MeasurementPlan::Kind::InferredByProduct;
                mp.decoded = product;
                declare(product);
            } else {
                mp.kind = LomPlan::MeasurementPlan::Kind::CoinToss;
                coin_pool.push_back(self);
                coin_ids.push_back(m.id);
            }
        }
        plan.per_measurement.push_back(std::move(mp));
    }
    for (const auto &spec : requested) {
        if (is_fragile(circuit, spec, r).fragile) {
            throw std::invalid_argument("requested observable is fragile: " + spec.str());
        }
        declare(spec);
    }
    return plan;
}

std::vector<ObservableSpec> choose_generating_set(const BareCircuit &circuit,
                                                  const Realization &r,
                                                  const std::vector<ObservableSpec> &requested) {
    size_t n_meas = circuit.measurements.size();
    // Parity matrix columns per measurement; reliable observables form the
    // kernel of the induced linear map.
    std::vector<std::vector<bool>> col(n_meas);
    for (size_t i = 0; i < n_meas; i++) {
        col[i] = fragility_parities(circuit, ObservableSpec{{int(i) + 1}}, r);
    }
    size_t n_gen = col.empty() ? 0 : col[0].size();
    auto parity_of = [&](const ObservableSpec &spec) {
        std::vector<bool> v(n_gen, false);
        for (int mid : spec.measurements) {
            for (size_t g = 0; g < n_gen; g++) {
                v[g] = v[g] ^ col[size_t(mid) - 1][g];
            }
        }
        return v;
    };
    // Kernel basis by eliminating the parity matrix over measurement vectors.
    struct Vec {
        std::vector<bool> meas;    // measurement-set vector
        std::vector<bool> parity;  // current residual parity vector
    };
    std::vector<Vec> work;
    for (size_t i = 0; i < n_meas; i++) {
        Vec v;
        v.meas.assign(n_meas, false);
        v.meas[i] = true;
        v.parity = col[i];
        work.push_back(std::move(v));
    }
    std::vector<Vec> kernel;
    std::vector<Vec> pivots;  // with pivot positions
    std::vector<size_t> pivot_pos;
    for (auto &v : work) {
        for (size_t k = 0; k < pivots.size(); k++) {
            if (v.parity[pivot_pos[k]]) {
                for (size_t g = 0; g < n_gen; g++) {
                    v.parity[g] = v.parity[g] ^ pivots[k].parity[g];
                }
                for (size_t mth = 0; mth < n_meas; mth++) {
                    v.meas[mth] = v.meas[mth] ^ pivots[k].meas[mth];
                }
            }
        }
        size_t first = n_gen;
        for (size_t g = 0; g < n_gen; g++) {
            if (v.parity[g]) {
                first = g;
                break;
            }
        }
        if (first == n_gen) {
            kernel.push_back(v);
        } else {
            pivots.push_back(v);
            pivot_pos.push_back(first);
        }
    }
    // Assemble a basis of the kernel containing the requested vectors first.
    GF2Span span(n_meas);
    std::vector<ObservableSpec> out;
    auto as_words = [&](const std::vector<bool> &v) {
        std::vector<uint64_t> w((n_meas + 63) / 64, 0);
        for (size_t i = 0; i < n_meas; i++) {
            if (v[i]) {
                w[i >> 6] |= uint64_t{1} << (i & 63);
            }
        }
        return w;
    };
    for (const auto &spec : requested) {
        auto pv = parity_of(spec);
        if (std::find(pv.begin(), pv.end(), true) != pv.end()) {
            throw std::invalid_argument("requested observable is fragile: " + spec.str());
        }
        std::vector<bool> mv(n_meas, false);
        for (int mid : spec.measurements) {
            mv[size_t(mid) - 1] = true;
        }
        if (span.insert(as_words(mv))) {
            out.push_back(spec);
        }
    }
    for (const auto &v : kernel) {
        if (span.insert(as_words(v.meas))) {
            ObservableSpec spec;
            for (size_t i = 0; i < n_meas; i++) {
                if (v.meas[i]) {
                    spec.measurements.insert(int(i) + 1);
                }
            }
            out.push_back(spec);
        }
    }
    return out;
}

LomDecoder::LomDecoder(const DecodingHypergraph &dem, LomPlan plan, HyperedgePolicy policy)
    : dem_(&dem), plan_(std::move(plan)) {
    instances_.resize(plan_.observables.size());
    for (size_t k = 0; k < plan_.observables.size(); k++) {
        // Match the plan's observables to the hypergraph's declaration order.
        size_t dem_index = SIZE_MAX;
        for (size_t j = 0; j < dem.observables.size(); j++) {
            if (dem.observables[j] == plan_.observables[k]) {
                dem_index = j;
                break;
            }
        }
        if (dem_index == SIZE_MAX) {
            throw std::invalid_argument("hypergraph does not declare observable " +
                                        plan_.observables[k].str());
        }
        auto inst = std::make_unique<Instance>();
        inst->sub = extract_subgraph(dem, dem_index, policy);
        inst->engine = std::make_unique<ShortestPathEngine>(inst->sub.graph);
        instances_[k] = std::move(inst);
    }
}

bool LomDecoder::run_instance(size_t observable_index, const std::vector<int> &defects) const {
    const Instance &inst = *instances_[observable_index];
    MatchingSolution sol =
        decode_graph_with_engine(inst.sub.graph, *inst.engine, inst.sub.restrict_defects(defects));
    return sol.obs_parity;
}

bool LomDecoder::decode_observable(const Syndrome &syndrome, size_t observable_index) const {
    return run_instance(observable_index, syndrome.defects);
}

const DecodingSubgraph &LomDecoder::subgraph(size_t observable_index) const {
    return instances_.at(observable_index)->sub;
}

LomPrediction LomDecoder::decode(const Syndrome &syndrome, uint64_t coin_seed) const {
    LomPrediction out;
    std::map<int, bool> flips;  // per measurement id
    for (size_t i = 0; i < plan_.per_measurement.size(); i++) {
        const auto &mp = plan_.per_measurement[i];
        int mid = int(i) + 1;
        LomPrediction::Entry entry;
        entry.spec = ObservableSpec{{mid}};
        switch (mp.kind) {
            case LomPlan::MeasurementPlan::Kind::Reliable: {
                entry.flip = run_instance(plan_.observable_index(mp.decoded), syndrome.defects);
                entry.method = LomPrediction::Method::Decoded;
                break;
            }
            case LomPlan::MeasurementPlan::Kind::InferredByProduct: {
                bool product =
                    run_instance(plan_.observable_index(mp.decoded), syndrome.defects);
                for (int other : mp.completion) {
                    product = product ^ flips.at(other);
                }
                entry.flip = product;
                entry.method = LomPrediction::Method::InferredByProduct;
                break;
            }
            case LomPlan::MeasurementPlan::Kind::CoinToss: {
                entry.flip = mix64(coin_seed ^ mix64(uint64_t(mid) * 0x9e37u)) & 1;
                entry.method = LomPrediction::Method::CoinToss;
                break;
            }
        }
        flips[mid] = entry.flip;
        out.measurements.push_back(std::move(entry));
    }
    for (const auto &spec : plan_.requested) {
        LomPrediction::Entry entry;
        entry.spec = spec;
        entry.flip = run_instance(plan_.observable_index(spec), syndrome.defects);
        entry.method = LomPrediction::Method::Decoded;
        out.requested.push_back(std::move(entry));
    }
    return out;
}

SplittingDecoder::SplittingDecoder(const DecodingHypergraph &dem) : dem_(&dem) {
    graph_.n_vertices = int(dem.n_detectors());
    std::vector<double> edge_prob;
    std::vector<std::pair<int, int>> endpoints;
    std::vector<int> big;  // >2-endpoint hyperedges
    for (const auto &h : dem.edges) {
        if (h.detectors.size() <= 2) {
            int a = h.detectors[0];
            int b = h.detectors.size() == 2 ? h.detectors[1] : -1;
            endpoints.emplace_back(a, b);
            edge_prob.push_back(h.probability);
            edge_hyperedge_.push_back(h.id);
        } else {
            big.push_back(h.id);
        }
    }
    auto rebuild = [&]() {
        graph_.edges.clear();
        for (size_t e = 0; e < endpoints.size(); e++) {
            auto [a, b] = endpoints[e];
            int64_t w = probability_weight(edge_prob[e]);
            if (b < 0) {
                graph_.add_boundary_edge(a, w, int(e));
            } else {
                graph_.add_edge(a, b, w, int(e));
            }
        }
    };
    rebuild();
    // Decompose each hyperedge by matching its own endpoint set, then fold
    // its probability into the decomposition edges (batch application).
    ShortestPathEngine base_engine(graph_);
    for (int hid : big) {
        const Hyperedge &h = dem.edges[size_t(hid)];
        MatchingSolution sol;
        try {
            sol = decode_graph_with_engine(graph_, base_engine, h.detectors);
        } catch (const std::runtime_error &) {
            throw std::runtime_error("hyperedge " + std::to_string(hid) +
                                     " cannot be decomposed in the matchable subgraph");
        }
        decompositions_[hid] = sol.edges;
        double p = h.probability;
        for (int e : sol.edges) {
            int idx = graph_.edges[size_t(e)].payload;
            double cur = edge_prob[size_t(idx)];
            edge_prob[size_t(idx)] = cur * (1 - p) + p * (1 - cur);
        }
    }
    rebuild();
    engine_ = std::make_unique<ShortestPathEngine>(graph_);
}

uint64_t SplittingDecoder::decode(const Syndrome &syndrome) const {
    MatchingSolution sol = decode_graph_with_engine(graph_, *engine_, syndrome.defects);
    uint64_t flips = 0;
    for (int e : sol.edges) {
        int hid = edge_hyperedge_[size_t(graph_.edges[size_t(e)].payload)];
        flips ^= dem_->edges[size_t(hid)].obs_mask;
    }
    return flips;
}

}  // namespace lomatch
