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

#include "lomatch/window.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>

#include "lomatch/regions.h"

namespace lomatch {

namespace {

int64_t probability_weight(double p) {
    double w = std::log((1.0 - p) / p);
    return std::max<int64_t>(int64_t(std::llround(w * double(kWeightScale))), 1);
}

/// Latest reset element on `reg` at a layer <= `layer`; returns the kind or
/// nullopt when the register was never reset.
std::optional<ElementKind> activating_reset(const BareCircuit &c, int reg, int layer) {
    std::optional<ElementKind> found;
    for (int l = 0; l <= layer && size_t(l) < c.layers.size(); l++) {
        for (const auto &e : c.layers[size_t(l)].elements) {
            if (e.qubit == reg && element_is_reset(e.kind)) {
                found = e.kind;
            }
        }
    }
    return found;
}

bool is_magic_injection_measurement(const BareCircuit &c, const MeasurementInfo &m) {
    auto kind = activating_reset(c, m.qubit, m.layer);
    return kind.has_value() && *kind == ElementKind::ResetT;
}

}  // namespace

WindowPlan plan_windows(const BareCircuit &circuit, const EncodedCircuit &enc, int commit_width,
                        int buffer_width, double slow_reset_factor, bool synchronize) {
    WindowPlan plan;
    plan.d = enc.layout.d;
    plan.commit_width = commit_width;
    plan.buffer_width = buffer_width;
    plan.n_rounds = enc.n_rounds;
    plan.synchronize = synchronize;
    plan.slow_reset_factor = slow_reset_factor;
    if (2 * commit_width <= plan.d || 2 * buffer_width <= plan.d) {
        throw std::invalid_argument("window widths must exceed d/2 (d=" +
                                    std::to_string(plan.d) + ", widths " +
                                    std::to_string(commit_width) + "/" +
                                    std::to_string(buffer_width) + ")");
    }
    int quiescent = int(std::ceil(slow_reset_factor * plan.d));
    // Slow-reset precondition: non-magic resets wait >= slow_reset_factor*d
    // rounds before the register joins an entangling logical gate.
    for (size_t l = 0; l < circuit.layers.size(); l++) {
        for (const auto &e : circuit.layers[l].elements) {
            if (e.kind != ElementKind::Reset0 && e.kind != ElementKind::ResetPlus) {
                continue;
            }
            int start_round = enc.round_at_or_after(int(l) + 1);
            for (size_t g = l + 1; g < circuit.layers.size(); g++) {
                for (const auto &ge : circuit.layers[g].elements) {
                    bool touches = ge.qubit == e.qubit ||
                                   (element_is_two_qubit(ge.kind) && ge.other == e.qubit);
                    if (!touches || !element_is_two_qubit(ge.kind)) {
                        continue;
                    }
                    int gate_round = enc.layers[g].round;
                    if (gate_round >= 0 && gate_round - start_round < quiescent) {
                        throw std::invalid_argument(
                            "reset of qubit " + std::to_string(e.qubit) + " at layer " +
                            std::to_string(l) + " is followed by an entangling gate after " +
                            std::to_string(gate_round - start_round) +
                            " rounds; earliest legal round is " +
                            std::to_string(start_round + quiescent));
                    }
                }
            }
        }
    }
    // Boundaries every commit_width rounds, leaving at least one round of
    // look-ahead before the final readout.
    std::vector<int> boundaries;
    for (int b = commit_width; b <= plan.n_rounds - 2; b += commit_width) {
        boundaries.push_back(b);
    }
    // Measurement synchronization: magic-state injections and end-of-circuit
    // readouts are exempt; anything else needs synchronize=true and must sit
    // in the last round before a boundary.
    for (const auto &m : circuit.measurements) {
        int round = enc.layers[size_t(m.layer)].round;
        if (round == plan.n_rounds - 1 || is_magic_injection_measurement(circuit, m)) {
            continue;
        }
        bool aligned = false;
        for (int b : boundaries) {
            if (round == b - 1) {
                aligned = true;
                break;
            }
        }
        if (!synchronize || !aligned) {
            throw std::invalid_argument(
                "measurement m" + std::to_string(m.id) + " at round " + std::to_string(round) +
                " creates a fragile forward boundary; synchronize it to the last round before "
                "a window boundary");
        }
    }
    for (size_t i = 0; i < boundaries.size(); i++) {
        WindowPlan::Window w;
        w.t_prev = i == 0 ? 0 : boundaries[i - 1];
        w.t_center = boundaries[i];
        w.t_current = std::min(boundaries[i] + buffer_width, plan.n_rounds);
        plan.windows.push_back(w);
    }
    return plan;
}

int WindowedDecoder::Track::local_vertex(int det) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), det);
    if (it == vertices.end() || *it != det) {
        return -1;
    }
    return int(it - vertices.begin());
}

WindowedDecoder::WindowedDecoder(const DecodingHypergraph &dem, const EncodedCircuit &enc,
                                 const BareCircuit &circuit, const Realization &realization,
                                 WindowPlan plan, bool shortcut_edges)
    : dem_(&dem), enc_(&enc), circuit_(&circuit), realization_(&realization),
      plan_(std::move(plan)) {
    int last_measurement_round = 0;
    for (const auto &m : circuit.measurements) {
        last_measurement_round =
            std::max(last_measurement_round, enc.layers[size_t(m.layer)].round);
    }
    for (const auto &bounds : plan_.windows) {
        if (bounds.t_current > last_measurement_round) {
            continue;  // would fire after every readout; nothing consumes it
        }
        WindowData data;
        data.bounds = bounds;
        int anchor_layer = enc.layer_of_round(bounds.t_center);
        int anchor_loc = anchor_layer - 1;
        for (int reg = 0; reg < enc.n_regs; reg++) {
            if (!circuit.active_at(reg, anchor_loc)) {
                continue;
            }
            for (bool x_type : {true, false}) {
                data.tracks.push_back(build_track(reg, x_type, anchor_layer, bounds.t_prev,
                                                  bounds.t_current, false, -1, shortcut_edges));
            }
        }
        // A hyperedge crossing the center can project into several tracks
        // when the center layer is a fold gate; exactly one track (the first
        // in order) owns its commitment so artificial defects are inferred
        // once.
        std::set<int> owned;
        for (auto &track : data.tracks) {
            for (size_t e = 0; e < track->edge_future.size(); e++) {
                if (track->edge_future[e].empty()) {
                    continue;
                }
                if (!owned.insert(track->edge_hyperedge[e]).second) {
                    track->edge_future[e].clear();
                }
            }
        }
        windows_.push_back(std::move(data));
    }
    for (const auto &m : circuit.measurements) {
        Immediate im;
        im.measurement_id = m.id;
        im.round = enc.layers[size_t(m.layer)].round;
        im.committed_center = 0;
        for (const auto &w : plan_.windows) {
            if (w.t_current <= im.round) {
                im.committed_center = std::max(im.committed_center, w.t_center);
            }
        }
        im.track = build_track(m.qubit, m.x_basis, m.layer, im.committed_center, im.round + 1,
                               true, m.id, shortcut_edges);
        immediates_.push_back(std::move(im));
    }
}

std::unique_ptr<WindowedDecoder::Track> WindowedDecoder::build_track(
    int reg, bool x_type, int anchor_layer, int t_lo, int t_hi, bool anchor_is_measurement,
    int measurement_id, bool shortcut) const {
    const BareCircuit &circuit = *circuit_;
    const Realization &r = *realization_;
    const EncodedCircuit &enc = *enc_;
    auto track_ptr = std::make_unique<Track>();
    Track &track = *track_ptr;
    track.reg = reg;
    track.x_type = x_type;

    // Logical region: phase-free label per (location, register), plus the
    // data records absorbed by commuting transversal measurements.
    std::map<int, PauliString> labels;
    std::set<int> records;
    int loc_lo = t_lo == 0 ? 0 : enc.layer_of_round(t_lo) - 1;
    int anchor_loc = anchor_layer - 1;
    {
        PauliString cur;
        cur.set(reg, x_type ? Pauli::X : Pauli::Z);
        if (anchor_is_measurement) {
            for (int rec : enc.observable_lift.at(measurement_id)) {
                records.insert(rec);
            }
        }
        labels[anchor_loc] = cur;
        // Backward sweep.
        for (int loc = anchor_loc; loc > loc_lo; loc--) {
            ResolvedLayer view = resolve_layer_view(circuit, size_t(loc), r);
            PauliString next = conjugate(labels[loc], view.gates, Direction::Backward);
            for (int q : view.reset_qubits) {
                next.set(q, Pauli::I);
            }
            for (int q : view.measured_qubits) {
                next.set(q, Pauli::I);
            }
            if (next.is_identity()) {
                break;
            }
            labels[loc - 1] = next;
        }
    }
    if (!anchor_is_measurement) {
        // Forward sweep with magic-state peeling.
        PauliString cur = labels[anchor_loc];
        for (int loc = anchor_loc; size_t(loc + 1) < circuit.layers.size(); loc++) {
            int layer = loc + 1;
            int tag_round = enc.round_at_or_after(layer);
            if (tag_round < 0 || tag_round >= t_hi) {
                break;
            }
            ResolvedLayer view = resolve_layer_view(circuit, size_t(layer), r);
            for (int q : view.reset_qubits) {
                cur.set(q, Pauli::I);
            }
            for (int q : view.measured_qubits) {
                Pauli p = cur.at(q);
                if (p == Pauli::I) {
                    continue;
                }
                const Element *me = nullptr;
                for (const auto &e : circuit.layers[size_t(layer)].elements) {
                    if (e.qubit == q && element_is_measurement(e.kind)) {
                        me = &e;
                    }
                }
                Pauli basis = me->kind == ElementKind::MeasureX ? Pauli::X : Pauli::Z;
                if (pauli_anticommutes(p, basis)) {
                    auto prep = activating_reset(circuit, q, layer - 1);
                    if (!prep.has_value() || *prep != ElementKind::ResetT) {
                        // Fragile forward boundary; plan validation only
                        // admits these behind synchronize=true.
                        cur.set(q, Pauli::I);
                        continue;
                    }
                    // Peel onto the magic preparation's closed boundary:
                    // propagate the anticommuting component forward from the
                    // preparation and fold it into the region.
                    Pauli peel = basis == Pauli::Z ? Pauli::X : Pauli::Z;
                    int prep_layer = -1;
                    for (int l = layer - 1; l >= 0 && prep_layer < 0; l--) {
                        for (const auto &e : circuit.layers[size_t(l)].elements) {
                            if (e.qubit == q && e.kind == ElementKind::ResetT) {
                                prep_layer = l;
                                break;
                            }
                        }
                    }
                    PauliString ps;
                    ps.set(q, peel);
                    for (int ploc = prep_layer; ploc <= loc; ploc++) {
                        if (ploc >= loc_lo) {
                            auto &slot = labels[ploc];
                            slot = multiply(slot, ps);
                        }
                        if (ploc == loc) {
                            break;
                        }
                        ResolvedLayer pview = resolve_layer_view(circuit, size_t(ploc + 1), r);
                        for (int pq : pview.reset_qubits) {
                            ps.set(pq, Pauli::I);
                        }
                        for (int pq : pview.measured_qubits) {
                            ps.set(pq, Pauli::I);
                        }
                        ps = conjugate(ps, pview.gates, Direction::Forward);
                    }
                    // Fold the peel into the running operator, cancelling the
                    // anticommuting component at the measurement.
                    for (const auto &[pq, pp] : ps.support) {
                        cur.mul(pq, pp);
                    }
                    p = cur.at(q);
                    if (p != Pauli::I && pauli_anticommutes(p, basis)) {
                        throw std::logic_error("peeling failed to close the boundary");
                    }
                }
                if (cur.at(q) != Pauli::I) {
                    // Commuting support is absorbed into the measurement
                    // records of the logical representative.
                    for (int rec : enc.observable_lift.at(me->measurement_id)) {
                        auto [it, fresh] = records.insert(rec);
                        if (!fresh) {
                            records.erase(it);
                        }
                    }
                    cur.set(q, Pauli::I);
                }
            }
            cur = conjugate(cur, view.gates, Direction::Forward);
            if (cur.is_identity()) {
                break;
            }
            auto &slot = labels[loc + 1];
            slot = multiply(slot, cur);
        }
    }
    track.backward_decomposition.clear();
    if (t_lo > 0) {
        auto it = labels.find(loc_lo);
        if (it != labels.end()) {
            for (const auto &[q, p] : it->second.support) {
                if (pauli_x_bit(p)) {
                    track.backward_decomposition.emplace_back(q, true);
                }
                if (pauli_z_bit(p)) {
                    track.backward_decomposition.emplace_back(q, false);
                }
            }
        }
    }

    // Vertex tags (round, register, detector type) from the labels.
    std::set<std::tuple<int, int, bool>> tags;
    for (const auto &[loc, ps] : labels) {
        int t_tag = enc.round_at_or_after(loc + 1);
        if (t_tag < t_lo || t_tag >= t_hi) {
            continue;
        }
        for (const auto &[q, p] : ps.support) {
            if (pauli_x_bit(p)) {
                tags.insert({t_tag, q, true});
            }
            if (pauli_z_bit(p)) {
                tags.insert({t_tag, q, false});
            }
        }
    }
    const auto &dets = dem_->detector_set.detectors;
    for (const auto &det : dets) {
        if (tags.count({det.t, det.reg, det.x_type})) {
            track.vertices.push_back(det.id);
        }
    }
    track.graph.n_vertices = int(track.vertices.size());

    // Flip test for one mechanism against the logical region.
    auto in_logical_x = [&](int local) {
        const auto &sup = enc.layout.logical_x;
        return std::binary_search(sup.begin(), sup.end(), local);
    };
    auto in_logical_z = [&](int local) {
        const auto &sup = enc.layout.logical_z;
        return std::binary_search(sup.begin(), sup.end(), local);
    };
    auto mech_flips = [&](const ErrorMechanism &m) {
        if (m.kind == ErrorMechanism::RecordFlip) {
            return records.count(m.record) > 0;
        }
        int loc = m.pre_gate ? m.layer - 1 : m.layer;
        auto it = labels.find(loc);
        if (it == labels.end()) {
            return false;
        }
        Pauli label = it->second.at(m.reg);
        if (label == Pauli::I) {
            return false;
        }
        // Canonical lift of the label at this data qubit.
        bool lx = pauli_x_bit(label) && in_logical_x(m.local);
        bool lz = pauli_z_bit(label) && in_logical_z(m.local);
        Pauli at_qubit = pauli_from_bits(lx, lz);
        return at_qubit != Pauli::I && pauli_anticommutes(m.pauli, at_qubit);
    };

    int t_center = anchor_is_measurement ? t_hi : -1;  // windows fill below
    if (!anchor_is_measurement) {
        t_center = enc.layers[size_t(anchor_layer)].round;
    }
    for (const auto &h : dem_->edges) {
        int min_t = dets[size_t(h.detectors.front())].t;
        int max_t = min_t;
        for (int d : h.detectors) {
            min_t = std::min(min_t, dets[size_t(d)].t);
            max_t = std::max(max_t, dets[size_t(d)].t);
        }
        if (min_t < t_lo) {
            continue;  // committed past (closed backward boundary)
        }
        std::vector<int> local;
        for (int d : h.detectors) {
            int lv = track.local_vertex(d);
            if (lv >= 0) {
                local.push_back(lv);
            }
        }
        if (local.empty()) {
            continue;
        }
        if (local.size() > 2) {
            throw SubgraphError(h.id, "window track projection has more than two endpoints: " +
                                          std::to_string(h.id));
        }
        // Mechanisms merged into one hyperedge can disagree on a mid-circuit
        // track flip only at open time-boundaries, where a data error and a
        // measurement error share a defect signature (the fragile-boundary
        // ambiguity). Data errors enumerate first, so taking the first
        // provenance mechanism resolves the flag with region semantics.
        bool flip = h.mechanisms.empty() ? false : mech_flips(dem_->mechanisms[size_t(h.mechanisms[0])]);
        bool commit_obs = flip;
        if (!anchor_is_measurement) {
            commit_obs = flip && max_t < t_center;
        }
        std::vector<int> future;
        if (!anchor_is_measurement && min_t < t_center && max_t >= t_center) {
            for (int d : h.detectors) {
                if (dets[size_t(d)].t >= t_center) {
                    future.push_back(d);
                }
            }
        }
        int64_t w = dem_->uniform_probability ? kWeightScale : probability_weight(h.probability);
        int idx = int(track.edge_future.size());
        if (local.size() == 1) {
            track.graph.add_boundary_edge(local[0], w, idx, commit_obs);
        } else {
            track.graph.add_edge(local[0], local[1], w, idx, commit_obs);
        }
        track.edge_future.push_back(std::move(future));
        track.edge_commit_obs.push_back(commit_obs);
        track.edge_hyperedge.push_back(h.id);
    }
    if (shortcut) {
        // Relabeled coordinates (z, z~) per App-style folding: X-detectors
        // map (x, y) -> (x, y + 1/2), Z-detectors (x, y) -> (y, x + 1/2).
        std::map<std::tuple<int, int, int>, std::vector<int>> by_slice;  // (t, z2, zt2)
        for (size_t i = 0; i < track.vertices.size(); i++) {
            const Detector &det = dets[size_t(track.vertices[i])];
            int z2 = det.x_type ? det.coord.x2 : det.coord.y2;
            int zt2 = (det.x_type ? det.coord.y2 : det.coord.x2) + 1;
            by_slice[{det.t, z2, zt2}].push_back(int(i));
        }
        auto add_shortcut = [&](int a, int b) {
            int idx = int(track.edge_future.size());
            track.graph.add_edge(a, b, kWeightScale, idx, false);
            track.edge_future.emplace_back();
            track.edge_commit_obs.push_back(0);
            track.edge_hyperedge.push_back(-1);
        };
        for (const auto &[key, verts] : by_slice) {
            for (size_t i = 0; i < verts.size(); i++) {
                for (size_t j = i + 1; j < verts.size(); j++) {
                    add_shortcut(verts[i], verts[j]);
                }
            }
            auto [t, z2, zt2] = key;
            auto next = by_slice.find({t + 1, z2, zt2});
            if (next != by_slice.end()) {
                for (int a : verts) {
                    for (int b : next->second) {
                        add_shortcut(a, b);
                    }
                }
            }
        }
    }
    // The engine captures the graph's address; the track lives on the heap
    // so later container growth cannot move it.
    track.engine = std::make_unique<ShortestPathEngine>(track.graph);
    return track_ptr;
}

size_t WindowedDecoder::tracks_in_window(size_t w) const {
    return windows_.at(w).tracks.size();
}

const std::vector<int> &WindowedDecoder::track_vertices(size_t w, size_t track) const {
    return windows_.at(w).tracks.at(track)->vertices;
}

const MatchGraph &WindowedDecoder::track_graph(size_t w, size_t track) const {
    return windows_.at(w).tracks.at(track)->graph;
}

std::vector<std::vector<int>> WindowedDecoder::center_straddlers(size_t w) const {
    std::vector<std::vector<int>> out;
    for (const auto &track : windows_.at(w).tracks) {
        std::vector<int> ids;
        for (size_t e = 0; e < track->edge_future.size(); e++) {
            if (!track->edge_future[e].empty()) {
                ids.push_back(track->edge_hyperedge[e]);
            }
        }
        std::sort(ids.begin(), ids.end());
        out.push_back(std::move(ids));
    }
    return out;
}

std::map<int, bool> WindowedDecoder::decode(const Syndrome &syndrome) const {
    std::set<int> ledger;  // detector-id parity adjustments
    auto adjusted_defects = [&](const Track &track) {
        std::vector<int> out;
        for (int d : syndrome.defects) {
            if (!ledger.count(d) && track.local_vertex(d) >= 0) {
                out.push_back(track.local_vertex(d));
            }
        }
        for (int d : ledger) {
            if (track.local_vertex(d) >= 0 &&
                !std::binary_search(syndrome.defects.begin(), syndrome.defects.end(), d)) {
                out.push_back(track.local_vertex(d));
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    };

    std::map<std::pair<int, bool>, bool> frame;  // (register, x_type) -> flip up to center
    std::map<int, bool> predictions;

    // Event timeline: windows fire when their look-ahead completes,
    // measurements immediately.
    struct Event {
        int time;
        int order;  // windows before measurements at equal time
        int index;
    };
    std::vector<Event> events;
    for (size_t w = 0; w < windows_.size(); w++) {
        events.push_back(Event{windows_[w].bounds.t_current, 0, int(w)});
    }
    for (size_t i = 0; i < immediates_.size(); i++) {
        events.push_back(Event{immediates_[i].round, 1, int(i)});
    }
    std::sort(events.begin(), events.end(), [](const Event &a, const Event &b) {
        return std::tie(a.time, a.order, a.index) < std::tie(b.time, b.order, b.index);
    });

    for (const auto &ev : events) {
        if (ev.order == 0) {
            const WindowData &data = windows_[size_t(ev.index)];
            std::map<std::pair<int, bool>, bool> new_frame;
            std::vector<const Track *> committed_tracks;
            std::vector<MatchingSolution> solutions;
            for (const auto &track_ptr : data.tracks) {
                const Track &track = *track_ptr;
                MatchingSolution sol = decode_graph_with_engine(track.graph, *track.engine,
                                                                adjusted_defects(track));
                bool delta = sol.obs_parity;  // commit-region observing parity
                bool carried = false;
                for (auto [q, xt] : track.backward_decomposition) {
                    auto it = frame.find({q, xt});
                    carried = carried ^ (it != frame.end() && it->second);
                }
                new_frame[{track.reg, track.x_type}] = carried ^ delta;
                committed_tracks.push_back(&track);
                solutions.push_back(std::move(sol));
            }
            // Apply the committed time-like edges after all tracks decoded.
            for (size_t t = 0; t < committed_tracks.size(); t++) {
                const Track &track = *committed_tracks[t];
                for (int e : solutions[t].edges) {
                    int idx = track.graph.edges[size_t(e)].payload;
                    for (int det : track.edge_future[size_t(idx)]) {
                        auto [it, fresh] = ledger.insert(det);
                        if (!fresh) {
                            ledger.erase(it);
                        }
                    }
                }
            }
            frame = std::move(new_frame);
        } else {
            const Immediate &im = immediates_[size_t(ev.index)];
            MatchingSolution sol = decode_graph_with_engine(im.track->graph, *im.track->engine,
                                                            adjusted_defects(*im.track));
            bool flip = sol.obs_parity;
            for (auto [q, xt] : im.track->backward_decomposition) {
                auto it = frame.find({q, xt});
                flip = flip ^ (it != frame.end() && it->second);
            }
            predictions[im.measurement_id] = flip;
        }
    }
    return predictions;
}

}  // namespace lomatch
