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

#include "lomatch/regions.h"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace lomatch {

Pauli PauliRegion::at(int loc, int qubit) const {
    auto it = entries.find({loc, qubit});
    return it == entries.end() ? Pauli::I : it->second;
}

void PauliRegion::mul(int loc, int qubit, Pauli p) {
    auto key = std::make_pair(loc, qubit);
    Pauli v = pauli_mul(at(loc, qubit), p);
    if (v == Pauli::I) {
        entries.erase(key);
    } else {
        entries[key] = v;
    }
}

std::string PauliRegion::str() const {
    std::ostringstream out;
    bool first = true;
    for (const auto &[key, p] : entries) {
        if (!first) {
            out << " ";
        }
        out << "(" << key.first << ",q" << key.second << "):" << pauli_to_char(p);
        first = false;
    }
    return first ? "(empty)" : out.str();
}

PauliRegion multiply(const PauliRegion &a, const PauliRegion &b) {
    PauliRegion out = a;
    for (const auto &[key, p] : b.entries) {
        out.mul(key.first, key.second, p);
    }
    return out;
}

bool regions_anticommute(const PauliRegion &a, const PauliRegion &b) {
    const PauliRegion &small = a.entries.size() <= b.entries.size() ? a : b;
    const PauliRegion &large = a.entries.size() <= b.entries.size() ? b : a;
    int anti = 0;
    for (const auto &[key, p] : small.entries) {
        anti ^= pauli_anticommutes(p, large.at(key.first, key.second));
    }
    return anti != 0;
}

PauliRegion ResetStabilizer::pauli_representation() const {
    PauliRegion out;
    for (const auto &r : resets) {
        out.mul(r.layer, r.qubit, r.plus_basis ? Pauli::X : Pauli::Z);
    }
    return out;
}

std::vector<ResetEvent> reset_generators(const BareCircuit &c) {
    std::vector<ResetEvent> out;
    for (size_t l = 0; l < c.layers.size(); l++) {
        for (const auto &e : c.layers[l].elements) {
            if (e.kind == ElementKind::Reset0) {
                out.push_back(ResetEvent{int(l), e.qubit, false});
            } else if (e.kind == ElementKind::ResetPlus) {
                out.push_back(ResetEvent{int(l), e.qubit, true});
            }
        }
    }
    return out;
}

PauliRegion observable_representation(const BareCircuit &c, const ObservableSpec &o) {
    PauliRegion out;
    for (int id : o.measurements) {
        const auto &m = c.measurement(id);
        out.mul(m.layer - 1, m.qubit, m.x_basis ? Pauli::X : Pauli::Z);
    }
    return out;
}

ResolvedLayer resolve_layer_view(const BareCircuit &c, size_t layer, const Realization &r) {
    ResolvedLayer view;
    for (const auto &e : c.layers.at(layer).elements) {
        if (element_is_reset(e.kind)) {
            view.reset_qubits.insert(e.qubit);
            continue;
        }
        if (element_is_measurement(e.kind)) {
            view.measured_qubits.insert(e.qubit);
            continue;
        }
        if (!c.element_applies(e, r)) {
            continue;
        }
        switch (e.kind) {
            case ElementKind::GateH:
                view.gates.add(GateKind::H, e.qubit);
                break;
            case ElementKind::GateS:
                view.gates.add(GateKind::S, e.qubit);
                break;
            case ElementKind::GateSdg:
                view.gates.add(GateKind::SDG, e.qubit);
                break;
            case ElementKind::GateX:
            case ElementKind::GateZ:
                break;  // Pauli gates act trivially on phase-free regions
            case ElementKind::Cnot:
                view.gates.add(GateKind::CNOT, e.qubit, e.other);
                break;
            case ElementKind::Cz:
                view.gates.add(GateKind::CZ, e.qubit, e.other);
                break;
            case ElementKind::Swap:
                view.gates.add(GateKind::SWAP, e.qubit, e.other);
                break;
            default:
                break;
        }
    }
    return view;
}

PauliRegion backpropagate(const BareCircuit &c, const ObservableSpec &o, const Realization &r) {
    if (o.measurements.empty()) {
        throw std::invalid_argument("observable must be non-empty");
    }
    int last_layer = 0;
    for (int id : o.measurements) {
        last_layer = std::max(last_layer, c.measurement(id).layer);
    }
    // Every conditional gate strictly before the last included measurement
    // must be fixed by the realization.
    for (int l = 0; l < last_layer; l++) {
        for (const auto &e : c.layers[size_t(l)].elements) {
            if (!e.condition.empty() && !r.covers(e.condition)) {
                throw std::invalid_argument(
                    "realization does not fix a conditional gate at layer " + std::to_string(l));
            }
        }
    }
    // Seed entries from measurements (location = layer - 1).
    std::map<int, std::map<int, Pauli>> seeds;  // location -> qubit -> Pauli
    for (int id : o.measurements) {
        const auto &m = c.measurement(id);
        Pauli p = m.x_basis ? Pauli::X : Pauli::Z;
        auto &slot = seeds[m.layer - 1][m.qubit];  // value-initialized to I
        slot = pauli_mul(slot, p);
    }

    PauliRegion region;
    PauliString cur;  // operator at the location currently being visited
    for (int loc = last_layer - 1; loc >= 0; loc--) {
        // Merge measurement seeds at this location.
        if (auto it = seeds.find(loc); it != seeds.end()) {
            for (const auto &[q, p] : it->second) {
                cur.mul(q, p);
            }
        }
        for (const auto &[q, p] : cur.support) {
            region.mul(loc, q, p);
        }
        if (loc == 0) {
            break;
        }
        // Step backward through layer `loc` to location loc-1.
        ResolvedLayer view = resolve_layer_view(c, size_t(loc), r);
        PauliString next = conjugate(cur, view.gates, Direction::Backward);
        for (int q : view.reset_qubits) {
            next.set(q, Pauli::I);
        }
        for (int q : view.measured_qubits) {
            next.set(q, Pauli::I);
        }
        cur = next;
    }
    return region;
}

PauliRegion forward_propagate(const BareCircuit &c, const ResetStabilizer &s,
                              const Realization &r) {
    if (s.resets.empty()) {
        throw std::invalid_argument("reset stabilizer must be non-empty");
    }
    std::map<int, std::map<int, Pauli>> seeds;  // location -> qubit -> Pauli
    int first_loc = int(c.layers.size());
    for (const auto &ev : s.resets) {
        seeds[ev.layer][ev.qubit] = ev.plus_basis ? Pauli::X : Pauli::Z;
        first_loc = std::min(first_loc, ev.layer);
    }
    int last_loc = int(c.layers.size()) - 2;  // final useful location
    PauliRegion region;
    PauliString cur;
    for (int loc = first_loc; loc <= std::max(last_loc, first_loc); loc++) {
        if (loc > first_loc) {
            // Step forward through layer `loc` from location loc-1.
            ResolvedLayer view = resolve_layer_view(c, size_t(loc), r);
            for (int q : view.reset_qubits) {
                cur.set(q, Pauli::I);
            }
            for (int q : view.measured_qubits) {
                cur.set(q, Pauli::I);
            }
            cur = conjugate(cur, view.gates, Direction::Forward);
        }
        if (auto it = seeds.find(loc); it != seeds.end()) {
            for (const auto &[q, p] : it->second) {
                cur.mul(q, p);
            }
        }
        for (const auto &[q, p] : cur.support) {
            region.mul(loc, q, p);
        }
        if (loc > last_loc) {
            break;
        }
    }
    return region;
}

FragilityResult is_fragile(const BareCircuit &c, const ObservableSpec &o, const Realization &r) {
    PauliRegion obs_region = backpropagate(c, o, r);
    for (const auto &gen : reset_generators(c)) {
        ResetStabilizer s{{gen}};
        if (regions_anticommute(obs_region, s.pauli_representation())) {
            return FragilityResult{true, s};
        }
    }
    return FragilityResult{false, std::nullopt};
}

FragilityResult is_fragile_via_forward(const BareCircuit &c, const ObservableSpec &o,
                                       const Realization &r) {
    PauliRegion obs_rep = observable_representation(c, o);
    for (const auto &gen : reset_generators(c)) {
        ResetStabilizer s{{gen}};
        if (regions_anticommute(forward_propagate(c, s, r), obs_rep)) {
            return FragilityResult{true, s};
        }
    }
    return FragilityResult{false, std::nullopt};
}

std::vector<bool> fragility_parities(const BareCircuit &c, const ObservableSpec &o,
                                     const Realization &r) {
    PauliRegion obs_region = backpropagate(c, o, r);
    std::vector<bool> out;
    for (const auto &gen : reset_generators(c)) {
        ResetStabilizer s{{gen}};
        out.push_back(regions_anticommute(obs_region, s.pauli_representation()));
    }
    return out;
}

std::optional<std::vector<size_t>> find_reliable_completion(
    const BareCircuit &c, const ObservableSpec &o, const std::vector<ObservableSpec> &pool,
    const Realization &r) {
    size_t n_gen = reset_generators(c).size();
    std::vector<bool> target = fragility_parities(c, o, r);
    std::vector<std::vector<bool>> cols;
    cols.reserve(pool.size());
    for (const auto &p : pool) {
        cols.push_back(fragility_parities(c, p, r));
    }
    // Solve sum_{i in S} cols[i] = target over F2 by Gaussian elimination on
    // the (n_gen x pool) matrix, deterministic pivot order.
    size_t m = pool.size();
    std::vector<std::vector<bool>> rows(n_gen, std::vector<bool>(m + 1, false));
    for (size_t g = 0; g < n_gen; g++) {
        for (size_t i = 0; i < m; i++) {
            rows[g][i] = cols[i][g];
        }
        rows[g][m] = target[g];
    }
    std::vector<int> pivot_of_col(m, -1);
    size_t rank = 0;
    for (size_t col = 0; col < m && rank < n_gen; col++) {
        size_t pr = rank;
        while (pr < n_gen && !rows[pr][col]) {
            pr++;
        }
        if (pr == n_gen) {
            continue;
        }
        std::swap(rows[rank], rows[pr]);
        for (size_t g2 = 0; g2 < n_gen; g2++) {
            if (g2 != rank && rows[g2][col]) {
                for (size_t k = col; k <= m; k++) {
                    rows[g2][k] = rows[g2][k] ^ rows[rank][k];
                }
            }
        }
        pivot_of_col[col] = int(rank);
        rank++;
    }
    for (size_t g = rank; g < n_gen; g++) {
        if (rows[g][m]) {
            return std::nullopt;  // inconsistent system
        }
    }
    std::vector<bool> particular(m, false);
    std::vector<size_t> free_cols;
    for (size_t col = 0; col < m; col++) {
        if (pivot_of_col[col] >= 0) {
            particular[col] = rows[size_t(pivot_of_col[col])][m];
        } else {
            free_cols.push_back(col);
        }
    }
    // Null-space basis vector for each free column.
    std::vector<std::vector<bool>> null_basis;
    for (size_t fc : free_cols) {
        std::vector<bool> v(m, false);
        v[fc] = true;
        for (size_t col = 0; col < m; col++) {
            if (pivot_of_col[col] >= 0) {
                v[col] = rows[size_t(pivot_of_col[col])][fc];
            }
        }
        null_basis.push_back(std::move(v));
    }
    auto weight = [](const std::vector<bool> &v) {
        return size_t(std::count(v.begin(), v.end(), true));
    };
    std::vector<bool> best = particular;
    if (null_basis.size() <= 16) {
        for (uint32_t mask = 1; mask < (uint32_t{1} << null_basis.size()); mask++) {
            std::vector<bool> cand = particular;
            for (size_t b = 0; b < null_basis.size(); b++) {
                if ((mask >> b) & 1) {
                    for (size_t i = 0; i < m; i++) {
                        cand[i] = cand[i] ^ null_basis[b][i];
                    }
                }
            }
            if (weight(cand) < weight(best)) {
                best = cand;
            }
        }
    }
    std::vector<size_t> subset;
    for (size_t i = 0; i < m; i++) {
        if (best[i]) {
            subset.push_back(i);
        }
    }
    return subset;
}

}  // namespace lomatch
