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

#ifndef LOMATCH_REGIONS_H
#define LOMATCH_REGIONS_H

#include <optional>

#include "lomatch/circuit.h"

namespace lomatch {

/// Sparse Pauli region over circuit locations. Location t is the gap after
/// layer t and before layer t+1; a measurement in layer k contributes its
/// Pauli at location k-1, a reset in layer k at location k.
struct PauliRegion {
    std::map<std::pair<int, int>, Pauli> entries;  // (location, qubit) -> Pauli

    Pauli at(int loc, int qubit) const;
    void mul(int loc, int qubit, Pauli p);
    bool empty() const {
        return entries.empty();
    }
    std::string str() const;
};

PauliRegion multiply(const PauliRegion &a, const PauliRegion &b);
bool regions_anticommute(const PauliRegion &a, const PauliRegion &b);

/// One |0> or |+> reset event; reset-T events never form reset stabilizers.
struct ResetEvent {
    int layer;
    int qubit;
    bool plus_basis;  // true for R+, false for R0

    auto operator<=>(const ResetEvent &) const = default;
};

/// A set of reset events acting as one reset stabilizer.
struct ResetStabilizer {
    std::set<ResetEvent> resets;

    /// Pauli representation: X (resp. Z) at the location immediately
    /// following each |+> (resp. |0>) reset.
    PauliRegion pauli_representation() const;
};

/// All single-reset stabilizer generators of the circuit, in layer order.
std::vector<ResetEvent> reset_generators(const BareCircuit &c);

/// Pauli representation of an observable: Z (resp. X) immediately preceding
/// each included Z- (X-) measurement.
PauliRegion observable_representation(const BareCircuit &c, const ObservableSpec &o);

/// Observing region O<- by backpropagation (halts at resets and magic-state
/// preparations). Throws std::invalid_argument if the realization leaves a
/// conditional gate before the observable's last measurement unresolved.
PauliRegion backpropagate(const BareCircuit &c, const ObservableSpec &o, const Realization &r);

/// Reset stabilizing region S-> by forward propagation (halts at
/// measurements and re-resets).
PauliRegion forward_propagate(const BareCircuit &c, const ResetStabilizer &s,
                              const Realization &r);

struct FragilityResult {
    bool fragile = false;
    std::optional<ResetStabilizer> witness;
};

/// Definition check: O is fragile iff O<- anticommutes with some single-reset
/// stabilizer. Checking against single-reset generators suffices since they
/// generate the full reset-stabilizer group.
FragilityResult is_fragile(const BareCircuit &c, const ObservableSpec &o, const Realization &r);

/// Same decision through the dual route: O fragile iff some S-> anticommutes
/// with the Pauli representation of O. The two routes must agree (property
/// tested); this one exists as an independent cross-check.
FragilityResult is_fragile_via_forward(const BareCircuit &c, const ObservableSpec &o,
                                       const Realization &r);

/// Anticommutation parity of O<- against each reset generator, in
/// reset_generators() order. Linear in the observable, so products of
/// observables XOR their vectors.
std::vector<bool> fragility_parities(const BareCircuit &c, const ObservableSpec &o,
                                     const Realization &r);

/// Searches for a subset of `pool` whose product with `o` is reliable, by
/// solving the F2 linear system of fragility parities. Among solutions
/// reachable from the elimination's particular solution and null space (up
/// to 2^16 combinations) returns one of minimum pool-subset cardinality,
/// deterministically. Empty optional if no solution exists.
std::optional<std::vector<size_t>> find_reliable_completion(
    const BareCircuit &c, const ObservableSpec &o, const std::vector<ObservableSpec> &pool,
    const Realization &r);

/// Realization-resolved view of one layer: the Clifford gates that fire
/// (Pauli gates excluded; they act trivially on phase-free regions) and the
/// qubits blocked by resets or measurements.
struct ResolvedLayer {
    CliffordLayer gates;
    std::set<int> reset_qubits;
    std::set<int> measured_qubits;
};

ResolvedLayer resolve_layer_view(const BareCircuit &c, size_t layer, const Realization &r);

}  // namespace lomatch

#endif
