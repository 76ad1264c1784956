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

#ifndef LOMATCH_PAULI_H
#define LOMATCH_PAULI_H

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lomatch {

/// Single-qubit Pauli, phase-free. Encoded as (x bit, z bit): X=01, Z=10, Y=11.
enum class Pauli : uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

inline bool pauli_x_bit(Pauli p) {
    return static_cast<uint8_t>(p) & 1;
}
inline bool pauli_z_bit(Pauli p) {
    return (static_cast<uint8_t>(p) >> 1) & 1;
}
inline Pauli pauli_from_bits(bool x, bool z) {
    return static_cast<Pauli>((static_cast<uint8_t>(z) << 1) | static_cast<uint8_t>(x));
}
/// Phase-free product; equal Paulis cancel to identity.
inline Pauli pauli_mul(Pauli a, Pauli b) {
    return static_cast<Pauli>(static_cast<uint8_t>(a) ^ static_cast<uint8_t>(b));
}
/// True iff the two single-qubit Paulis anticommute.
inline bool pauli_anticommutes(Pauli a, Pauli b) {
    return (pauli_x_bit(a) & pauli_z_bit(b)) ^ (pauli_z_bit(a) & pauli_x_bit(b));
}
char pauli_to_char(Pauli p);
Pauli pauli_from_char(char c);

/// Sparse phase-free Pauli operator over integer qubit ids. Identity entries
/// are never stored.
struct PauliString {
    std::map<int, Pauli> support;

    bool is_identity() const {
        return support.empty();
    }
    Pauli at(int qubit) const {
        auto it = support.find(qubit);
        return it == support.end() ? Pauli::I : it->second;
    }
    void set(int qubit, Pauli p) {
        if (p == Pauli::I) {
            support.erase(qubit);
        } else {
            support[qubit] = p;
        }
    }
    void mul(int qubit, Pauli p) {
        set(qubit, pauli_mul(at(qubit), p));
    }
    bool operator==(const PauliString &other) const = default;
    std::string str() const;
};

PauliString multiply(const PauliString &a, const PauliString &b);
bool commutes(const PauliString &a, const PauliString &b);

enum class GateKind : uint8_t { H, S, SDG, CZ, CNOT, SWAP };

bool gate_is_two_qubit(GateKind k);
const char *gate_name(GateKind k);

/// One primitive gate over one or two qubits.
struct Gate {
    GateKind kind;
    int q0 = -1;
    int q1 = -1;  // second qubit for CZ/CNOT/SWAP (control is q0 for CNOT)
};

/// Layer of primitive Clifford gates over pairwise disjoint qubit sets.
struct CliffordLayer {
    std::vector<Gate> gates;

    void add(GateKind k, int q0, int q1 = -1);
    /// Throws std::invalid_argument if a qubit appears in two gates.
    void validate() const;
};

enum class Direction : uint8_t { Forward, Backward };

/// Heisenberg image of `p` under the layer, phase-free. For the supported
/// gate set the phase-free action is involutive, so both directions coincide;
/// the parameter is kept for call-site clarity.
PauliString conjugate(const PauliString &p, const CliffordLayer &layer, Direction dir);

/// In-place single-gate conjugation of an (x, z) bit pair table accessed via
/// callbacks. Shared between the sparse and dense representations.
template <typename GetXZ, typename SetXZ>
void conjugate_gate_bits(const Gate &g, GetXZ get, SetXZ set) {
    auto [x0, z0] = get(g.q0);
    switch (g.kind) {
        case GateKind::H:
            set(g.q0, z0, x0);
            break;
        case GateKind::S:
        case GateKind::SDG:
            set(g.q0, x0, z0 ^ x0);
            break;
        case GateKind::CZ: {
            auto [x1, z1] = get(g.q1);
            set(g.q0, x0, z0 ^ x1);
            set(g.q1, x1, z1 ^ x0);
            break;
        }
        case GateKind::CNOT: {
            auto [x1, z1] = get(g.q1);
            set(g.q0, x0, z0 ^ z1);
            set(g.q1, x1 ^ x0, z1);
            break;
        }
        case GateKind::SWAP: {
            auto [x1, z1] = get(g.q1);
            set(g.q0, x1, z1);
            set(g.q1, x0, z0);
            break;
        }
    }
}

}  // namespace lomatch

#endif
