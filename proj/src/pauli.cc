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

#include "lomatch/pauli.h"

#include <set>
#include <sstream>
#include <stdexcept>

namespace lomatch {

char pauli_to_char(Pauli p) {
    switch (p) {
        case Pauli::I:
            return 'I';
        case Pauli::X:
            return 'X';
        case Pauli::Z:
            return 'Z';
        case Pauli::Y:
            return 'Y';
    }
    return '?';
}

Pauli pauli_from_char(char c) {
    switch (c) {
        case 'I':
            return Pauli::I;
        case 'X':
            return Pauli::X;
        case 'Z':
            return Pauli::Z;
        case 'Y':
            return Pauli::Y;
    }
    throw std::invalid_argument(std::string("not a Pauli character: ") + c);
}

std::string PauliString::str() const {
    if (support.empty()) {
        return "I";
    }
    std::ostringstream out;
    bool first = true;
    for (const auto &[q, p] : support) {
        if (!first) {
            out << "*";
        }
        out << pauli_to_char(p) << q;
        first = false;
    }
    return out.str();
}

PauliString multiply(const PauliString &a, const PauliString &b) {
    PauliString out = a;
    for (const auto &[q, p] : b.support) {
        out.mul(q, p);
    }
    return out;
}

bool commutes(const PauliString &a, const PauliString &b) {
    int anti = 0;
    const PauliString &small = a.support.size() <= b.support.size() ? a : b;
    const PauliString &large = a.support.size() <= b.support.size() ? b : a;
    for (const auto &[q, p] : small.support) {
        anti ^= pauli_anticommutes(p, large.at(q));
    }
    return anti == 0;
}

bool gate_is_two_qubit(GateKind k) {
    return k == GateKind::CZ || k == GateKind::CNOT || k == GateKind::SWAP;
}

const char *gate_name(GateKind k) {
    switch (k) {
        case GateKind::H:
            return "H";
        case GateKind::S:
            return "S";
        case GateKind::SDG:
            return "SDG";
        case GateKind::CZ:
            return "CZ";
        case GateKind::CNOT:
            return "CNOT";
        case GateKind::SWAP:
            return "SWAP";
    }
    return "?";
}

void CliffordLayer::add(GateKind k, int q0, int q1) {
    if (gate_is_two_qubit(k)) {
        if (q1 < 0 || q1 == q0) {
            throw std::invalid_argument("two-qubit gate needs two distinct qubits");
        }
    } else if (q1 >= 0) {
        throw std::invalid_argument("single-qubit gate given two qubits");
    }
    gates.push_back(Gate{k, q0, q1});
}

void CliffordLayer::validate() const {
    std::set<int> seen;
    for (const auto &g : gates) {
        if (!seen.insert(g.q0).second) {
            throw std::invalid_argument("qubit appears in two gates of one layer");
        }
        if (gate_is_two_qubit(g.kind) && !seen.insert(g.q1).second) {
            throw std::invalid_argument("qubit appears in two gates of one layer");
        }
    }
}

PauliString conjugate(const PauliString &p, const CliffordLayer &layer, Direction) {
    PauliString out = p;
    for (const auto &g : layer.gates) {
        conjugate_gate_bits(
            g,
            [&](int q) {
                Pauli v = out.at(q);
                return std::pair<bool, bool>(pauli_x_bit(v), pauli_z_bit(v));
            },
            [&](int q, bool x, bool z) { out.set(q, pauli_from_bits(x, z)); });
    }
    return out;
}

}  // namespace lomatch
