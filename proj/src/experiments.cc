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

#include "lomatch/experiments.h"

#include <stdexcept>

namespace lomatch {

RepeatedGate repeated_gate_from_name(const std::string &name) {
    if (name == "repeated-I" || name == "I") {
        return RepeatedGate::I;
    }
    if (name == "repeated-H" || name == "H") {
        return RepeatedGate::H;
    }
    if (name == "repeated-S" || name == "S") {
        return RepeatedGate::S;
    }
    if (name == "repeated-CNOT" || name == "CNOT") {
        return RepeatedGate::Cnot;
    }
    if (name == "repeated-altCNOT" || name == "altCNOT") {
        return RepeatedGate::AltCnot;
    }
    throw std::invalid_argument("unknown experiment '" + name + "'");
}

BareCircuit gen_repeated_gate(RepeatedGate gate, int d, bool x_basis, int idle_rounds) {
    if (d < 3 || d % 2 == 0) {
        throw std::invalid_argument("code distance must be odd and >= 3");
    }
    bool two_qubit = gate == RepeatedGate::Cnot || gate == RepeatedGate::AltCnot;
    int n = two_qubit ? 2 : 1;
    std::string text;
    auto reset_tok = x_basis ? "R+" : "R0";
    auto meas_tok = x_basis ? "MX" : "MZ";
    {
        std::string line;
        for (int q = 0; q < n; q++) {
            line += (q ? " ; " : "") + std::string(reset_tok) + " " + std::to_string(q);
        }
        text += line + "\n";
    }
    for (int i = 0; i < idle_rounds; i++) {
        std::string line;
        for (int q = 0; q < n; q++) {
            line += (q ? " ; I " : "I ") + std::to_string(q);
        }
        text += line + "\n";
    }
    for (int layer = 0; layer < d + 1; layer++) {
        switch (gate) {
            case RepeatedGate::I:
                text += "I 0\n";
                break;
            case RepeatedGate::H:
                text += "H 0\n";
                break;
            case RepeatedGate::S:
                text += "S 0\n";
                break;
            case RepeatedGate::Cnot:
                text += "CNOT 0 1\n";
                break;
            case RepeatedGate::AltCnot:
                text += (layer % 2 == 0) ? "CNOT 0 1\n" : "CNOT 1 0\n";
                break;
        }
    }
    {
        std::string line;
        for (int q = 0; q < n; q++) {
            line += (q ? " ; " : "") + std::string(meas_tok) + " " + std::to_string(q);
        }
        text += line + "\n";
    }
    return parse_circuit(text);
}

std::vector<ObservableSpec> repeated_gate_observables(const BareCircuit &circuit) {
    std::vector<ObservableSpec> out;
    for (const auto &m : circuit.measurements) {
        out.push_back(ObservableSpec{{m.id}});
    }
    return out;
}

}  // namespace lomatch
