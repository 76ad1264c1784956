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

#ifndef LOMATCH_CIRCUIT_H
#define LOMATCH_CIRCUIT_H

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lomatch/pauli.h"

namespace lomatch {

enum class ElementKind : uint8_t {
    Reset0,     // |0> preparation
    ResetPlus,  // |+> preparation
    ResetT,     // fault-tolerantly prepared magic state; blocks propagation
    GateH,
    GateS,
    GateSdg,
    GateX,
    GateZ,
    Cnot,  // qubit is control, other is target
    Cz,
    Swap,
    MeasureZ,
    MeasureX,
    Idle,
};

bool element_is_reset(ElementKind k);
bool element_is_measurement(ElementKind k);
bool element_is_gate(ElementKind k);
bool element_is_two_qubit(ElementKind k);

/// One per-qubit element of a circuit layer. Two-qubit gates appear once,
/// anchored at `qubit` with the partner in `other`. A conditional gate
/// carries the measurement ids whose XOR decides whether it is applied.
struct Element {
    ElementKind kind = ElementKind::Idle;
    int qubit = 0;
    int other = -1;
    int measurement_id = -1;       // 1-based, for measurements
    std::set<int> condition;       // empty = unconditional
};

struct Layer {
    std::vector<Element> elements;
};

/// Assignment of outcome bits to conditioning measurements.
struct Realization {
    std::map<int, bool> bits;

    bool value(int measurement_id) const;
    bool covers(const std::set<int> &ids) const;
};

/// A non-empty set of measurement ids whose XOR is the observable's outcome.
struct ObservableSpec {
    std::set<int> measurements;

    auto operator<=>(const ObservableSpec &) const = default;
    std::string str() const;
};

struct MeasurementInfo {
    int id;           // 1-based
    int layer;        // layer index containing it
    int qubit;
    bool x_basis;     // MX vs MZ
    bool conditions_something = false;
};

/// Bare logical circuit: ordered layers of resets, Clifford gates and
/// destructive measurements. Measurement ids m1, m2, ... are assigned in
/// program order (within a layer, in element order).
struct BareCircuit {
    std::vector<Layer> layers;
    std::vector<MeasurementInfo> measurements;  // index i holds id i+1
    int n_qubits = 0;

    const MeasurementInfo &measurement(int id) const;
    /// True if the gate fires under the realization (XOR of condition bits,
    /// or unconditionally when the condition set is empty).
    bool element_applies(const Element &e, const Realization &r) const;
    /// qubit activity: active(q, loc) means q holds state at integer
    /// location loc (after layer `loc`, before layer `loc+1`).
    bool active_at(int qubit, int loc) const;
    void validate() const;
    std::string to_text() const;
};

struct ParseError {
    int line;
    int column;
    std::string message;
};

/// Parses the circuit text format: one line per layer, elements separated by
/// ';', tokens R0/R+/RT/H/S/SDG/X/Z/CNOT/CZ/SWAP/MZ/MX, conditional form
/// `COND <gate> <args> ON m3^m7`, `#` comments. Throws CircuitParseError.
BareCircuit parse_circuit(const std::string &text);

class CircuitParseError : public std::exception {
   public:
    explicit CircuitParseError(ParseError e);
    const char *what() const noexcept override {
        return message_.c_str();
    }
    const ParseError &error() const {
        return err_;
    }

   private:
    ParseError err_;
    std::string message_;
};

}  // namespace lomatch

#endif
