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

#ifndef LOMATCH_EXPERIMENTS_H
#define LOMATCH_EXPERIMENTS_H

#include "lomatch/circuit.h"

namespace lomatch {

enum class RepeatedGate : uint8_t { I, H, S, Cnot, AltCnot };

RepeatedGate repeated_gate_from_name(const std::string &name);

/// Repeated-gate benchmark circuit: reset in `basis`, d+1 gate layers, then a
/// transversal measurement in the same basis. The alternating variant swaps
/// control and target every layer. `idle_rounds` inserts idle layers between
/// the reset and the first gate (used by the windowed decoder's slow-reset
/// precondition).
BareCircuit gen_repeated_gate(RepeatedGate gate, int d, bool x_basis, int idle_rounds = 0);

/// Final observables of the repeated-gate experiment: one per measured
/// logical qubit, in measurement order.
std::vector<ObservableSpec> repeated_gate_observables(const BareCircuit &circuit);

}  // namespace lomatch

#endif
