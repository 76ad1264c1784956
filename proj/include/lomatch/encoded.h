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

#ifndef LOMATCH_ENCODED_H
#define LOMATCH_ENCODED_H

#include <map>
#include <tuple>

#include "lomatch/circuit.h"
#include "lomatch/layout.h"
#include "lomatch/tableau.h"

namespace lomatch {

/// One measurement record of the encoded circuit.
struct PhysRecord {
    int id;
    int round;  // detector-time index
    int reg;
    bool is_data;  // data-qubit measurement (vs check ancilla outcome)
    bool x_type;   // X-check / X-basis data measurement
    int local;     // check index or data index within the register's layout
    Coord coord;
};

/// Lowering summary for one bare layer.
///
/// A layer is followed by one ideal QEC round measuring every stabilizer
/// generator of each register active through the layer. Registers freshly
/// reset in the layer join from the next round on; registers measured in the
/// layer are read out transversally instead (their data records stand in for
/// the final round).
struct LayerLowering {
    int bare_layer;
    std::vector<std::pair<int, char>> resets;  // (reg, 'Z'|'X'|'T')
    CliffordLayer gates;                       // physical, realization-resolved
    std::vector<int> participants;             // registers in the check round
    struct Measured {
        int reg;
        bool x_basis;
        int measurement_id;
    };
    std::vector<Measured> measured;
    int round = -1;  // record round index, -1 if the layer emits no records
};

struct EncodedCircuit {
    CodeLayout layout;
    int n_regs = 0;
    int n_phys = 0;  // n_regs * layout.n()
    std::vector<LayerLowering> layers;
    std::vector<PhysRecord> records;
    int n_rounds = 0;

    // (round, reg, x_type, local check) -> record id
    std::map<std::tuple<int, int, bool, int>, int> check_rec;
    // (round, reg, local data) -> record id
    std::map<std::tuple<int, int, int>, int> data_rec;

    // Logical lift of each bare measurement: representative data records.
    std::map<int, std::vector<int>> observable_lift;
    // Software Pauli frame flip of each bare measurement's raw outcome.
    std::map<int, bool> raw_frame_flip;

    int phys_qubit(int reg, int local) const {
        return reg * layout.n() + local;
    }
    /// Stabilizer generator as a dense physical operator.
    PauliBits check_op(int reg, bool x_type, int local) const;
    PauliBits logical_op(int reg, bool x_type) const;
    /// Round index of the first record-emitting layer at or after `layer`
    /// (-1 if none). Bare location t maps to detector time
    /// round_at_or_after(t + 1).
    int round_at_or_after(int layer) const;
    int layer_of_round(int round) const;
    bool reg_active_through_layer(int reg, int layer) const;
};

/// Lowers a bare circuit onto distance-d surface-code registers. Conditional
/// gates are resolved with the realization; conditional and plain Pauli gates
/// go into the software frame. Throws std::invalid_argument for bare gates
/// with no fold-transversal implementation (CZ, SWAP).
EncodedCircuit encode(const BareCircuit &bare, int d, const Realization &r);

/// A Pauli error inserted at a specific point of the encoded circuit, used
/// to cross-check symbolic error propagation against the simulator.
struct PauliInjection {
    int layer;
    bool pre_gate;  // before the layer's gates vs before its QEC round
    int reg;
    int local;
    Pauli pauli;
};

/// Noiseless stabilizer simulation of the encoded circuit; returns one
/// outcome bit per record. Magic-state preparations are modeled as ideal
/// codeword injections with all check values fixed to +1. Injected Paulis
/// flip signs only, so the random-outcome stream is unaffected by them.
std::vector<bool> simulate_encoded(const EncodedCircuit &enc, uint64_t seed,
                                   const std::vector<PauliInjection> &injections = {});

/// Raw outcome of a bare measurement's logical lift from simulated record
/// bits, including the software Pauli frame correction.
bool raw_logical_outcome(const EncodedCircuit &enc, int measurement_id,
                         const std::vector<bool> &record_bits);

}  // namespace lomatch

#endif
