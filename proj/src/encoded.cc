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

#include "lomatch/encoded.h"

#include <algorithm>
#include <stdexcept>

namespace lomatch {

PauliBits EncodedCircuit::check_op(int reg, bool x_type, int local) const {
    PauliBits op{size_t(n_phys)};
    const auto &support = x_type ? layout.x_support[size_t(local)]
                                 : layout.z_support[size_t(local)];
    for (int data : support) {
        size_t q = size_t(phys_qubit(reg, data));
        if (x_type) {
            op.set_x(q, true);
        } else {
            op.set_z(q, true);
        }
    }
    return op;
}

PauliBits EncodedCircuit::logical_op(int reg, bool x_type) const {
    PauliBits op{size_t(n_phys)};
    const auto &support = x_type ? layout.logical_x : layout.logical_z;
    for (int data : support) {
        size_t q = size_t(phys_qubit(reg, data));
        if (x_type) {
            op.set_x(q, true);
        } else {
            op.set_z(q, true);
        }
    }
    return op;
}

int EncodedCircuit::round_at_or_after(int layer) const {
    for (size_t l = size_t(std::max(layer, 0)); l < layers.size(); l++) {
        if (layers[l].round >= 0) {
            return layers[l].round;
        }
    }
    return -1;
}

int EncodedCircuit::layer_of_round(int round) const {
    for (const auto &l : layers) {
        if (l.round == round) {
            return l.bare_layer;
        }
    }
    return -1;
}

bool EncodedCircuit::reg_active_through_layer(int reg, int layer) const {
    const auto &l = layers[size_t(layer)];
    return std::find(l.participants.begin(), l.participants.end(), reg) !=
           l.participants.end();
}

namespace {

LogicalGate logical_gate_of(ElementKind k) {
    switch (k) {
        case ElementKind::GateH:
            return LogicalGate::H;
        case ElementKind::GateS:
            return LogicalGate::S;
        case ElementKind::GateSdg:
            return LogicalGate::Sdg;
        case ElementKind::GateX:
            return LogicalGate::X;
        case ElementKind::GateZ:
            return LogicalGate::Z;
        case ElementKind::Cnot:
            return LogicalGate::Cnot;
        default:
            throw std::invalid_argument(
                "no fold-transversal lowering for this logical gate (CZ/SWAP are not "
                "implemented on the surface code register)");
    }
}

}  // namespace

EncodedCircuit encode(const BareCircuit &bare, int d, const Realization &r) {
    bare.validate();
    for (const auto &layer : bare.layers) {
        for (const auto &e : layer.elements) {
            if (!e.condition.empty() && !r.covers(e.condition)) {
                throw std::invalid_argument("realization does not fix all conditional gates");
            }
        }
    }
    EncodedCircuit enc;
    enc.layout = build_layout(d);
    enc.n_regs = bare.n_qubits;
    enc.n_phys = enc.n_regs * enc.layout.n();

    std::vector<bool> active(size_t(enc.n_regs), false);
    // Software Pauli frame, one X and one Z bit per register.
    std::vector<bool> frame_x(size_t(enc.n_regs), false);
    std::vector<bool> frame_z(size_t(enc.n_regs), false);
    int next_record = 0;

    for (size_t l = 0; l < bare.layers.size(); l++) {
        LayerLowering low;
        low.bare_layer = int(l);
        std::vector<bool> fresh(size_t(enc.n_regs), false);
        std::vector<bool> read_out(size_t(enc.n_regs), false);
        for (const auto &e : bare.layers[l].elements) {
            if (element_is_reset(e.kind)) {
                char basis = e.kind == ElementKind::Reset0  ? 'Z'
                             : e.kind == ElementKind::ResetPlus ? 'X'
                                                                : 'T';
                low.resets.emplace_back(e.qubit, basis);
                fresh[size_t(e.qubit)] = true;
                continue;
            }
            if (element_is_measurement(e.kind)) {
                low.measured.push_back(LayerLowering::Measured{
                    e.qubit, e.kind == ElementKind::MeasureX, e.measurement_id});
                read_out[size_t(e.qubit)] = true;
                continue;
            }
            if (!bare.element_applies(e, r)) {
                continue;
            }
            LogicalGate g = logical_gate_of(e.kind);
            if (g == LogicalGate::X) {
                frame_x[size_t(e.qubit)] = !frame_x[size_t(e.qubit)];
                continue;
            }
            if (g == LogicalGate::Z) {
                frame_z[size_t(e.qubit)] = !frame_z[size_t(e.qubit)];
                continue;
            }
            CliffordLayer part = physical_layer(
                g, enc.layout, enc.layout.n() * e.qubit,
                e.other >= 0 ? enc.layout.n() * e.other : -1);
            for (const auto &gate : part.gates) {
                low.gates.gates.push_back(gate);
            }
            // Track the frame through the logical gate.
            switch (g) {
                case LogicalGate::H:
                    std::swap(frame_x[size_t(e.qubit)], frame_z[size_t(e.qubit)]);
                    break;
                case LogicalGate::S:
                case LogicalGate::Sdg:
                    frame_z[size_t(e.qubit)] =
                        frame_z[size_t(e.qubit)] ^ frame_x[size_t(e.qubit)];
                    break;
                case LogicalGate::Cnot:
                    frame_x[size_t(e.other)] =
                        frame_x[size_t(e.other)] ^ frame_x[size_t(e.qubit)];
                    frame_z[size_t(e.qubit)] =
                        frame_z[size_t(e.qubit)] ^ frame_z[size_t(e.other)];
                    break;
                default:
                    break;
            }
        }
        // Lowered gate layers are ordered sequences (the fold-transversal H
        // applies a Hadamard sublayer and then a SWAP sublayer on overlapping
        // qubits), so no disjointness check applies here.
        for (int reg = 0; reg < enc.n_regs; reg++) {
            if (active[size_t(reg)] && !read_out[size_t(reg)]) {
                low.participants.push_back(reg);
            }
        }
        bool emits = !low.participants.empty() || !low.measured.empty();
        if (emits) {
            low.round = enc.n_rounds++;
            for (int reg : low.participants) {
                for (size_t i = 0; i < enc.layout.x_checks.size(); i++) {
                    enc.check_rec[{low.round, reg, true, int(i)}] = next_record;
                    enc.records.push_back(PhysRecord{next_record, low.round, reg, false, true,
                                                     int(i), enc.layout.x_checks[i]});
                    next_record++;
                }
                for (size_t i = 0; i < enc.layout.z_checks.size(); i++) {
                    enc.check_rec[{low.round, reg, false, int(i)}] = next_record;
                    enc.records.push_back(PhysRecord{next_record, low.round, reg, false, false,
                                                     int(i), enc.layout.z_checks[i]});
                    next_record++;
                }
            }
            for (const auto &m : low.measured) {
                for (int i = 0; i < enc.layout.n(); i++) {
                    enc.data_rec[{low.round, m.reg, i}] = next_record;
                    enc.records.push_back(PhysRecord{next_record, low.round, m.reg, true,
                                                     m.x_basis, i, enc.layout.data[size_t(i)]});
                    next_record++;
                }
                const auto &rep = m.x_basis ? enc.layout.logical_x : enc.layout.logical_z;
                std::vector<int> lift;
                for (int data : rep) {
                    lift.push_back(enc.data_rec[{low.round, m.reg, data}]);
                }
                enc.observable_lift[m.measurement_id] = lift;
                enc.raw_frame_flip[m.measurement_id] =
                    m.x_basis ? frame_z[size_t(m.reg)] : frame_x[size_t(m.reg)];
            }
        }
        for (int reg = 0; reg < enc.n_regs; reg++) {
            if (fresh[size_t(reg)]) {
                active[size_t(reg)] = true;
                frame_x[size_t(reg)] = false;
                frame_z[size_t(reg)] = false;
            }
            if (read_out[size_t(reg)]) {
                active[size_t(reg)] = false;
            }
        }
        enc.layers.push_back(std::move(low));
    }
    return enc;
}

std::vector<bool> simulate_encoded(const EncodedCircuit &enc, uint64_t seed,
                                   const std::vector<PauliInjection> &injections) {
    Tableau tab(size_t(enc.n_phys), seed);
    std::vector<bool> bits(enc.records.size(), false);
    int n_local = enc.layout.n();
    auto inject = [&](int layer, bool pre_gate) {
        for (const auto &inj : injections) {
            if (inj.layer == layer && inj.pre_gate == pre_gate) {
                PauliBits p{size_t(enc.n_phys)};
                p.set(size_t(enc.phys_qubit(inj.reg, inj.local)), inj.pauli);
                tab.apply_pauli(p);
            }
        }
    };
    for (const auto &low : enc.layers) {
        for (auto [reg, basis] : low.resets) {
            for (int i = 0; i < n_local; i++) {
                size_t q = size_t(enc.phys_qubit(reg, i));
                if (basis == 'X') {
                    tab.reset_x(q);
                } else {
                    tab.reset_z(q);
                }
            }
            if (basis == 'T') {
                // Ideal codeword injection: force every X-check to +1 with a
                // boundary Z-string that commutes with everything else fixed.
                for (size_t c = 0; c < enc.layout.x_checks.size(); c++) {
                    PauliBits op = enc.check_op(reg, true, int(c));
                    if (tab.measure_pauli(op).first) {
                        Coord cc = enc.layout.x_checks[c];
                        PauliBits fix(size_t(enc.n_phys));
                        for (int y2 = cc.y2 + 1; y2 <= 2 * (enc.layout.d - 1); y2 += 2) {
                            int data = enc.layout.data_index(Coord{cc.x2, y2});
                            fix.set_z(size_t(enc.phys_qubit(reg, data)), true);
                        }
                        tab.apply_pauli(fix);
                    }
                }
            }
        }
        inject(low.bare_layer, true);
        tab.apply_layer(low.gates);
        inject(low.bare_layer, false);
        if (low.round < 0) {
            continue;
        }
        for (int reg : low.participants) {
            for (size_t c = 0; c < enc.layout.x_checks.size(); c++) {
                bool b = tab.measure_pauli(enc.check_op(reg, true, int(c))).first;
                bits[size_t(enc.check_rec.at({low.round, reg, true, int(c)}))] = b;
            }
            for (size_t c = 0; c < enc.layout.z_checks.size(); c++) {
                bool b = tab.measure_pauli(enc.check_op(reg, false, int(c))).first;
                bits[size_t(enc.check_rec.at({low.round, reg, false, int(c)}))] = b;
            }
        }
        for (const auto &m : low.measured) {
            for (int i = 0; i < n_local; i++) {
                size_t q = size_t(enc.phys_qubit(m.reg, i));
                bool b = m.x_basis ? tab.measure_x(q) : tab.measure_z(q);
                bits[size_t(enc.data_rec.at({low.round, m.reg, i}))] = b;
            }
        }
    }
    return bits;
}

bool raw_logical_outcome(const EncodedCircuit &enc, int measurement_id,
                         const std::vector<bool> &record_bits) {
    bool v = false;
    for (int rec : enc.observable_lift.at(measurement_id)) {
        v = v ^ record_bits[size_t(rec)];
    }
    return v ^ enc.raw_frame_flip.at(measurement_id);
}

}  // namespace lomatch
