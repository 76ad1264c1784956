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

#include "lomatch/tableau.h"

#include <bit>
#include <stdexcept>

namespace lomatch {

PauliBits::PauliBits(size_t n_qubits) : n(n_qubits), x(words(n_qubits)), z(words(n_qubits)) {
}

void PauliBits::set_x(size_t q, bool v) {
    uint64_t mask = uint64_t{1} << (q & 63);
    if (v) {
        x[q >> 6] |= mask;
    } else {
        x[q >> 6] &= ~mask;
    }
}

void PauliBits::set_z(size_t q, bool v) {
    uint64_t mask = uint64_t{1} << (q & 63);
    if (v) {
        z[q >> 6] |= mask;
    } else {
        z[q >> 6] &= ~mask;
    }
}

void PauliBits::mul(const PauliBits &other) {
    for (size_t w = 0; w < x.size(); w++) {
        x[w] ^= other.x[w];
        z[w] ^= other.z[w];
    }
}

bool PauliBits::anticommutes_with(const PauliBits &other) const {
    uint64_t acc = 0;
    for (size_t w = 0; w < x.size(); w++) {
        acc ^= (x[w] & other.z[w]) ^ (z[w] & other.x[w]);
    }
    return std::popcount(acc) & 1;
}

bool PauliBits::is_identity() const {
    for (size_t w = 0; w < x.size(); w++) {
        if (x[w] | z[w]) {
            return false;
        }
    }
    return true;
}

std::vector<size_t> PauliBits::support() const {
    std::vector<size_t> out;
    for (size_t q = 0; q < n; q++) {
        if (get_x(q) || get_z(q)) {
            out.push_back(q);
        }
    }
    return out;
}

void PauliBits::conjugate_layer(const CliffordLayer &layer) {
    for (const auto &g : layer.gates) {
        conjugate_gate_bits(
            g,
            [&](int q) {
                return std::pair<bool, bool>(get_x(size_t(q)), get_z(size_t(q)));
            },
            [&](int q, bool xv, bool zv) {
                set_x(size_t(q), xv);
                set_z(size_t(q), zv);
            });
    }
}

Tableau::Tableau(size_t n_qubits, uint64_t seed)
    : n_(n_qubits),
      w_(PauliBits::words(n_qubits)),
      xs_(2 * n_qubits, std::vector<uint64_t>(PauliBits::words(n_qubits))),
      zs_(2 * n_qubits, std::vector<uint64_t>(PauliBits::words(n_qubits))),
      phase_(2 * n_qubits, 0),
      rng_(seed) {
    // Destabilizer i = X_i, stabilizer i = Z_i: the all-zeros state.
    for (size_t i = 0; i < n_; i++) {
        xs_[i][i >> 6] |= uint64_t{1} << (i & 63);
        zs_[n_ + i][i >> 6] |= uint64_t{1} << (i & 63);
    }
}

namespace {
inline bool bit(const std::vector<uint64_t> &v, size_t q) {
    return (v[q >> 6] >> (q & 63)) & 1;
}
inline void bit_xor(std::vector<uint64_t> &v, size_t q, bool b) {
    v[q >> 6] ^= uint64_t(b) << (q & 63);
}
inline void bit_set(std::vector<uint64_t> &v, size_t q, bool b) {
    uint64_t mask = uint64_t{1} << (q & 63);
    if (b) {
        v[q >> 6] |= mask;
    } else {
        v[q >> 6] &= ~mask;
    }
}

// i-exponent in the product W(p1)*W(p2) with p encoded as (z<<1)|x.
constexpr int8_t kMulPhase[16] = {
    // p2:  I  X  Z  Y     p1:
    0, 0,  0, 0,   // I
    0, 0,  -1, 1,  // X
    0, 1,  0, -1,  // Z
    0, -1, 1, 0,   // Y
};
}  // namespace

bool Tableau::row_anticommutes(size_t row, const PauliBits &p) const {
    uint64_t acc = 0;
    for (size_t w = 0; w < w_; w++) {
        acc ^= (xs_[row][w] & p.z[w]) ^ (zs_[row][w] & p.x[w]);
    }
    return std::popcount(acc) & 1;
}

void Tableau::rowsum_into(std::vector<uint64_t> &tx, std::vector<uint64_t> &tz, uint8_t &tp,
                          size_t src_row) const {
    int acc = phase_[src_row];
    for (size_t q = 0; q < n_; q++) {
        int p1 = (int(bit(zs_[src_row], q)) << 1) | int(bit(xs_[src_row], q));
        int p2 = (int(bit(tz, q)) << 1) | int(bit(tx, q));
        acc += kMulPhase[(p1 << 2) | p2];
    }
    for (size_t w = 0; w < w_; w++) {
        tx[w] ^= xs_[src_row][w];
        tz[w] ^= zs_[src_row][w];
    }
    tp = uint8_t((int(tp) + acc) % 4 + 4) % 4;
}

void Tableau::rowsum(size_t target, size_t src) {
    rowsum_into(xs_[target], zs_[target], phase_[target], src);
}

void Tableau::apply_h(size_t q) {
    for (size_t r = 0; r < 2 * n_; r++) {
        bool xv = bit(xs_[r], q), zv = bit(zs_[r], q);
        if (xv && zv) {
            phase_[r] = (phase_[r] + 2) & 3;
        }
        bit_set(xs_[r], q, zv);
        bit_set(zs_[r], q, xv);
    }
}

void Tableau::apply_s(size_t q) {
    for (size_t r = 0; r < 2 * n_; r++) {
        bool xv = bit(xs_[r], q), zv = bit(zs_[r], q);
        if (xv && zv) {
            phase_[r] = (phase_[r] + 2) & 3;
        }
        bit_set(zs_[r], q, zv ^ xv);
    }
}

void Tableau::apply_sdg(size_t q) {
    for (size_t r = 0; r < 2 * n_; r++) {
        bool xv = bit(xs_[r], q), zv = bit(zs_[r], q);
        if (xv && !zv) {
            phase_[r] = (phase_[r] + 2) & 3;
        }
        bit_set(zs_[r], q, zv ^ xv);
    }
}

void Tableau::apply_cnot(size_t c, size_t t) {
    for (size_t r = 0; r < 2 * n_; r++) {
        bool xc = bit(xs_[r], c), zc = bit(zs_[r], c);
        bool xt = bit(xs_[r], t), zt = bit(zs_[r], t);
        if (xc && zt && (xt ^ zc ^ 1)) {
            phase_[r] = (phase_[r] + 2) & 3;
        }
        bit_set(xs_[r], t, xt ^ xc);
        bit_set(zs_[r], c, zc ^ zt);
    }
}

void Tableau::apply_cz(size_t a, size_t b) {
    apply_h(b);
    apply_cnot(a, b);
    apply_h(b);
}

void Tableau::apply_swap(size_t a, size_t b) {
    for (size_t r = 0; r < 2 * n_; r++) {
        bool xa = bit(xs_[r], a), za = bit(zs_[r], a);
        bool xb = bit(xs_[r], b), zb = bit(zs_[r], b);
        bit_set(xs_[r], a, xb);
        bit_set(zs_[r], a, zb);
        bit_set(xs_[r], b, xa);
        bit_set(zs_[r], b, za);
    }
}

void Tableau::apply_layer(const CliffordLayer &layer) {
    for (const auto &g : layer.gates) {
        switch (g.kind) {
            case GateKind::H:
                apply_h(size_t(g.q0));
                break;
            case GateKind::S:
                apply_s(size_t(g.q0));
                break;
            case GateKind::SDG:
                apply_sdg(size_t(g.q0));
                break;
            case GateKind::CZ:
                apply_cz(size_t(g.q0), size_t(g.q1));
                break;
            case GateKind::CNOT:
                apply_cnot(size_t(g.q0), size_t(g.q1));
                break;
            case GateKind::SWAP:
                apply_swap(size_t(g.q0), size_t(g.q1));
                break;
        }
    }
}

void Tableau::apply_pauli(const PauliBits &p) {
    for (size_t r = 0; r < 2 * n_; r++) {
        if (row_anticommutes(r, p)) {
            phase_[r] = (phase_[r] + 2) & 3;
        }
    }
}

std::pair<bool, bool> Tableau::measure_pauli(const PauliBits &p) {
    if (p.n != n_) {
        throw std::invalid_argument("measure_pauli: operator size mismatch");
    }
    size_t pivot = 2 * n_;
    for (size_t r = n_; r < 2 * n_; r++) {
        if (row_anticommutes(r, p)) {
            pivot = r;
            break;
        }
    }
    if (pivot < 2 * n_) {
        bool outcome = rng_() & 1;
        for (size_t r = 0; r < 2 * n_; r++) {
            if (r != pivot && row_anticommutes(r, p)) {
                rowsum(r, pivot);
            }
        }
        xs_[pivot - n_] = xs_[pivot];
        zs_[pivot - n_] = zs_[pivot];
        phase_[pivot - n_] = phase_[pivot];
        xs_[pivot] = p.x;
        zs_[pivot] = p.z;
        phase_[pivot] = outcome ? 2 : 0;
        return {outcome, false};
    }
    // Deterministic: accumulate the stabilizer product matching p.
    std::vector<uint64_t> tx(w_), tz(w_);
    uint8_t tp = 0;
    for (size_t i = 0; i < n_; i++) {
        if (row_anticommutes(i, p)) {
            rowsum_into(tx, tz, tp, n_ + i);
        }
    }
    if (tx != p.x || tz != p.z) {
        throw std::logic_error("tableau invariant broken in deterministic measurement");
    }
    return {tp == 2, true};
}

bool Tableau::measure_z(size_t q) {
    PauliBits p(n_);
    p.set_z(q, true);
    return measure_pauli(p).first;
}

bool Tableau::measure_x(size_t q) {
    PauliBits p(n_);
    p.set_x(q, true);
    return measure_pauli(p).first;
}

void Tableau::reset_z(size_t q) {
    if (measure_z(q)) {
        PauliBits flip(n_);
        flip.set_x(q, true);
        apply_pauli(flip);
    }
}

void Tableau::reset_x(size_t q) {
    if (measure_x(q)) {
        PauliBits flip(n_);
        flip.set_z(q, true);
        apply_pauli(flip);
    }
}

std::vector<bool> tableau_run(size_t n_qubits, const std::vector<TableauOp> &program,
                              uint64_t seed) {
    for (const auto &op : program) {
        if (op.kind != TableauOp::Layer && op.qubit >= n_qubits) {
            throw std::invalid_argument("tableau_run: qubit out of range");
        }
        if (op.kind == TableauOp::Layer) {
            op.layer.validate();
            for (const auto &g : op.layer.gates) {
                if (g.q0 < 0 || size_t(g.q0) >= n_qubits ||
                    (gate_is_two_qubit(g.kind) && (g.q1 < 0 || size_t(g.q1) >= n_qubits))) {
                    throw std::invalid_argument("tableau_run: gate qubit out of range");
                }
            }
        }
    }
    Tableau tab(n_qubits, seed);
    std::vector<bool> outcomes;
    for (const auto &op : program) {
        switch (op.kind) {
            case TableauOp::ResetZ:
                tab.reset_z(op.qubit);
                break;
            case TableauOp::ResetX:
                tab.reset_x(op.qubit);
                break;
            case TableauOp::Layer:
                tab.apply_layer(op.layer);
                break;
            case TableauOp::MeasureZ:
                outcomes.push_back(tab.measure_z(op.qubit));
                break;
            case TableauOp::MeasureX:
                outcomes.push_back(tab.measure_x(op.qubit));
                break;
        }
    }
    return outcomes;
}

}  // namespace lomatch
