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

#ifndef LOMATCH_TABLEAU_H
#define LOMATCH_TABLEAU_H

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "lomatch/pauli.h"

namespace lomatch {

/// Dense Pauli operator over a fixed qubit count, as X/Z bit planes.
struct PauliBits {
    size_t n = 0;
    std::vector<uint64_t> x, z;

    PauliBits() = default;
    explicit PauliBits(size_t n_qubits);
    static size_t words(size_t n) {
        return (n + 63) / 64;
    }
    bool get_x(size_t q) const {
        return (x[q >> 6] >> (q & 63)) & 1;
    }
    bool get_z(size_t q) const {
        return (z[q >> 6] >> (q & 63)) & 1;
    }
    void set_x(size_t q, bool v);
    void set_z(size_t q, bool v);
    Pauli at(size_t q) const {
        return pauli_from_bits(get_x(q), get_z(q));
    }
    void set(size_t q, Pauli p) {
        set_x(q, pauli_x_bit(p));
        set_z(q, pauli_z_bit(p));
    }
    void mul(const PauliBits &other);
    bool anticommutes_with(const PauliBits &other) const;
    bool is_identity() const;
    bool operator==(const PauliBits &other) const = default;
    std::vector<size_t> support() const;
    /// In-place phase-free conjugation through a physical gate layer.
    void conjugate_layer(const CliffordLayer &layer);
};

/// Stabilizer-state simulator in the Aaronson--Gottesman tableau form, with
/// sign tracking. Used as a noiseless oracle: deterministic measurement
/// outcomes are independent of the seed, random ones are drawn from the
/// provided generator.
class Tableau {
   public:
    explicit Tableau(size_t n_qubits, uint64_t seed = 0);

    size_t n() const {
        return n_;
    }

    void apply_h(size_t q);
    void apply_s(size_t q);
    void apply_sdg(size_t q);
    void apply_cnot(size_t c, size_t t);
    void apply_cz(size_t a, size_t b);
    void apply_swap(size_t a, size_t b);
    void apply_layer(const CliffordLayer &layer);
    /// Applies a Pauli as a gate (only signs change).
    void apply_pauli(const PauliBits &p);

    /// Measures an arbitrary Pauli operator. Returns the outcome bit
    /// (0 for +1) and whether the outcome was deterministic.
    std::pair<bool, bool> measure_pauli(const PauliBits &p);
    bool measure_z(size_t q);
    bool measure_x(size_t q);
    void reset_z(size_t q);
    void reset_x(size_t q);

   private:
    // Rows 0..n-1 destabilizers, n..2n-1 stabilizers. Phase exponent of i
    // stored mod 4 per row; valid rows keep it in {0, 2}.
    size_t n_;
    size_t w_;
    std::vector<std::vector<uint64_t>> xs_, zs_;
    std::vector<uint8_t> phase_;
    std::mt19937_64 rng_;

    bool row_anticommutes(size_t row, const PauliBits &p) const;
    void rowsum_into(std::vector<uint64_t> &tx, std::vector<uint64_t> &tz, uint8_t &tp,
                     size_t src_row) const;
    void rowsum(size_t target, size_t src);
};

/// One instruction of an oracle program.
struct TableauOp {
    enum Kind { ResetZ, ResetX, Layer, MeasureZ, MeasureX } kind;
    size_t qubit = 0;
    CliffordLayer layer;
};

/// Runs a program on a fresh n-qubit tableau (all qubits start in |0>).
/// Returns the measurement outcomes in program order.
std::vector<bool> tableau_run(size_t n_qubits, const std::vector<TableauOp> &program,
                              uint64_t seed);

}  // namespace lomatch

#endif
