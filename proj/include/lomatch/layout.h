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

#ifndef LOMATCH_LAYOUT_H
#define LOMATCH_LAYOUT_H

#include <string>
#include <vector>

#include "lomatch/pauli.h"

namespace lomatch {

/// Spatial coordinate stored doubled so half-integer positions stay integral.
struct Coord {
    int x2;  // 2*x
    int y2;  // 2*y

    auto operator<=>(const Coord &) const = default;
};

std::string coord_str(int doubled);

/// Unrotated (planar) surface code of odd distance d.
///
/// Data qubits sit at (x, y) with x, y in half-integer steps, x + y integral,
/// 0 <= x, y <= d-1. X-check ancillas sit at integer x, half-integer y;
/// Z-checks at half-integer x, integer y. Each check acts on the up-to-four
/// data qubits half a step away along the axes.
struct CodeLayout {
    int d = 0;
    std::vector<Coord> data;      // sorted, index = local data id
    std::vector<Coord> x_checks;  // sorted, index = local X-check id
    std::vector<Coord> z_checks;
    std::vector<std::vector<int>> x_support;  // local data ids per X-check
    std::vector<std::vector<int>> z_support;
    std::vector<int> logical_x;  // data ids of the X representative (row y=0)
    std::vector<int> logical_z;  // data ids of the Z representative (column x=0)

    int n() const {
        return int(data.size());
    }
    int data_index(Coord c) const;
    int x_check_index(Coord c) const;
    int z_check_index(Coord c) const;
    /// Pairs (a, b) of data ids with coordinates (x, y), (y, x), x < y,
    /// i.e. the fold pairs used by the fold-transversal gates.
    std::vector<std::pair<int, int>> fold_pairs() const;
    /// Data ids on the fold diagonal x == y, split by integer/half-integer.
    std::vector<int> diagonal_integer() const;
    std::vector<int> diagonal_half() const;
};

/// Throws std::invalid_argument unless d is odd and >= 3.
CodeLayout build_layout(int d);

enum class LogicalGate : uint8_t { I, H, S, Sdg, Cnot, X, Z };

/// Physical gate layer implementing a logical gate on register-local data
/// qubit indices offset by `reg_offset` (and `reg_offset2` for the CNOT
/// target register). Logical Pauli gates produce an empty layer; they are
/// tracked in software.
CliffordLayer physical_layer(LogicalGate gate, const CodeLayout &layout, int reg_offset,
                             int reg_offset2 = -1);

}  // namespace lomatch

#endif
