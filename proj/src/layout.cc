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

#include "lomatch/layout.h"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace lomatch {

std::string coord_str(int doubled) {
    if (doubled % 2 == 0) {
        return std::to_string(doubled / 2);
    }
    return std::to_string(doubled / 2) + ".5";
}

int CodeLayout::data_index(Coord c) const {
    auto it = std::lower_bound(data.begin(), data.end(), c);
    if (it == data.end() || !(*it == c)) {
        return -1;
    }
    return int(it - data.begin());
}

int CodeLayout::x_check_index(Coord c) const {
    auto it = std::lower_bound(x_checks.begin(), x_checks.end(), c);
    if (it == x_checks.end() || !(*it == c)) {
        return -1;
    }
    return int(it - x_checks.begin());
}

int CodeLayout::z_check_index(Coord c) const {
    auto it = std::lower_bound(z_checks.begin(), z_checks.end(), c);
    if (it == z_checks.end() || !(*it == c)) {
        return -1;
    }
    return int(it - z_checks.begin());
}

std::vector<std::pair<int, int>> CodeLayout::fold_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (size_t i = 0; i < data.size(); i++) {
        const Coord &c = data[i];
        if (c.x2 < c.y2) {
            int j = data_index(Coord{c.y2, c.x2});
            out.emplace_back(int(i), j);
        }
    }
    return out;
}

std::vector<int> CodeLayout::diagonal_integer() const {
    std::vector<int> out;
    for (size_t i = 0; i < data.size(); i++) {
        if (data[i].x2 == data[i].y2 && data[i].x2 % 2 == 0) {
            out.push_back(int(i));
        }
    }
    return out;
}

std::vector<int> CodeLayout::diagonal_half() const {
    std::vector<int> out;
    for (size_t i = 0; i < data.size(); i++) {
        if (data[i].x2 == data[i].y2 && data[i].x2 % 2 != 0) {
            out.push_back(int(i));
        }
    }
    return out;
}

CodeLayout build_layout(int d) {
    if (d < 3 || d % 2 == 0) {
        throw std::invalid_argument("code distance must be odd and >= 3, got " +
                                    std::to_string(d));
    }
    CodeLayout layout;
    layout.d = d;
    int lim = 2 * (d - 1);
    for (int x2 = 0; x2 <= lim; x2++) {
        for (int y2 = 0; y2 <= lim; y2++) {
            bool x_half = x2 % 2, y_half = y2 % 2;
            if (x_half == y_half) {
                layout.data.push_back(Coord{x2, y2});
            } else if (!x_half) {
                layout.x_checks.push_back(Coord{x2, y2});
            } else {
                layout.z_checks.push_back(Coord{x2, y2});
            }
        }
    }
    std::sort(layout.data.begin(), layout.data.end());
    std::sort(layout.x_checks.begin(), layout.x_checks.end());
    std::sort(layout.z_checks.begin(), layout.z_checks.end());
    auto supports = [&](const std::vector<Coord> &checks) {
        std::vector<std::vector<int>> out;
        for (const Coord &c : checks) {
            std::vector<int> sup;
            for (const Coord n : {Coord{c.x2 - 1, c.y2}, Coord{c.x2 + 1, c.y2},
                                  Coord{c.x2, c.y2 - 1}, Coord{c.x2, c.y2 + 1}}) {
                int idx = layout.data_index(n);
                if (idx >= 0) {
                    sup.push_back(idx);
                }
            }
            out.push_back(std::move(sup));
        }
        return out;
    };
    layout.x_support = supports(layout.x_checks);
    layout.z_support = supports(layout.z_checks);
    // Logical X along the y = 0 boundary row, logical Z along x = 0; each has
    // weight d, they overlap only at the corner and commute with all checks.
    for (size_t i = 0; i < layout.data.size(); i++) {
        if (layout.data[i].y2 == 0) {
            layout.logical_x.push_back(int(i));
        }
        if (layout.data[i].x2 == 0) {
            layout.logical_z.push_back(int(i));
        }
    }
    return layout;
}

CliffordLayer physical_layer(LogicalGate gate, const CodeLayout &layout, int reg_offset,
                             int reg_offset2) {
    CliffordLayer out;
    switch (gate) {
        case LogicalGate::I:
        case LogicalGate::X:
        case LogicalGate::Z:
            break;
        case LogicalGate::H: {
            for (int i = 0; i < layout.n(); i++) {
                out.add(GateKind::H, reg_offset + i);
            }
            for (auto [a, b] : layout.fold_pairs()) {
                out.add(GateKind::SWAP, reg_offset + a, reg_offset + b);
            }
            break;
        }
        case LogicalGate::S:
        case LogicalGate::Sdg: {
            // The inverse gate swaps the S/SDG assignment; the CZ part is
            // self-inverse. Phase-free the two layers act identically.
            bool inv = gate == LogicalGate::Sdg;
            for (int i : layout.diagonal_integer()) {
                out.add(inv ? GateKind::SDG : GateKind::S, reg_offset + i);
            }
            for (int i : layout.diagonal_half()) {
                out.add(inv ? GateKind::S : GateKind::SDG, reg_offset + i);
            }
            for (auto [a, b] : layout.fold_pairs()) {
                out.add(GateKind::CZ, reg_offset + a, reg_offset + b);
            }
            break;
        }
        case LogicalGate::Cnot: {
            if (reg_offset2 < 0) {
                throw std::invalid_argument("logical CNOT needs a target register");
            }
            for (int i = 0; i < layout.n(); i++) {
                out.add(GateKind::CNOT, reg_offset + i, reg_offset2 + i);
            }
            break;
        }
    }
    return out;
}

}  // namespace lomatch
