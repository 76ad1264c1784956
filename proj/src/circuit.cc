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

#include "lomatch/circuit.h"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace lomatch {

bool element_is_reset(ElementKind k) {
    return k == ElementKind::Reset0 || k == ElementKind::ResetPlus || k == ElementKind::ResetT;
}

bool element_is_measurement(ElementKind k) {
    return k == ElementKind::MeasureZ || k == ElementKind::MeasureX;
}

bool element_is_gate(ElementKind k) {
    switch (k) {
        case ElementKind::GateH:
        case ElementKind::GateS:
        case ElementKind::GateSdg:
        case ElementKind::GateX:
        case ElementKind::GateZ:
        case ElementKind::Cnot:
        case ElementKind::Cz:
        case ElementKind::Swap:
            return true;
        default:
            return false;
    }
}

bool element_is_two_qubit(ElementKind k) {
    return k == ElementKind::Cnot || k == ElementKind::Cz || k == ElementKind::Swap;
}

bool Realization::value(int measurement_id) const {
    auto it = bits.find(measurement_id);
    return it != bits.end() && it->second;
}

bool Realization::covers(const std::set<int> &ids) const {
    return std::all_of(ids.begin(), ids.end(),
                       [&](int id) { return bits.count(id) > 0; });
}

std::string ObservableSpec::str() const {
    std::ostringstream out;
    out << "{";
    bool first = true;
    for (int id : measurements) {
        out << (first ? "m" : ",m") << id;
        first = false;
    }
    out << "}";
    return out.str();
}

const MeasurementInfo &BareCircuit::measurement(int id) const {
    if (id < 1 || size_t(id) > measurements.size()) {
        throw std::invalid_argument("measurement id out of range: m" + std::to_string(id));
    }
    return measurements[size_t(id) - 1];
}

bool BareCircuit::element_applies(const Element &e, const Realization &r) const {
    if (e.condition.empty()) {
        return true;
    }
    bool v = false;
    for (int id : e.condition) {
        v ^= r.value(id);
    }
    return v;
}

bool BareCircuit::active_at(int qubit, int loc) const {
    // Active at location `loc` iff some layer <= loc reset it and no layer in
    // (reset_layer, loc] measured it.
    bool active = false;
    for (int l = 0; l <= loc && size_t(l) < layers.size(); l++) {
        for (const auto &e : layers[size_t(l)].elements) {
            if (e.qubit == qubit || (element_is_two_qubit(e.kind) && e.other == qubit)) {
                if (element_is_reset(e.kind) && e.qubit == qubit) {
                    active = true;
                } else if (element_is_measurement(e.kind) && e.qubit == qubit) {
                    active = false;
                }
            }
        }
    }
    return active;
}

void BareCircuit::validate() const {
    std::vector<bool> active(size_t(n_qubits), false);
    std::set<int> seen_measurements;
    for (size_t l = 0; l < layers.size(); l++) {
        std::set<int> touched;
        for (const auto &e : layers[l].elements) {
            auto fail = [&](const std::string &msg) {
                throw std::invalid_argument("layer " + std::to_string(l) + ": " + msg);
            };
            if (e.qubit < 0 || e.qubit >= n_qubits) {
                fail("qubit out of range");
            }
            if (!touched.insert(e.qubit).second) {
                fail("qubit has two elements in one layer");
            }
            if (element_is_two_qubit(e.kind)) {
                if (e.other < 0 || e.other >= n_qubits || e.other == e.qubit) {
                    fail("bad two-qubit pair");
                }
                if (!touched.insert(e.other).second) {
                    fail("qubit has two elements in one layer");
                }
            }
            if (element_is_reset(e.kind)) {
                if (active[size_t(e.qubit)]) {
                    fail("reset of an active qubit");
                }
            } else if (e.kind != ElementKind::Idle) {
                if (!active[size_t(e.qubit)]) {
                    fail("operation on inactive qubit " + std::to_string(e.qubit));
                }
                if (element_is_two_qubit(e.kind) && !active[size_t(e.other)]) {
                    fail("operation on inactive qubit " + std::to_string(e.other));
                }
            }
            for (int id : e.condition) {
                if (!seen_measurements.count(id)) {
                    fail("condition references m" + std::to_string(id) +
                         " which is not an earlier measurement");
                }
            }
        }
        // Commit activity changes after checking the whole layer.
        for (const auto &e : layers[l].elements) {
            if (element_is_reset(e.kind)) {
                active[size_t(e.qubit)] = true;
            } else if (element_is_measurement(e.kind)) {
                active[size_t(e.qubit)] = false;
                seen_measurements.insert(e.measurement_id);
            }
        }
    }
}

namespace {

const char *element_token(ElementKind k) {
    switch (k) {
        case ElementKind::Reset0:
            return "R0";
        case ElementKind::ResetPlus:
            return "R+";
        case ElementKind::ResetT:
            return "RT";
        case ElementKind::GateH:
            return "H";
        case ElementKind::GateS:
            return "S";
        case ElementKind::GateSdg:
            return "SDG";
        case ElementKind::GateX:
            return "X";
        case ElementKind::GateZ:
            return "Z";
        case ElementKind::Cnot:
            return "CNOT";
        case ElementKind::Cz:
            return "CZ";
        case ElementKind::Swap:
            return "SWAP";
        case ElementKind::MeasureZ:
            return "MZ";
        case ElementKind::MeasureX:
            return "MX";
        case ElementKind::Idle:
            return "I";
    }
    return "?";
}

}  // namespace

std::string BareCircuit::to_text() const {
    std::ostringstream out;
    for (const auto &layer : layers) {
        bool first = true;
        for (const auto &e : layer.elements) {
            if (e.kind == ElementKind::Idle) {
                continue;
            }
            if (!first) {
                out << " ; ";
            }
            first = false;
            if (!e.condition.empty()) {
                out << "COND ";
            }
            out << element_token(e.kind) << " " << e.qubit;
            if (element_is_two_qubit(e.kind)) {
                out << " " << e.other;
            }
            if (!e.condition.empty()) {
                out << " ON ";
                bool f2 = true;
                for (int id : e.condition) {
                    out << (f2 ? "m" : "^m") << id;
                    f2 = false;
                }
            }
        }
        out << "\n";
    }
    return out.str();
}

CircuitParseError::CircuitParseError(ParseError e) : err_(std::move(e)) {
    message_ = "parse error at line " + std::to_string(err_.line) + ", column " +
               std::to_string(err_.column) + ": " + err_.message;
}

namespace {

struct TokenCursor {
    const std::string &text;
    size_t pos = 0;
    int line = 1;
    int col = 1;
};

}  // namespace

BareCircuit parse_circuit(const std::string &text) {
    BareCircuit circuit;
    int next_measurement = 1;
    int max_qubit = -1;
    std::istringstream stream(text);
    std::string raw_line;
    int line_no = 0;
    while (std::getline(stream, raw_line)) {
        line_no++;
        std::string line = raw_line;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        // Tokenize the layer, tracking column offsets for diagnostics.
        struct Tok {
            std::string s;
            int col;
        };
        std::vector<std::vector<Tok>> groups(1);
        size_t i = 0;
        while (i < line.size()) {
            if (std::isspace(static_cast<unsigned char>(line[i]))) {
                i++;
                continue;
            }
            if (line[i] == ';') {
                groups.emplace_back();
                i++;
                continue;
            }
            size_t start = i;
            while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
                   line[i] != ';') {
                i++;
            }
            groups.back().push_back(Tok{line.substr(start, i - start), int(start) + 1});
        }
        bool any = false;
        for (const auto &g : groups) {
            if (!g.empty()) {
                any = true;
            }
        }
        if (!any) {
            continue;
        }
        Layer layer;
        for (const auto &g : groups) {
            if (g.empty()) {
                continue;
            }
            auto fail = [&](int col, const std::string &msg) -> void {
                throw CircuitParseError(ParseError{line_no, col, msg});
            };
            size_t k = 0;
            Element e;
            if (g[k].s == "COND") {
                k++;
                if (k >= g.size()) {
                    fail(g[0].col, "COND without a gate");
                }
            }
            bool conditional = (g[0].s == "COND");
            const Tok &head = g[k];
            auto parse_int = [&](const Tok &t) {
                try {
                    size_t used = 0;
                    int v = std::stoi(t.s, &used);
                    if (used != t.s.size() || v < 0) {
                        fail(t.col, "expected a qubit id, got '" + t.s + "'");
                    }
                    return v;
                } catch (const CircuitParseError &) {
                    throw;
                } catch (...) {
                    fail(t.col, "expected a qubit id, got '" + t.s + "'");
                }
                return 0;
            };
            static const std::map<std::string, ElementKind> kTokens = {
                {"R0", ElementKind::Reset0},   {"R+", ElementKind::ResetPlus},
                {"RT", ElementKind::ResetT},   {"H", ElementKind::GateH},
                {"S", ElementKind::GateS},     {"SDG", ElementKind::GateSdg},
                {"X", ElementKind::GateX},     {"Z", ElementKind::GateZ},
                {"CNOT", ElementKind::Cnot},   {"CZ", ElementKind::Cz},
                {"SWAP", ElementKind::Swap},   {"MZ", ElementKind::MeasureZ},
                {"MX", ElementKind::MeasureX}, {"I", ElementKind::Idle},
            };
            auto it = kTokens.find(head.s);
            if (it == kTokens.end()) {
                fail(head.col, "unknown element '" + head.s + "'");
            }
            e.kind = it->second;
            k++;
            if (k >= g.size()) {
                fail(head.col, "missing qubit for '" + head.s + "'");
            }
            e.qubit = parse_int(g[k]);
            k++;
            if (element_is_two_qubit(e.kind)) {
                if (k >= g.size()) {
                    fail(head.col, "missing second qubit for '" + head.s + "'");
                }
                e.other = parse_int(g[k]);
                k++;
            }
            if (conditional) {
                if (element_is_reset(e.kind) || element_is_measurement(e.kind)) {
                    fail(head.col, "only gates can be conditional");
                }
                if (k >= g.size() || g[k].s != "ON") {
                    fail(head.col, "COND requires 'ON m<i>[^m<j>...]'");
                }
                k++;
                if (k >= g.size()) {
                    fail(head.col, "COND requires a condition");
                }
                std::string cond = g[k].s;
                size_t p = 0;
                while (p < cond.size()) {
                    if (cond[p] != 'm') {
                        fail(g[k].col, "bad condition token '" + cond + "'");
                    }
                    p++;
                    size_t start = p;
                    while (p < cond.size() && std::isdigit(static_cast<unsigned char>(cond[p]))) {
                        p++;
                    }
                    if (start == p) {
                        fail(g[k].col, "bad condition token '" + cond + "'");
                    }
                    e.condition.insert(std::stoi(cond.substr(start, p - start)));
                    if (p < cond.size()) {
                        if (cond[p] != '^') {
                            fail(g[k].col, "bad condition token '" + cond + "'");
                        }
                        p++;
                    }
                }
                k++;
            }
            if (k != g.size()) {
                fail(g[k].col, "unexpected token '" + g[k].s + "'");
            }
            if (element_is_measurement(e.kind)) {
                e.measurement_id = next_measurement++;
                circuit.measurements.push_back(MeasurementInfo{
                    e.measurement_id, int(circuit.layers.size()), e.qubit,
                    e.kind == ElementKind::MeasureX});
            }
            max_qubit = std::max({max_qubit, e.qubit, e.other});
            if (e.kind != ElementKind::Idle) {
                layer.elements.push_back(e);
            }
        }
        circuit.layers.push_back(std::move(layer));
    }
    circuit.n_qubits = max_qubit + 1;
    for (const auto &m : circuit.measurements) {
        for (const auto &layer : circuit.layers) {
            for (const auto &e : layer.elements) {
                if (e.condition.count(m.id)) {
                    circuit.measurements[size_t(m.id) - 1].conditions_something = true;
                }
            }
        }
    }
    try {
        circuit.validate();
    } catch (const std::invalid_argument &ex) {
        throw CircuitParseError(ParseError{line_no, 1, ex.what()});
    }
    return circuit;
}

}  // namespace lomatch
