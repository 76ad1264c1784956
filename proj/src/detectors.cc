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

#include "lomatch/detectors.h"

#include <algorithm>
#include <stdexcept>

#include "lomatch/gf2.h"

namespace lomatch {

std::vector<std::vector<int>> DetectorSet::record_to_detectors(size_t n_records) const {
    std::vector<std::vector<int>> out(n_records);
    for (const auto &det : detectors) {
        for (int rec : det.measurement_set) {
            out[size_t(rec)].push_back(det.id);
        }
    }
    return out;
}

namespace {

std::vector<uint64_t> symplectic_bits(const PauliBits &p) {
    std::vector<uint64_t> v = p.x;
    v.insert(v.end(), p.z.begin(), p.z.end());
    return v;
}

struct CheckKey {
    int reg;
    bool x_type;
    int local;
    auto operator<=>(const CheckKey &) const = default;
};

}  // namespace

DetectorSet build_detectors(const EncodedCircuit &enc, Frame frame) {
    DetectorSet out;
    out.frame = frame;
    size_t nx = enc.layout.x_checks.size();
    size_t nz = enc.layout.z_checks.size();

    // Current record-set representation of each check's value; nullopt means
    // the value is not known (no detector can end on it yet).
    std::map<CheckKey, std::optional<std::vector<int>>> state;
    auto clear_reg = [&](int reg) {
        for (size_t c = 0; c < nx; c++) {
            state[CheckKey{reg, true, int(c)}] = std::nullopt;
        }
        for (size_t c = 0; c < nz; c++) {
            state[CheckKey{reg, false, int(c)}] = std::nullopt;
        }
    };

    // Span of the participating registers' check operators, for decomposing
    // conjugated checks. Insertion order matches enumerate_checks().
    std::vector<int> span_regs;
    GF2Span span(0);
    std::vector<CheckKey> span_keys;
    auto enumerate_checks = [&](const std::vector<int> &regs) {
        std::vector<CheckKey> keys;
        for (int reg : regs) {
            for (size_t c = 0; c < nx; c++) {
                keys.push_back(CheckKey{reg, true, int(c)});
            }
            for (size_t c = 0; c < nz; c++) {
                keys.push_back(CheckKey{reg, false, int(c)});
            }
        }
        return keys;
    };
    auto rebuild_span = [&](const std::vector<int> &regs) {
        if (regs == span_regs && span.rank() > 0) {
            return;
        }
        span_regs = regs;
        span_keys = enumerate_checks(regs);
        span = GF2Span(size_t(2 * enc.n_phys));
        for (const auto &key : span_keys) {
            span.insert(symplectic_bits(enc.check_op(key.reg, key.x_type, key.local)));
        }
    };

    std::vector<Detector> dets;
    auto emit = [&](int t, const CheckKey &key, std::vector<int> records) {
        std::sort(records.begin(), records.end());
        Coord coord = key.x_type ? enc.layout.x_checks[size_t(key.local)]
                                 : enc.layout.z_checks[size_t(key.local)];
        dets.push_back(Detector{-1, t, key.reg, key.x_type, coord, std::move(records)});
    };

    for (const auto &low : enc.layers) {
        for (auto [reg, basis] : low.resets) {
            clear_reg(reg);
            for (size_t c = 0; c < nx; c++) {
                if (basis == 'X' || basis == 'T') {
                    state[CheckKey{reg, true, int(c)}] = std::vector<int>{};
                }
            }
            for (size_t c = 0; c < nz; c++) {
                if (basis == 'Z' || basis == 'T') {
                    state[CheckKey{reg, false, int(c)}] = std::vector<int>{};
                }
            }
        }
        if (low.round < 0) {
            continue;
        }
        int t = low.round;
        if (!low.participants.empty()) {
            rebuild_span(low.participants);
            bool identity_layer = low.gates.gates.empty();
            if (frame == Frame::PreGate) {
                for (const auto &key : span_keys) {
                    const auto &st = state[key];
                    if (!st.has_value()) {
                        continue;
                    }
                    std::vector<int> records = *st;
                    if (identity_layer) {
                        records.push_back(
                            enc.check_rec.at({t, key.reg, key.x_type, key.local}));
                    } else {
                        PauliBits image = enc.check_op(key.reg, key.x_type, key.local);
                        image.conjugate_layer(low.gates);
                        auto combo = span.express(symplectic_bits(image));
                        if (!combo) {
                            throw std::logic_error(
                                "gate layer does not preserve the stabilizer group");
                        }
                        for (size_t idx : *combo) {
                            const CheckKey &m = span_keys[idx];
                            records.push_back(enc.check_rec.at({t, m.reg, m.x_type, m.local}));
                        }
                    }
                    emit(t, key, std::move(records));
                }
            } else {
                for (const auto &key : span_keys) {
                    std::vector<int> records{
                        enc.check_rec.at({t, key.reg, key.x_type, key.local})};
                    bool all_known = true;
                    if (identity_layer) {
                        const auto &st = state[key];
                        if (!st.has_value()) {
                            continue;
                        }
                        records.insert(records.end(), st->begin(), st->end());
                    } else {
                        PauliBits preimage = enc.check_op(key.reg, key.x_type, key.local);
                        preimage.conjugate_layer(low.gates);  // involutive, same map
                        auto combo = span.express(symplectic_bits(preimage));
                        if (!combo) {
                            throw std::logic_error(
                                "gate layer does not preserve the stabilizer group");
                        }
                        for (size_t idx : *combo) {
                            const auto &st = state[span_keys[idx]];
                            if (!st.has_value()) {
                                all_known = false;
                                break;
                            }
                            records.insert(records.end(), st->begin(), st->end());
                        }
                    }
                    if (all_known) {
                        emit(t, key, std::move(records));
                    }
                }
            }
            // The round pins every participating check to its fresh record.
            for (const auto &key : span_keys) {
                state[key] = std::vector<int>{
                    enc.check_rec.at({t, key.reg, key.x_type, key.local})};
            }
        }
        for (const auto &m : low.measured) {
            size_t n_checks = m.x_basis ? nx : nz;
            const auto &supports = m.x_basis ? enc.layout.x_support : enc.layout.z_support;
            for (size_t c = 0; c < n_checks; c++) {
                CheckKey key{m.reg, m.x_basis, int(c)};
                const auto &st = state[key];
                if (!st.has_value()) {
                    continue;
                }
                std::vector<int> records = *st;
                for (int data : supports[c]) {
                    records.push_back(enc.data_rec.at({t, m.reg, data}));
                }
                emit(t, key, std::move(records));
            }
            clear_reg(m.reg);
        }
    }

    std::sort(dets.begin(), dets.end(), [](const Detector &a, const Detector &b) {
        return std::tie(a.t, a.reg, a.x_type, a.coord) < std::tie(b.t, b.reg, b.x_type, b.coord);
    });
    for (size_t i = 0; i < dets.size(); i++) {
        dets[i].id = int(i);
    }
    out.detectors = std::move(dets);
    return out;
}

DeterminismReport check_determinism(const EncodedCircuit &enc, const DetectorSet &dets,
                                    int trials, uint64_t seed0) {
    DeterminismReport report;
    report.trials = trials;
    for (int trial = 0; trial < trials; trial++) {
        uint64_t seed = seed0 + uint64_t(trial);
        std::vector<bool> bits = simulate_encoded(enc, seed);
        for (const auto &det : dets.detectors) {
            bool parity = false;
            for (int rec : det.measurement_set) {
                parity = parity ^ bits[size_t(rec)];
            }
            if (parity) {
                report.violations.push_back(DeterminismViolation{det.id, seed});
            }
        }
    }
    return report;
}

}  // namespace lomatch
