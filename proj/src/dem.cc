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

#include "lomatch/dem.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lomatch {

NoiseModel NoiseModel::basic(double p) {
    if (!(p > 0.0 && p < 0.5)) {
        throw std::invalid_argument("noise probability must lie in (0, 0.5)");
    }
    return NoiseModel{Basic, p};
}

NoiseModel NoiseModel::phenomenological(double p) {
    if (!(p > 0.0 && p < 0.5)) {
        throw std::invalid_argument("noise probability must lie in (0, 0.5)");
    }
    return NoiseModel{Phenomenological, p};
}

std::string ErrorMechanism::str() const {
    std::ostringstream out;
    if (kind == RecordFlip) {
        out << "flip(m" << record << ")";
    } else {
        out << pauli_to_char(pauli) << "(reg" << reg << ",q" << local << ","
            << (pre_gate ? "pre" : "post") << "L" << layer << ")";
    }
    return out.str();
}

std::vector<ErrorMechanism> enumerate_mechanisms(const EncodedCircuit &enc,
                                                 const NoiseModel &noise) {
    std::vector<ErrorMechanism> out;
    double p = noise.p;
    if (!(p > 0.0 && p < 0.5)) {
        throw std::invalid_argument("noise probability must lie in (0, 0.5)");
    }
    for (const auto &low : enc.layers) {
        if (low.participants.empty()) {
            continue;  // reset-only or measurement-only layer
        }
        for (int reg : low.participants) {
            for (int local = 0; local < enc.layout.n(); local++) {
                if (noise.kind == NoiseModel::Basic) {
                    for (Pauli pl : {Pauli::X, Pauli::Z}) {
                        ErrorMechanism m;
                        m.kind = ErrorMechanism::DataPauli;
                        m.probability = p;
                        m.layer = low.bare_layer;
                        m.pre_gate = true;
                        m.reg = reg;
                        m.local = local;
                        m.pauli = pl;
                        out.push_back(m);
                    }
                } else {
                    for (bool pre : {true, false}) {
                        for (Pauli pl : {Pauli::X, Pauli::Y, Pauli::Z}) {
                            ErrorMechanism m;
                            m.kind = ErrorMechanism::DataPauli;
                            m.probability = p / 3.0;
                            m.layer = low.bare_layer;
                            m.pre_gate = pre;
                            m.reg = reg;
                            m.local = local;
                            m.pauli = pl;
                            out.push_back(m);
                        }
                    }
                }
            }
        }
    }
    for (const auto &rec : enc.records) {
        ErrorMechanism m;
        m.kind = ErrorMechanism::RecordFlip;
        m.probability = p;
        m.record = rec.id;
        out.push_back(m);
    }
    return out;
}

namespace {

struct RecordFlipper {
    std::set<int> flipped;
    void flip(int record) {
        auto [it, inserted] = flipped.insert(record);
        if (!inserted) {
            flipped.erase(it);
        }
    }
};

}  // namespace

namespace {

MechanismEffect mechanism_effect_impl(const EncodedCircuit &enc,
                                      const std::vector<std::vector<int>> &rec2det,
                                      const std::vector<std::vector<int>> &observable_records,
                                      const ErrorMechanism &m) {
    RecordFlipper flips;
    if (m.kind == ErrorMechanism::RecordFlip) {
        flips.flip(m.record);
    } else {
        PauliBits err(size_t(enc.n_phys));
        err.set(size_t(enc.phys_qubit(m.reg, m.local)), m.pauli);
        for (size_t l = size_t(m.layer); l < enc.layers.size(); l++) {
            const auto &low = enc.layers[l];
            if (int(l) > m.layer) {
                for (auto [reg, basis] : low.resets) {
                    (void)basis;
                    for (int i = 0; i < enc.layout.n(); i++) {
                        err.set(size_t(enc.phys_qubit(reg, i)), Pauli::I);
                    }
                }
                err.conjugate_layer(low.gates);
            } else if (m.pre_gate) {
                err.conjugate_layer(low.gates);
            }
            if (err.is_identity()) {
                break;
            }
            if (low.round < 0) {
                continue;
            }
            for (int reg : low.participants) {
                for (size_t c = 0; c < enc.layout.x_checks.size(); c++) {
                    if (enc.check_op(reg, true, int(c)).anticommutes_with(err)) {
                        flips.flip(enc.check_rec.at({low.round, reg, true, int(c)}));
                    }
                }
                for (size_t c = 0; c < enc.layout.z_checks.size(); c++) {
                    if (enc.check_op(reg, false, int(c)).anticommutes_with(err)) {
                        flips.flip(enc.check_rec.at({low.round, reg, false, int(c)}));
                    }
                }
            }
            for (const auto &meas : low.measured) {
                for (int i = 0; i < enc.layout.n(); i++) {
                    Pauli e = err.at(size_t(enc.phys_qubit(meas.reg, i)));
                    Pauli basis = meas.x_basis ? Pauli::X : Pauli::Z;
                    if (e != Pauli::I && pauli_anticommutes(e, basis)) {
                        flips.flip(enc.data_rec.at({low.round, meas.reg, i}));
                    }
                    err.set(size_t(enc.phys_qubit(meas.reg, i)), Pauli::I);
                }
            }
        }
    }
    MechanismEffect effect;
    std::set<int> det_flips;
    for (int rec : flips.flipped) {
        for (int det : rec2det[size_t(rec)]) {
            auto [it, inserted] = det_flips.insert(det);
            if (!inserted) {
                det_flips.erase(it);
            }
        }
    }
    effect.detectors.assign(det_flips.begin(), det_flips.end());
    for (size_t k = 0; k < observable_records.size(); k++) {
        size_t overlap = 0;
        for (int rec : flips.flipped) {
            overlap += size_t(std::binary_search(observable_records[k].begin(),
                                                 observable_records[k].end(), rec));
        }
        if (overlap & 1) {
            effect.obs_mask |= uint64_t{1} << k;
        }
    }
    return effect;
}

}  // namespace

MechanismEffect mechanism_effect(const EncodedCircuit &enc, const DetectorSet &dets,
                                 const std::vector<std::vector<int>> &observable_records,
                                 const ErrorMechanism &m) {
    return mechanism_effect_impl(enc, dets.record_to_detectors(enc.records.size()),
                                 observable_records, m);
}

DecodingHypergraph build_dem(const EncodedCircuit &enc, const DetectorSet &dets,
                             const std::vector<ObservableSpec> &observables,
                             const NoiseModel &noise) {
    if (observables.size() > 64) {
        throw std::invalid_argument("at most 64 declared observables are supported");
    }
    DecodingHypergraph dem;
    dem.d = enc.layout.d;
    dem.frame = dets.frame;
    dem.detector_set = dets;
    dem.observables = observables;
    dem.n_records = enc.records.size();
    for (const auto &o : observables) {
        std::set<int> recs;
        for (int mid : o.measurements) {
            for (int rec : enc.observable_lift.at(mid)) {
                if (!recs.insert(rec).second) {
                    recs.erase(rec);
                }
            }
        }
        dem.observable_records.emplace_back(recs.begin(), recs.end());
    }
    dem.mechanisms = enumerate_mechanisms(enc, noise);
    dem.uniform_probability = noise.kind == NoiseModel::Basic;

    auto rec2det = dets.record_to_detectors(enc.records.size());
    std::map<std::pair<std::vector<int>, uint64_t>, Hyperedge> merged;
    for (size_t i = 0; i < dem.mechanisms.size(); i++) {
        MechanismEffect eff = mechanism_effect_impl(enc, rec2det, dem.observable_records,
                                                    dem.mechanisms[i]);
        if (eff.detectors.empty() && eff.obs_mask == 0) {
            continue;
        }
        auto key = std::make_pair(eff.detectors, eff.obs_mask);
        auto it = merged.find(key);
        if (it == merged.end()) {
            Hyperedge h;
            h.id = -1;
            h.detectors = eff.detectors;
            h.obs_mask = eff.obs_mask;
            h.probability = dem.mechanisms[i].probability;
            h.mechanisms = {int(i)};
            merged.emplace(std::move(key), std::move(h));
        } else {
            double p1 = it->second.probability, p2 = dem.mechanisms[i].probability;
            it->second.probability = p1 * (1.0 - p2) + p2 * (1.0 - p1);
            it->second.mechanisms.push_back(int(i));
        }
    }
    for (auto &[key, h] : merged) {
        h.id = int(dem.edges.size());
        dem.edges.push_back(std::move(h));
    }
    // Hyperedges with a mask but no detectors can only arise for fragile
    // observables (an invisible flip of a 50-50 outcome); they stay in the
    // hypergraph so sampled ground truths remain faithful.
    return dem;
}

std::vector<int> observing_edge_set(const DecodingHypergraph &dem, size_t observable_index) {
    std::vector<int> out;
    for (const auto &h : dem.edges) {
        if ((h.obs_mask >> observable_index) & 1) {
            if (dem.uniform_probability && h.detectors.size() != 1) {
                throw std::logic_error(
                    "basic-model observing edge does not touch the boundary: edge " +
                    std::to_string(h.id));
            }
            out.push_back(h.id);
        }
    }
    return out;
}

namespace {

std::string prob_str(double p) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", p);
    return buf;
}

}  // namespace

std::string serialize_dem(const DecodingHypergraph &dem) {
    std::ostringstream out;
    out << "dem v1 frame=" << (dem.frame == Frame::PreGate ? "pre" : "post")
        << " d=" << dem.d << " records=" << dem.n_records
        << (dem.uniform_probability ? " uniform=1" : " uniform=0") << "\n";
    for (const auto &det : dem.detector_set.detectors) {
        out << "detector D" << det.id << " t=" << det.t << " j=" << det.reg
            << " x=" << coord_str(det.coord.x2) << " y=" << coord_str(det.coord.y2)
            << " type=" << (det.x_type ? "X" : "Z");
        for (int rec : det.measurement_set) {
            out << " m" << rec;
        }
        out << "\n";
    }
    for (size_t k = 0; k < dem.observable_records.size(); k++) {
        out << "observable L" << k << " =";
        for (int rec : dem.observable_records[k]) {
            out << " m" << rec;
        }
        out << "\n";
    }
    for (const auto &h : dem.edges) {
        out << "error(" << prob_str(h.probability) << ")";
        for (int det : h.detectors) {
            out << " D" << det;
        }
        for (size_t k = 0; k < dem.observable_records.size(); k++) {
            if ((h.obs_mask >> k) & 1) {
                out << " L" << k;
            }
        }
        out << "\n";
    }
    return out.str();
}

DemParseError::DemParseError(int line, std::string message)
    : line_(line), message_("dem parse error at line " + std::to_string(line) + ": " +
                            std::move(message)) {
}

namespace {

int parse_coord2(const std::string &s, int line) {
    size_t dot = s.find('.');
    try {
        if (dot == std::string::npos) {
            return 2 * std::stoi(s);
        }
        if (s.substr(dot) != ".5") {
            throw DemParseError(line, "bad coordinate '" + s + "'");
        }
        int whole = std::stoi(s.substr(0, dot));
        return 2 * whole + (whole < 0 ? -1 : 1);
    } catch (const DemParseError &) {
        throw;
    } catch (...) {
        throw DemParseError(line, "bad coordinate '" + s + "'");
    }
}

}  // namespace

DecodingHypergraph parse_dem(const std::string &text) {
    DecodingHypergraph dem;
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(stream, line)) {
        line_no++;
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) {
            continue;
        }
        if (word == "dem") {
            header_seen = true;
            std::string tok;
            ls >> tok;
            if (tok != "v1") {
                throw DemParseError(line_no, "unsupported version '" + tok + "'");
            }
            while (ls >> tok) {
                auto eq = tok.find('=');
                if (eq == std::string::npos) {
                    throw DemParseError(line_no, "bad header token '" + tok + "'");
                }
                std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
                if (key == "frame") {
                    if (val != "pre" && val != "post") {
                        throw DemParseError(line_no, "bad frame '" + val + "'");
                    }
                    dem.frame = val == "pre" ? Frame::PreGate : Frame::PostGate;
                } else if (key == "d") {
                    dem.d = std::stoi(val);
                } else if (key == "records") {
                    dem.n_records = size_t(std::stoul(val));
                } else if (key == "uniform") {
                    dem.uniform_probability = val == "1";
                }
            }
            dem.detector_set.frame = dem.frame;
        } else if (word == "detector") {
            Detector det;
            std::string tok;
            if (!(ls >> tok) || tok.size() < 2 || tok[0] != 'D') {
                throw DemParseError(line_no, "expected detector id");
            }
            det.id = std::stoi(tok.substr(1));
            while (ls >> tok) {
                if (tok[0] == 'm') {
                    det.measurement_set.push_back(std::stoi(tok.substr(1)));
                    continue;
                }
                auto eq = tok.find('=');
                if (eq == std::string::npos) {
                    throw DemParseError(line_no, "bad detector token '" + tok + "'");
                }
                std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
                if (key == "t") {
                    det.t = std::stoi(val);
                } else if (key == "j") {
                    det.reg = std::stoi(val);
                } else if (key == "x") {
                    det.coord.x2 = parse_coord2(val, line_no);
                } else if (key == "y") {
                    det.coord.y2 = parse_coord2(val, line_no);
                } else if (key == "type") {
                    det.x_type = val == "X";
                }
            }
            if (det.id != int(dem.detector_set.detectors.size())) {
                throw DemParseError(line_no, "detector ids must be dense and ordered");
            }
            dem.detector_set.detectors.push_back(std::move(det));
        } else if (word == "observable") {
            std::string tok;
            if (!(ls >> tok) || tok[0] != 'L' ||
                std::stoi(tok.substr(1)) != int(dem.observable_records.size())) {
                throw DemParseError(line_no, "observable ids must be dense and ordered");
            }
            if (!(ls >> tok) || tok != "=") {
                throw DemParseError(line_no, "expected '='");
            }
            std::vector<int> recs;
            while (ls >> tok) {
                if (tok[0] != 'm') {
                    throw DemParseError(line_no, "bad record token '" + tok + "'");
                }
                recs.push_back(std::stoi(tok.substr(1)));
            }
            std::sort(recs.begin(), recs.end());
            dem.observable_records.push_back(std::move(recs));
            dem.observables.push_back(ObservableSpec{});
        } else if (word.rfind("error(", 0) == 0) {
            if (word.back() != ')') {
                throw DemParseError(line_no, "malformed error line");
            }
            std::string ptok = word.substr(6, word.size() - 7);
            Hyperedge h;
            try {
                size_t used = 0;
                h.probability = std::stod(ptok, &used);
                if (used != ptok.size()) {
                    throw std::invalid_argument("");
                }
            } catch (...) {
                throw DemParseError(line_no, "bad probability '" + ptok + "'");
            }
            if (!(h.probability > 0.0 && h.probability < 0.5)) {
                throw DemParseError(line_no, "probability out of range '" + ptok + "'");
            }
            std::string tok;
            while (ls >> tok) {
                if (tok[0] == 'D') {
                    h.detectors.push_back(std::stoi(tok.substr(1)));
                } else if (tok[0] == 'L') {
                    h.obs_mask |= uint64_t{1} << std::stoi(tok.substr(1));
                } else {
                    throw DemParseError(line_no, "bad error token '" + tok + "'");
                }
            }
            std::sort(h.detectors.begin(), h.detectors.end());
            h.id = int(dem.edges.size());
            dem.edges.push_back(std::move(h));
        } else {
            throw DemParseError(line_no, "unknown line type '" + word + "'");
        }
    }
    if (!header_seen) {
        throw DemParseError(1, "missing header");
    }
    return dem;
}

}  // namespace lomatch
