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

#ifndef LOMATCH_DEM_H
#define LOMATCH_DEM_H

#include "lomatch/detectors.h"

namespace lomatch {

struct NoiseModel {
    enum Kind { Basic, Phenomenological } kind = Basic;
    double p = 0.0;

    static NoiseModel basic(double p);
    static NoiseModel phenomenological(double p);
};

/// One independent physical failure mode.
struct ErrorMechanism {
    enum Kind { DataPauli, RecordFlip } kind;
    double probability = 0.0;
    // DataPauli fields: the error acts on (reg, local) entering bare layer
    // `layer`; pre_gate errors act before the layer's gates, post_gate ones
    // between the gates and the QEC round.
    int layer = -1;
    bool pre_gate = true;
    int reg = -1;
    int local = -1;
    Pauli pauli = Pauli::I;
    // RecordFlip field.
    int record = -1;

    std::string str() const;
};

struct Hyperedge {
    int id;
    std::vector<int> detectors;  // sorted detector ids, may be empty only if mask set
    uint64_t obs_mask = 0;       // bit k = flips observable k (up to 64 observables)
    double probability = 0.0;
    std::vector<int> mechanisms;  // provenance indices
};

struct DecodingHypergraph {
    int d = 0;
    Frame frame = Frame::PreGate;
    DetectorSet detector_set;
    std::vector<ObservableSpec> observables;           // bare-level definitions
    std::vector<std::vector<int>> observable_records;  // lifted record sets, sorted
    std::vector<ErrorMechanism> mechanisms;
    std::vector<Hyperedge> edges;
    bool uniform_probability = false;
    size_t n_records = 0;

    size_t n_detectors() const {
        return detector_set.detectors.size();
    }
};

std::vector<ErrorMechanism> enumerate_mechanisms(const EncodedCircuit &enc,
                                                 const NoiseModel &noise);

struct MechanismEffect {
    std::vector<int> detectors;  // sorted
    uint64_t obs_mask = 0;
};

/// Propagates the mechanism forward through the encoded circuit: flips every
/// check record whose stabilizer anticommutes with the propagated Pauli and
/// every data record measured in an anticommuting basis; detector and
/// observable flips are the parities over their record sets.
MechanismEffect mechanism_effect(const EncodedCircuit &enc, const DetectorSet &dets,
                                 const std::vector<std::vector<int>> &observable_records,
                                 const ErrorMechanism &m);

/// Assembles the decoding hypergraph: enumerate, propagate, drop zero-effect
/// mechanisms, and merge parallel hyperedges (same endpoints and mask) with
/// XOR-combined probabilities. Hyperedges are sorted by (endpoints, mask).
DecodingHypergraph build_dem(const EncodedCircuit &enc, const DetectorSet &dets,
                             const std::vector<ObservableSpec> &observables,
                             const NoiseModel &noise);

/// Hyperedge ids flipping the observable. Under the basic model asserts the
/// boundary invariant: every member touches exactly one detector.
std::vector<int> observing_edge_set(const DecodingHypergraph &dem, size_t observable_index);

std::string serialize_dem(const DecodingHypergraph &dem);

class DemParseError : public std::exception {
   public:
    DemParseError(int line, std::string message);
    const char *what() const noexcept override {
        return message_.c_str();
    }
    int line() const {
        return line_;
    }

   private:
    int line_;
    std::string message_;
};

/// Parses the DEM text format. The result carries no mechanism provenance
/// (decoding works; windowed track construction needs the in-process build).
DecodingHypergraph parse_dem(const std::string &text);

}  // namespace lomatch

#endif
