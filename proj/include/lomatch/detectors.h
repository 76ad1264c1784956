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

#ifndef LOMATCH_DETECTORS_H
#define LOMATCH_DETECTORS_H

#include "lomatch/encoded.h"

namespace lomatch {

enum class Frame : uint8_t { PreGate, PostGate };

/// A set of measurement records whose parity is deterministic in a noiseless
/// run. Labeled by the check it tracks: in the pre-gate frame the check just
/// before the layer whose round provides the new records, in the post-gate
/// frame the check measured by that round itself.
struct Detector {
    int id;
    int t;  // round index of the new-record side
    int reg;
    bool x_type;
    Coord coord;
    std::vector<int> measurement_set;  // record ids, sorted
};

struct DetectorSet {
    Frame frame = Frame::PreGate;
    std::vector<Detector> detectors;  // sorted by (t, reg, type, coord)

    /// record id -> detectors containing it
    std::vector<std::vector<int>> record_to_detectors(size_t n_records) const;
};

/// Builds detectors for the encoded circuit.
///
/// Bulk rule, pre-gate frame: for each register check c whose value before
/// layer L is represented by records S (one record from the previous round,
/// or the empty set right after a reset that fixes c), the detector is S plus
/// the round-L records of the forward image of c through layer L's physical
/// gates. The post-gate frame mirrors this with backward images. Transversal
/// measurements contribute their data records in place of a check round.
DetectorSet build_detectors(const EncodedCircuit &enc, Frame frame);

struct DeterminismViolation {
    int detector;
    uint64_t seed;
};

struct DeterminismReport {
    int trials = 0;
    std::vector<DeterminismViolation> violations;

    bool ok() const {
        return violations.empty();
    }
};

/// Simulates `trials` noiseless runs with distinct seeds and checks that
/// every detector parity is zero each time.
DeterminismReport check_determinism(const EncodedCircuit &enc, const DetectorSet &dets,
                                    int trials, uint64_t seed0 = 0);

}  // namespace lomatch

#endif
