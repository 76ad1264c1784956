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

#ifndef LOMATCH_SAMPLER_H
#define LOMATCH_SAMPLER_H

#include <functional>

#include "lomatch/lom.h"

namespace lomatch {

uint64_t splitmix64(uint64_t x);

struct ShotSample {
    std::vector<int> flipped_edges;  // hyperedge ids
    Syndrome syndrome;
};

/// Samples one shot at the hypergraph level: every hyperedge fires
/// independently with its probability, from a counter-based stream keyed by
/// (seed, shot index, hyperedge id). Bit-exact regardless of threading.
ShotSample sample_shot(const DecodingHypergraph &dem, uint64_t seed, uint64_t shot);

/// Wilson score interval for k failures in n shots.
std::pair<double, double> wilson_interval(uint64_t k, uint64_t n, double confidence = 0.95);

struct MonteCarloOptions {
    uint64_t max_shots = 10'000'000;
    uint64_t max_failures = 1'000;
    uint64_t seed = 0;
    int threads = 1;
    uint64_t chunk = 4096;  // stopping rule evaluated on chunk boundaries
};

struct MonteCarloResult {
    uint64_t shots = 0;
    uint64_t failures = 0;
    double p_log = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::vector<uint64_t> per_observable_failures;
};

/// A decoder callback maps a shot to the predicted flip mask of the scored
/// observables; the true mask comes from the sample. A shot fails when any
/// scored bit differs.
using ShotDecoder = std::function<uint64_t(const ShotSample &, uint64_t shot)>;

MonteCarloResult monte_carlo(const DecodingHypergraph &dem, const ShotDecoder &decoder,
                             uint64_t scored_mask, const MonteCarloOptions &opts);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(const std::vector<double> &x, const std::vector<double> &y);

}  // namespace lomatch

#endif
