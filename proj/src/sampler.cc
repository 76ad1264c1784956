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

#include "lomatch/sampler.h"

#include <atomic>
#include <cmath>
#include <set>
#include <stdexcept>
#include <thread>

namespace lomatch {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

ShotSample sample_shot(const DecodingHypergraph &dem, uint64_t seed, uint64_t shot) {
    ShotSample out;
    std::set<int> defects;
    uint64_t base = splitmix64(seed ^ splitmix64(shot * 0x2545f4914f6cdd1dull + 1));
    for (const auto &h : dem.edges) {
        uint64_t u = splitmix64(base ^ (uint64_t(h.id) * 0x9e3779b97f4a7c15ull + 7));
        // Threshold comparison in the unit 64-bit interval.
        double unit = double(u >> 11) * 0x1.0p-53;
        if (unit < h.probability) {
            out.flipped_edges.push_back(h.id);
            out.syndrome.true_obs_mask ^= h.obs_mask;
            for (int det : h.detectors) {
                auto [it, fresh] = defects.insert(det);
                if (!fresh) {
                    defects.erase(it);
                }
            }
        }
    }
    out.syndrome.defects.assign(defects.begin(), defects.end());
    return out;
}

std::pair<double, double> wilson_interval(uint64_t k, uint64_t n, double confidence) {
    if (n == 0 || k > n) {
        throw std::invalid_argument("wilson_interval needs 0 <= k <= n, n >= 1");
    }
    double z = 1.959964;
    if (confidence != 0.95) {
        // Inverse normal CDF via the Acklam rational approximation; only the
        // central piece is ever needed for sensible confidence levels.
        double p = 1.0 - (1.0 - confidence) / 2.0;
        double q = p - 0.5;
        double r = q * q;
        z = q * (((((-39.69683028665376 * r + 220.9460984245205) * r - 275.9285104469687) * r +
                   138.3577518672690) *
                      r -
                  30.66479806614716) *
                     r +
                 2.506628277459239) /
            (((((-54.47609879822406 * r + 161.5858368580409) * r - 155.6989798598866) * r +
               66.80131188771972) *
                  r -
              13.28068155288572) *
                 r +
             1.0);
    }
    double nn = double(n), kk = double(k);
    double z2 = z * z;
    double center = (kk + z2 / 2.0) / (nn + z2);
    double half = z * std::sqrt(kk * (nn - kk) / nn + z2 / 4.0) / (nn + z2);
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

MonteCarloResult monte_carlo(const DecodingHypergraph &dem, const ShotDecoder &decoder,
                             uint64_t scored_mask, const MonteCarloOptions &opts) {
    MonteCarloResult result;
    result.per_observable_failures.assign(dem.observable_records.size(), 0);
    uint64_t next_shot = 0;
    int threads = std::max(1, opts.threads);
    while (result.shots < opts.max_shots && result.failures < opts.max_failures) {
        uint64_t chunk = std::min<uint64_t>(opts.chunk, opts.max_shots - result.shots);
        uint64_t begin = next_shot, end = next_shot + chunk;
        std::atomic<uint64_t> cursor{begin};
        std::atomic<uint64_t> fail_count{0};
        std::vector<std::atomic<uint64_t>> per_obs(result.per_observable_failures.size());
        for (auto &a : per_obs) {
            a.store(0);
        }
        auto worker = [&]() {
            for (;;) {
                uint64_t shot = cursor.fetch_add(1);
                if (shot >= end) {
                    return;
                }
                ShotSample sample = sample_shot(dem, opts.seed, shot);
                uint64_t predicted = decoder(sample, shot);
                uint64_t wrong = (predicted ^ sample.syndrome.true_obs_mask) & scored_mask;
                if (wrong) {
                    fail_count.fetch_add(1);
                    for (size_t k = 0; k < per_obs.size(); k++) {
                        if ((wrong >> k) & 1) {
                            per_obs[k].fetch_add(1);
                        }
                    }
                }
            }
        };
        if (threads == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < threads; t++) {
                pool.emplace_back(worker);
            }
            for (auto &t : pool) {
                t.join();
            }
        }
        result.shots += chunk;
        result.failures += fail_count.load();
        for (size_t k = 0; k < per_obs.size(); k++) {
            result.per_observable_failures[k] += per_obs[k].load();
        }
        next_shot = end;
    }
    result.p_log = result.shots ? double(result.failures) / double(result.shots) : 0.0;
    auto [lo, hi] = wilson_interval(result.failures, std::max<uint64_t>(result.shots, 1));
    result.ci_lo = lo;
    result.ci_hi = hi;
    return result;
}

double log_log_slope(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("log_log_slope needs at least two points");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double n = double(x.size());
    for (size_t i = 0; i < x.size(); i++) {
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace lomatch
