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

#ifndef LOMATCH_WINDOW_H
#define LOMATCH_WINDOW_H

#include "lomatch/lom.h"

namespace lomatch {

/// Sliding-window schedule over QEC-round indices. Window w commits the
/// rounds [t_prev, t_center) and looks ahead into [t_center, t_current).
struct WindowPlan {
    int d = 0;
    int commit_width = 0;
    int buffer_width = 0;
    int n_rounds = 0;
    bool synchronize = false;
    double slow_reset_factor = 1.0;
    struct Window {
        int t_prev;
        int t_center;
        int t_current;
    };
    std::vector<Window> windows;
};

/// Builds the window schedule and validates the basic-variant preconditions:
/// commit and buffer widths strictly above d/2, every non-magic reset
/// followed by at least slow_reset_factor*d rounds before an entangling
/// logical gate on that register, and mid-circuit measurements either part
/// of a magic-state injection, in the last round before a boundary
/// (synchronize = true), or at the end of the circuit.
WindowPlan plan_windows(const BareCircuit &circuit, const EncodedCircuit &enc, int commit_width,
                        int buffer_width, double slow_reset_factor = 1.0,
                        bool synchronize = false);

/// Windowed decoding of a full-circuit syndrome. Each window runs one
/// single-observable matching instance per logical Pauli generator at its
/// center (forward- and backward-propagated through the window), commits the
/// time-like edges crossing the center, and accumulates the logical Pauli
/// frame. Logical measurements are decoded immediately against the last
/// committed boundary.
class WindowedDecoder {
   public:
    WindowedDecoder(const DecodingHypergraph &dem, const EncodedCircuit &enc,
                    const BareCircuit &circuit, const Realization &realization, WindowPlan plan,
                    bool shortcut_edges);

    /// Predicted error-induced flip of every measurement's logical outcome.
    std::map<int, bool> decode(const Syndrome &syndrome) const;
    const WindowPlan &plan() const {
        return plan_;
    }
    /// Number of matching instances per window (2k tracks).
    size_t tracks_in_window(size_t w) const;
    /// Detector ids of a window track, for structural tests.
    const std::vector<int> &track_vertices(size_t w, size_t track) const;
    /// The track's matcher graph (with short-cut edges when enabled).
    const MatchGraph &track_graph(size_t w, size_t track) const;
    /// Hyperedges committing at each window center, per track (for the
    /// single-commit invariant test).
    std::vector<std::vector<int>> center_straddlers(size_t w) const;

   private:
    struct Track {
        int reg;
        bool x_type;  // anchored logical X vs Z
        std::vector<int> vertices;
        MatchGraph graph;
        std::vector<std::vector<int>> edge_future;  // straddler future endpoints
        std::vector<char> edge_commit_obs;          // observing edge in commit region
        std::vector<int> edge_hyperedge;            // source id (-1 for short-cut)
        std::unique_ptr<ShortestPathEngine> engine;
        // Decomposition of the anchored operator backpropagated to t_prev:
        // pairs (register, x_type) over the previous window's generators.
        std::vector<std::pair<int, bool>> backward_decomposition;

        int local_vertex(int det) const;
    };
    struct WindowData {
        WindowPlan::Window bounds;
        // Heap-allocated: each track's path engine holds a pointer into the
        // track's own graph.
        std::vector<std::unique_ptr<Track>> tracks;  // register-ascending, X before Z
    };
    struct Immediate {
        int measurement_id;
        int round;
        int committed_center;  // t_prev of the immediate span
        std::unique_ptr<Track> track;
    };

    const DecodingHypergraph *dem_;
    const EncodedCircuit *enc_;
    const BareCircuit *circuit_;
    const Realization *realization_;
    WindowPlan plan_;
    std::vector<WindowData> windows_;
    std::vector<Immediate> immediates_;

    std::unique_ptr<Track> build_track(int reg, bool x_type, int anchor_layer, int t_lo,
                                       int t_hi, bool anchor_is_measurement,
                                       int measurement_id, bool shortcut) const;
};

}  // namespace lomatch

#endif
