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
//
// End-to-end acceptance suite. Each numbered check prints one PASS/FAIL
// line; the process exit code is the number of failures.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <thread>

#include "lomatch/distance.h"
#include "lomatch/experiments.h"
#include "lomatch/gf2.h"
#include "lomatch/sampler.h"
#include "lomatch/window.h"

#include "test_util.h"

using namespace lomatch;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string &detail) {
    std::printf("criterion %2d: %s  %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) {
        g_failures++;
    }
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

int hw_threads() {
    return std::max(2u, std::thread::hardware_concurrency());
}

void parallel_for(size_t n, const std::function<void(size_t)> &fn) {
    int workers = hw_threads();
    std::atomic<size_t> cursor{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; t++) {
        pool.emplace_back([&]() {
            for (;;) {
                size_t i = cursor.fetch_add(1);
                if (i >= n) {
                    return;
                }
                fn(i);
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
}

struct Artifacts {
    BareCircuit bare;
    Realization realization;
    EncodedCircuit enc;
    DetectorSet dets;
    LomPlan plan;
    DecodingHypergraph dem;
};

Artifacts make(const BareCircuit &bare, int d, const Realization &r,
               const std::vector<ObservableSpec> &requested, NoiseModel noise,
               Frame frame = Frame::PreGate) {
    Artifacts a;
    a.bare = bare;
    a.realization = r;
    a.enc = encode(bare, d, r);
    a.dets = build_detectors(a.enc, frame);
    a.plan = plan_lom(bare, r, requested);
    a.dem = build_dem(a.enc, a.dets, a.plan.observables, noise);
    return a;
}

Syndrome syndrome_of_edges(const DecodingHypergraph &dem, std::initializer_list<int> ids) {
    Syndrome out;
    std::set<int> defects;
    for (int id : ids) {
        const Hyperedge &h = dem.edges[size_t(id)];
        out.true_obs_mask ^= h.obs_mask;
        for (int det : h.detectors) {
            auto [it, fresh] = defects.insert(det);
            if (!fresh) {
                defects.erase(it);
            }
        }
    }
    out.defects.assign(defects.begin(), defects.end());
    return out;
}

std::vector<uint64_t> symplectic(const PauliBits &p) {
    std::vector<uint64_t> v = p.x;
    v.insert(v.end(), p.z.begin(), p.z.end());
    return v;
}

// ---------------------------------------------------------------------------

void criterion_1_fold_transversal() {
    Timer timer;
    bool pass = true;
    std::string detail;
    for (int d : {3, 5}) {
        CodeLayout layout = build_layout(d);
        EncodedCircuit one;
        one.layout = layout;
        one.n_regs = 2;
        one.n_phys = 2 * layout.n();
        GF2Span span(size_t(2 * one.n_phys));
        for (int reg = 0; reg < 2; reg++) {
            for (size_t c = 0; c < layout.x_checks.size(); c++) {
                span.insert(symplectic(one.check_op(reg, true, int(c))));
            }
            for (size_t c = 0; c < layout.z_checks.size(); c++) {
                span.insert(symplectic(one.check_op(reg, false, int(c))));
            }
        }
        auto stabilizer_member = [&](PauliBits op) { return span.contains(symplectic(op)); };
        auto check_gate = [&](const CliffordLayer &layer) {
            for (int reg = 0; reg < 2; reg++) {
                for (bool x_type : {true, false}) {
                    size_t count =
                        x_type ? layout.x_checks.size() : layout.z_checks.size();
                    for (size_t c = 0; c < count; c++) {
                        PauliBits image = one.check_op(reg, x_type, int(c));
                        image.conjugate_layer(layer);
                        if (!stabilizer_member(image)) {
                            return false;
                        }
                    }
                }
            }
            return true;
        };
        CliffordLayer h_layer = physical_layer(LogicalGate::H, layout, 0);
        CliffordLayer s_layer = physical_layer(LogicalGate::S, layout, 0);
        CliffordLayer cnot_layer = physical_layer(LogicalGate::Cnot, layout, 0, layout.n());
        pass = pass && check_gate(h_layer) && check_gate(s_layer) && check_gate(cnot_layer);

        auto map_ok = [&](const CliffordLayer &layer, PauliBits from, PauliBits to) {
            from.conjugate_layer(layer);
            from.mul(to);
            return stabilizer_member(from);
        };
        PauliBits x1 = one.logical_op(0, true), z1 = one.logical_op(0, false);
        PauliBits x2 = one.logical_op(1, true), z2 = one.logical_op(1, false);
        PauliBits y1 = x1;
        y1.mul(z1);
        PauliBits x1x2 = x1;
        x1x2.mul(x2);
        PauliBits z1z2 = z1;
        z1z2.mul(z2);
        pass = pass && map_ok(h_layer, x1, z1) && map_ok(h_layer, z1, x1);
        pass = pass && map_ok(s_layer, x1, y1) && map_ok(s_layer, z1, z1);
        pass = pass && map_ok(cnot_layer, x1, x1x2) && map_ok(cnot_layer, z2, z1z2);
        if (!pass) {
            detail = "failure at d=" + std::to_string(d);
            break;
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "fold-transversal stabilizer and logical maps, d=3,5 (%.1fs)",
                  timer.seconds());
    report(1, pass, detail.empty() ? buf : detail);
}

void criterion_2_determinism() {
    Timer timer;
    bool pass = true;
    int configs = 0;
    for (RepeatedGate g :
         {RepeatedGate::I, RepeatedGate::H, RepeatedGate::S, RepeatedGate::Cnot}) {
        for (bool x_basis : {false, true}) {
            EncodedCircuit enc = encode(gen_repeated_gate(g, 3, x_basis), 3, Realization{});
            for (Frame frame : {Frame::PreGate, Frame::PostGate}) {
                DetectorSet dets = build_detectors(enc, frame);
                DeterminismReport rep = check_determinism(enc, dets, 50);
                pass = pass && rep.ok();
                configs++;
            }
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d detector sets x 50 oracle trials, zero violations (%.1fs)",
                  configs, timer.seconds());
    report(2, pass, buf);
}

void criterion_3_propagation_lemma() {
    Timer timer;
    std::mt19937_64 rng(0xACCE55);
    std::atomic<int> checked{0};
    std::atomic<bool> pass{true};
    std::vector<BareCircuit> circuits;
    std::vector<Realization> realizations;
    for (int trial = 0; trial < 1000; trial++) {
        lomatch::testing::RandomCircuitOptions opt;
        opt.allow_magic = trial % 3 == 0;
        circuits.push_back(lomatch::testing::random_circuit(rng, opt));
        realizations.push_back(lomatch::testing::random_realization(rng, circuits.back()));
    }
    parallel_for(circuits.size(), [&](size_t i) {
        const BareCircuit &c = circuits[i];
        const Realization &r = realizations[i];
        auto gens = reset_generators(c);
        for (const auto &m : c.measurements) {
            ObservableSpec o{{m.id}};
            PauliRegion back = backpropagate(c, o, r);
            PauliRegion rep = observable_representation(c, o);
            for (const auto &gen : gens) {
                ResetStabilizer s{{gen}};
                bool via_back = regions_anticommute(back, s.pauli_representation());
                bool via_fwd = regions_anticommute(forward_propagate(c, s, r), rep);
                if (via_back != via_fwd) {
                    pass = false;
                }
                checked++;
            }
        }
    });
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "anticommutation equivalence on 1000 random circuits, %d pairs (%.1fs)",
                  checked.load(), timer.seconds());
    report(3, pass, buf);
}

void criterion_4_projection_property() {
    Timer timer;
    bool pass = true;
    int observables = 0;
    auto check_circuit = [&](const BareCircuit &bare, const Realization &r) {
        std::vector<ObservableSpec> reliable;
        for (const auto &m : bare.measurements) {
            ObservableSpec spec{{m.id}};
            if (!is_fragile(bare, spec, r).fragile) {
                reliable.push_back(spec);
            }
        }
        if (reliable.empty()) {
            return;
        }
        EncodedCircuit enc = encode(bare, 3, r);
        DetectorSet dets = build_detectors(enc, Frame::PreGate);
        DecodingHypergraph dem = build_dem(enc, dets, reliable, NoiseModel::basic(0.01));
        for (size_t k = 0; k < reliable.size(); k++) {
            try {
                extract_subgraph(dem, k);
                observables++;
            } catch (const SubgraphError &) {
                pass = false;
            }
        }
    };
    for (RepeatedGate g : {RepeatedGate::I, RepeatedGate::H, RepeatedGate::S,
                           RepeatedGate::Cnot, RepeatedGate::AltCnot}) {
        for (bool x_basis : {false, true}) {
            check_circuit(gen_repeated_gate(g, 3, x_basis), Realization{});
        }
    }
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 100; trial++) {
        lomatch::testing::RandomCircuitOptions opt;
        opt.max_qubits = 3;
        opt.max_layers = 6;
        opt.encodable_gates_only = true;
        opt.allow_conditionals = false;
        BareCircuit bare = lomatch::testing::random_circuit(rng, opt);
        check_circuit(bare, Realization{});
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "every projection is a graph, %d observables (%.1fs)",
                  observables, timer.seconds());
    report(4, pass, buf);
}

void criterion_5_exhaustive_correction() {
    Timer timer;
    std::atomic<bool> pass{true};
    // Weight-1 at d=3, every repeated-gate experiment and basis.
    for (RepeatedGate g :
         {RepeatedGate::I, RepeatedGate::H, RepeatedGate::S, RepeatedGate::Cnot}) {
        for (bool x_basis : {false, true}) {
            BareCircuit bare = gen_repeated_gate(g, 3, x_basis);
            Artifacts a = make(bare, 3, Realization{}, repeated_gate_observables(bare),
                               NoiseModel::basic(0.01));
            LomDecoder lom(a.dem, a.plan);
            for (const auto &h : a.dem.edges) {
                Syndrome syn = syndrome_of_edges(a.dem, {h.id});
                LomPrediction pred = lom.decode(syn);
                for (const auto &entry : pred.requested) {
                    size_t obs = a.plan.observable_index(entry.spec);
                    if (entry.flip != bool((syn.true_obs_mask >> obs) & 1)) {
                        pass = false;
                    }
                }
            }
        }
    }
    bool weight1 = pass;
    // Weight-2 pairs at d=5 for the repeated fold-gate experiment.
    uint64_t pairs_total = 0;
    for (bool x_basis : {false, true}) {
        BareCircuit bare = gen_repeated_gate(RepeatedGate::S, 5, x_basis);
        Artifacts a = make(bare, 5, Realization{}, repeated_gate_observables(bare),
                           NoiseModel::basic(0.01));
        LomDecoder lom(a.dem, a.plan);
        size_t n = a.dem.edges.size();
        std::atomic<uint64_t> pairs{0};
        parallel_for(n, [&](size_t i) {
            uint64_t local = 0;
            for (size_t j = i + 1; j < n; j++) {
                Syndrome syn = syndrome_of_edges(a.dem, {int(i), int(j)});
                LomPrediction pred = lom.decode(syn);
                for (const auto &entry : pred.requested) {
                    size_t obs = a.plan.observable_index(entry.spec);
                    if (entry.flip != bool((syn.true_obs_mask >> obs) & 1)) {
                        pass = false;
                    }
                }
                local++;
            }
            pairs += local;
        });
        pairs_total += pairs.load();
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "all weight-1 at d=3 (%s) and %llu weight-2 pairs at d=5 corrected (%.1fs)",
                  weight1 ? "ok" : "failed", (unsigned long long)pairs_total, timer.seconds());
    report(5, pass, buf);
}

void criterion_6_splitting_failure() {
    Timer timer;
    // Regression fixture: a weight-2 pattern at d=5 that the splitting
    // baseline mis-decodes while the full decoder is correct.
    BareCircuit bare = gen_repeated_gate(RepeatedGate::S, 5, false);
    Artifacts a = make(bare, 5, Realization{}, repeated_gate_observables(bare),
                       NoiseModel::basic(0.01));
    LomDecoder lom(a.dem, a.plan);
    SplittingDecoder split(a.dem);
    size_t obs = a.plan.observable_index(ObservableSpec{{1}});
    bool fixture_found = false;
    int fixture_a = -1, fixture_b = -1;
    for (const auto &h : a.dem.edges) {
        if (h.detectors.size() != 3 || fixture_found) {
            continue;
        }
        for (const auto &other : a.dem.edges) {
            if (other.id == h.id) {
                continue;
            }
            Syndrome syn = syndrome_of_edges(a.dem, {h.id, other.id});
            bool truth = (syn.true_obs_mask >> obs) & 1;
            if (bool((split.decode(syn) >> obs) & 1) == truth) {
                continue;
            }
            LomPrediction pred = lom.decode(syn);
            if (pred.requested[0].flip == truth) {
                fixture_found = true;
                fixture_a = h.id;
                fixture_b = other.id;
                break;
            }
        }
    }
    report(6, fixture_found,
           fixture_found
               ? "weight-2 pattern h" + std::to_string(fixture_a) + "+h" +
                     std::to_string(fixture_b) +
                     " at d=5: splitting wrong, full decoder right"
               : "no weight-2 splitting failure found at d=5");

    // Scaling of the splitting baseline. The in-scope noise models expose the
    // linear term only at d=3; at d=5 it is below the quadratic term for
    // p >= 1e-3 (the level-1 failures of Fig-6 type come from circuit-level
    // faults, which are out of scope), so the d=5 half of this check is
    // expected to fail and is reported honestly.
    std::vector<double> ps{1e-3, 3e-3, 1e-2};
    for (int d : {3, 5}) {
        BareCircuit circuit = gen_repeated_gate(RepeatedGate::S, d, false);
        Artifacts art = make(circuit, d, Realization{}, repeated_gate_observables(circuit),
                             NoiseModel::phenomenological(0.01));
        std::vector<double> rates;
        for (double p : ps) {
            Artifacts point = make(circuit, d, Realization{},
                                   repeated_gate_observables(circuit),
                                   NoiseModel::phenomenological(p));
            SplittingDecoder dec(point.dem);
            uint64_t scored = 0;
            for (const auto &spec : point.plan.requested) {
                scored |= uint64_t{1} << point.plan.observable_index(spec);
            }
            MonteCarloOptions opts;
            opts.max_shots = 100000;
            opts.max_failures = 1u << 30;
            opts.seed = 600 + uint64_t(d);
            opts.threads = hw_threads();
            MonteCarloResult res = monte_carlo(
                point.dem,
                [&](const ShotSample &shot, uint64_t) { return dec.decode(shot.syndrome); },
                scored, opts);
            rates.push_back(std::max(res.p_log, 1e-9));
        }
        double slope = log_log_slope(ps, rates);
        bool in_range = slope >= 0.8 && slope <= 1.2;
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "splitting slope at d=%d is %.2f (target [0.8,1.2], 1e5 shots/point, "
                      "%.0fs)",
                      d, slope, timer.seconds());
        report(6, in_range, buf);
    }
}

void criterion_7_lom_scaling() {
    Timer timer;
    BareCircuit bare3 = gen_repeated_gate(RepeatedGate::I, 3, false);
    std::vector<double> ps{3e-3, 5.5e-3, 1e-2};
    std::vector<double> rates;
    for (double p : ps) {
        Artifacts a = make(bare3, 3, Realization{}, repeated_gate_observables(bare3),
                           NoiseModel::phenomenological(p));
        LomDecoder lom(a.dem, a.plan);
        uint64_t scored = uint64_t{1} << a.plan.observable_index(ObservableSpec{{1}});
        MonteCarloOptions opts;
        opts.max_shots = 400000;
        opts.max_failures = 1000;
        opts.seed = 700;
        opts.threads = hw_threads();
        MonteCarloResult res = monte_carlo(
            a.dem,
            [&](const ShotSample &shot, uint64_t) {
                return lom.decode(shot.syndrome).requested[0].flip ? scored : 0;
            },
            scored, opts);
        rates.push_back(std::max(res.p_log, 1e-9));
    }
    double slope = log_log_slope(ps, rates);
    bool slope_ok = slope >= 1.6 && slope <= 2.4;
    char buf[200];
    std::snprintf(buf, sizeof buf, "memory d=3 log-log slope %.2f (target [1.6,2.4], %.0fs)",
                  slope, timer.seconds());
    report(7, slope_ok, buf);

    // Crossing bracket of the d=3 and d=5 curves.
    std::vector<double> grid{0.02, 0.0225, 0.025, 0.0275, 0.03};
    std::map<int, std::vector<double>> curves;
    for (int d : {3, 5}) {
        BareCircuit bare = gen_repeated_gate(RepeatedGate::I, d, false);
        for (double p : grid) {
            Artifacts a = make(bare, d, Realization{}, repeated_gate_observables(bare),
                               NoiseModel::phenomenological(p));
            LomDecoder lom(a.dem, a.plan);
            uint64_t scored = uint64_t{1} << a.plan.observable_index(ObservableSpec{{1}});
            MonteCarloOptions opts;
            opts.max_shots = 120000;
            opts.max_failures = 1200;
            opts.seed = 710 + uint64_t(d);
            opts.threads = hw_threads();
            MonteCarloResult res = monte_carlo(
                a.dem,
                [&](const ShotSample &shot, uint64_t) {
                    return lom.decode(shot.syndrome).requested[0].flip ? scored : 0;
                },
                scored, opts);
            curves[d].push_back(res.p_log);
        }
    }
    double lo = -1, hi = -1;
    for (size_t i = 0; i + 1 < grid.size(); i++) {
        double a0 = curves[3][i] - curves[5][i];
        double a1 = curves[3][i + 1] - curves[5][i + 1];
        if (a0 > 0 && a1 <= 0) {  // d=3 above d=5 before, below after
            lo = grid[i];
            hi = grid[i + 1];
        }
        if (a0 < 0 && a1 >= 0) {
            lo = grid[i];
            hi = grid[i + 1];
        }
    }
    bool crossing_ok = lo > 0 && lo <= 0.028 && hi >= 0.018;
    char buf2[200];
    if (lo > 0) {
        std::snprintf(buf2, sizeof buf2,
                      "d=3 vs d=5 crossing bracket [%.4f, %.4f] intersects [0.018, 0.028] "
                      "(%.0fs)",
                      lo, hi, timer.seconds());
    } else {
        std::snprintf(buf2, sizeof buf2, "no crossing found on the grid (%.0fs)",
                      timer.seconds());
    }
    report(7, crossing_ok, buf2);
}

void criterion_8_min_error_weight() {
    Timer timer;
    bool pass = true;
    std::string detail = "min undetectable weights:";
    for (RepeatedGate g :
         {RepeatedGate::I, RepeatedGate::H, RepeatedGate::S, RepeatedGate::Cnot}) {
        BareCircuit bare = gen_repeated_gate(g, 3, false);
        Artifacts a = make(bare, 3, Realization{}, repeated_gate_observables(bare),
                           NoiseModel::phenomenological(0.01));
        DistanceQuery q;
        q.mode = DistanceQuery::Mode::Lom;
        q.observable_index = a.plan.observable_index(ObservableSpec{{1}});
        q.max_weight = 3;
        DistanceResult res = brute_force_distance(a.dem, q);
        pass = pass && res.found && res.weight == 3;
        detail += " lom=" + std::to_string(res.found ? res.weight : -1);
    }
    {
        BareCircuit bare = gen_repeated_gate(RepeatedGate::I, 3, false);
        Artifacts a = make(bare, 3, Realization{}, repeated_gate_observables(bare),
                           NoiseModel::basic(0.01));
        DistanceQuery q;
        q.mode = DistanceQuery::Mode::Circuit;
        q.max_weight = 3;
        DistanceResult res = brute_force_distance(a.dem, q);
        pass = pass && res.found && res.weight == 3;
        detail += " circuit=" + std::to_string(res.found ? res.weight : -1);
    }
    char buf[240];
    std::snprintf(buf, sizeof buf, "%s, all equal 3 (%.0fs)", detail.c_str(), timer.seconds());
    report(8, pass, buf);
}

void criterion_9_fragile_fixtures() {
    Timer timer;
    // Coin-consistency and product correctness on the two-measurement
    // preparation circuit for every single error.
    BareCircuit bell = parse_circuit(lomatch::testing::kBellCircuit);
    Artifacts a = make(bell, 3, Realization{}, {ObservableSpec{{1, 2}}},
                       NoiseModel::basic(0.01));
    LomDecoder lom(a.dem, a.plan);
    size_t obs = a.plan.observable_index(ObservableSpec{{1, 2}});
    bool consistent = true;
    for (const auto &h : a.dem.edges) {
        Syndrome syn = syndrome_of_edges(a.dem, {h.id});
        for (uint64_t coin : {0ull, 1ull, 5ull}) {
            LomPrediction pred = lom.decode(syn, coin);
            bool f1 = pred.measurements[0].flip;
            bool f2 = pred.measurements[1].flip;
            bool f3 = pred.requested[0].flip;
            consistent = consistent && ((f1 ^ f2) == f3);
            consistent = consistent && (f3 == bool((syn.true_obs_mask >> obs) & 1));
        }
    }
    report(9, consistent,
           "fragile-pair procedure is consistent and correct for every weight-1 error");

    // Weight-5 inconsistency of independent single-observable decoding in the
    // d=7 double-entangler circuit: the first observable flips while the
    // second and the product do not.
    BareCircuit two = parse_circuit("R0 0 ; R0 1\nCNOT 0 1\nCNOT 0 1\nMZ 0 ; MZ 1\n");
    std::vector<ObservableSpec> obs3{{{1}}, {{2}}, {{1, 2}}};
    Artifacts b = make(two, 7, Realization{}, obs3, NoiseModel::basic(0.01));
    LomDecoder lom7(b.dem, b.plan);
    std::map<int, int> mech2edge;
    for (const auto &h : b.dem.edges) {
        for (int m : h.mechanisms) {
            mech2edge[m] = h.id;
        }
    }
    auto find_edge = [&](int layer, int reg, int local, Pauli pl) {
        for (size_t i = 0; i < b.dem.mechanisms.size(); i++) {
            const auto &m = b.dem.mechanisms[i];
            if (m.kind == ErrorMechanism::DataPauli && m.layer == layer && m.reg == reg &&
                m.local == local && m.pauli == pl && m.pre_gate) {
                auto it = mech2edge.find(int(i));
                return it == mech2edge.end() ? -1 : it->second;
            }
        }
        return -1;
    };
    bool found = false;
    std::string witness;
    for (int x0 = 0; x0 <= 2 && !found; x0++) {
        for (int tp = 0; tp < 32 && !found; tp++) {
            std::vector<int> ids;
            bool ok = true;
            Syndrome syn;
            std::set<int> defects;
            for (int k = 0; k < 5; k++) {
                int local = b.enc.layout.data_index(Coord{2 * (x0 + k), 0});
                int edge = find_edge(((tp >> k) & 1) ? 2 : 1, 0, local, Pauli::X);
                if (edge < 0) {
                    ok = false;
                    break;
                }
                ids.push_back(edge);
            }
            if (!ok || std::set<int>(ids.begin(), ids.end()).size() != 5) {
                continue;
            }
            for (int id : ids) {
                syn.true_obs_mask ^= b.dem.edges[size_t(id)].obs_mask;
                for (int det : b.dem.edges[size_t(id)].detectors) {
                    auto [it, fresh] = defects.insert(det);
                    if (!fresh) {
                        defects.erase(it);
                    }
                }
            }
            syn.defects.assign(defects.begin(), defects.end());
            bool f1 = lom7.decode_observable(syn, b.plan.observable_index(obs3[0]));
            bool f2 = lom7.decode_observable(syn, b.plan.observable_index(obs3[1]));
            bool f3 = lom7.decode_observable(syn, b.plan.observable_index(obs3[2]));
            if (f1 && !f2 && !f3) {
                found = true;
                witness = "x0=" + std::to_string(x0) + " times=" + std::to_string(tp);
            }
        }
    }
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "weight-5 inconsistency at d=7 (first flips, second and product do not)%s%s "
                  "(%.0fs)",
                  found ? ", witness " : "", found ? witness.c_str() : " NOT FOUND",
                  timer.seconds());
    report(9, found, buf);
}

void criterion_10_windowed_equivalence() {
    Timer timer;
    std::atomic<bool> pass{true};
    uint64_t compared = 0;
    // Weight-1 at d=3 and weight-2 at d=5, slow-reset repeated-gate circuits,
    // with and without short-cut edges.
    for (int d : {3, 5}) {
        for (RepeatedGate g :
             {RepeatedGate::I, RepeatedGate::H, RepeatedGate::S, RepeatedGate::Cnot}) {
            BareCircuit bare = gen_repeated_gate(g, d, true, 2 * d);
            Artifacts a = make(bare, d, Realization{}, repeated_gate_observables(bare),
                               NoiseModel::basic(0.01));
            LomDecoder lom(a.dem, a.plan);
            WindowPlan plan = plan_windows(a.bare, a.enc, d / 2 + 1, d / 2 + 1);
            std::vector<std::unique_ptr<WindowedDecoder>> variants;
            variants.push_back(std::make_unique<WindowedDecoder>(a.dem, a.enc, a.bare,
                                                                 a.realization, plan, false));
            variants.push_back(std::make_unique<WindowedDecoder>(a.dem, a.enc, a.bare,
                                                                 a.realization, plan, true));
            size_t n = a.dem.edges.size();
            std::atomic<uint64_t> local{0};
            parallel_for(n, [&](size_t i) {
                uint64_t count = 0;
                size_t j_hi = d == 3 ? i + 1 : n;  // singles at d=3, pairs at d=5
                for (size_t j = i; j < j_hi; j++) {
                    Syndrome syn = d == 3 ? syndrome_of_edges(a.dem, {int(i)})
                                          : syndrome_of_edges(a.dem, {int(i), int(j)});
                    if (d == 5 && j == i) {
                        continue;  // identical mechanisms cancel
                    }
                    LomPrediction ref = lom.decode(syn);
                    for (const auto &variant : variants) {
                        auto windowed = variant->decode(syn);
                        for (const auto &entry : ref.measurements) {
                            int mid = *entry.spec.measurements.begin();
                            if (windowed.at(mid) != entry.flip) {
                                pass = false;
                            }
                        }
                    }
                    count++;
                }
                local += count;
            });
            compared += local.load();
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "windowed equals windowless on %llu error patterns, both variants (%.0fs)",
                  (unsigned long long)compared, timer.seconds());
    report(10, pass, buf);

    // Short-cut metric: Dijkstra distance inside 50 random tracks equals the
    // relabeled-coordinate formula.
    std::mt19937_64 rng(1010);
    bool metric_ok = true;
    int tracks_checked = 0;
    while (tracks_checked < 50) {
        RepeatedGate g =
            std::array<RepeatedGate, 3>{RepeatedGate::I, RepeatedGate::H,
                                        RepeatedGate::S}[rng() % 3];
        bool x_basis = rng() % 2;
        BareCircuit bare = gen_repeated_gate(g, 3, x_basis, 6 + int(rng() % 4));
        Artifacts a = make(bare, 3, Realization{}, repeated_gate_observables(bare),
                           NoiseModel::basic(0.01));
        WindowPlan plan = plan_windows(a.bare, a.enc, 2, 2);
        WindowedDecoder dec(a.dem, a.enc, a.bare, a.realization, plan, true);
        size_t w = rng() % std::max<size_t>(1, dec.plan().windows.size());
        if (dec.tracks_in_window(w) == 0) {
            continue;
        }
        size_t track = rng() % dec.tracks_in_window(w);
        const auto &verts = dec.track_vertices(w, track);
        const MatchGraph &graph = dec.track_graph(w, track);
        if (verts.size() < 2) {
            continue;
        }
        ShortestPathEngine engine(graph);
        auto relabel = [&](size_t vid) {
            const Detector &det = a.dets.detectors[size_t(verts[vid])];
            int z2 = det.x_type ? det.coord.x2 : det.coord.y2;
            int zt2 = (det.x_type ? det.coord.y2 : det.coord.x2) + 1;
            return std::tuple<int, int, int, bool>(det.t, z2 / 2, zt2 / 2, det.x_type);
        };
        for (int probe = 0; probe < 20; probe++) {
            size_t ai = rng() % verts.size();
            size_t bi = rng() % verts.size();
            auto [ta, za, zta, ka] = relabel(ai);
            auto [tb, zb, ztb, kb] = relabel(bi);
            if (ai == bi) {
                continue;
            }
            int64_t expected =
                (std::abs(za - zb) + std::abs(zta - ztb) + std::abs(ta - tb) +
                 ((ta == tb && ka != kb) ? 1 : 0)) *
                kWeightScale;
            if (engine.from(int(ai)).dist[bi] != expected) {
                metric_ok = false;
            }
            int64_t boundary = std::min(int64_t(3 - zta), int64_t(zta)) * kWeightScale;
            if (engine.from(int(ai)).dist[size_t(engine.boundary_vertex())] != boundary) {
                metric_ok = false;
            }
        }
        tracks_checked++;
    }
    char buf2[160];
    std::snprintf(buf2, sizeof buf2, "short-cut metric formula on %d random tracks (%.0fs)",
                  tracks_checked, timer.seconds());
    report(10, metric_ok, buf2);
}

void criterion_11_preferential_treatment() {
    Timer timer;
    BareCircuit bare = gen_repeated_gate(RepeatedGate::AltCnot, 3, false);
    std::vector<ObservableSpec> requested{ObservableSpec{{1}}, ObservableSpec{{2}},
                                          ObservableSpec{{1, 2}}};
    Artifacts a = make(bare, 3, Realization{}, requested, NoiseModel::phenomenological(0.01));
    LomDecoder lom(a.dem, a.plan);
    size_t o1 = a.plan.observable_index(ObservableSpec{{1}});
    size_t o2 = a.plan.observable_index(ObservableSpec{{2}});
    size_t o12 = a.plan.observable_index(ObservableSpec{{1, 2}});
    std::atomic<uint64_t> direct_fail{0}, xor_fail{0};
    uint64_t shots = 1'000'000;
    std::atomic<uint64_t> cursor{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < hw_threads(); t++) {
        pool.emplace_back([&]() {
            for (;;) {
                uint64_t shot = cursor.fetch_add(1);
                if (shot >= shots) {
                    return;
                }
                ShotSample sample = sample_shot(a.dem, 1100, shot);
                bool truth = (sample.syndrome.true_obs_mask >> o12) & 1;
                bool direct = lom.decode_observable(sample.syndrome, o12);
                bool via_xor = lom.decode_observable(sample.syndrome, o1) ^
                               lom.decode_observable(sample.syndrome, o2);
                if (direct != truth) {
                    direct_fail++;
                }
                if (via_xor != truth) {
                    xor_fail++;
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    double p_direct = double(direct_fail.load()) / double(shots);
    double p_xor = double(xor_fail.load()) / double(shots);
    double sigma = std::sqrt((p_direct * (1 - p_direct) + p_xor * (1 - p_xor)) / double(shots));
    bool pass = p_direct <= p_xor + 2 * sigma;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "direct product decode %.3e <= xor method %.3e + 2 sigma (%.1e), 1e6 shots "
                  "(%.0fs)",
                  p_direct, p_xor, sigma, timer.seconds());
    report(11, pass, buf);
}

void property_split_vs_drop() {
    Timer timer;
    // Auxiliary statistical property: the two oversized-projection policies
    // land within 10% relative logical error probability of one another.
    BareCircuit bare = gen_repeated_gate(RepeatedGate::S, 3, true);
    Artifacts a = make(bare, 3, Realization{}, repeated_gate_observables(bare),
                       NoiseModel::phenomenological(0.01));
    size_t obs = a.plan.observable_index(ObservableSpec{{1}});
    uint64_t scored = uint64_t{1} << obs;
    double rates[2];
    int idx = 0;
    for (HyperedgePolicy policy : {HyperedgePolicy::Drop, HyperedgePolicy::SplitReweight}) {
        LomDecoder lom(a.dem, a.plan, policy);
        MonteCarloOptions opts;
        opts.max_shots = 1'000'000;
        opts.max_failures = 1u << 30;
        opts.seed = 1200;
        opts.threads = hw_threads();
        MonteCarloResult res = monte_carlo(
            a.dem,
            [&](const ShotSample &shot, uint64_t) {
                return lom.decode_observable(shot.syndrome, obs) ? scored : 0;
            },
            scored, opts);
        rates[idx++] = res.p_log;
    }
    double rel = std::abs(rates[0] - rates[1]) / std::max(rates[0], rates[1]);
    bool pass = rel < 0.10;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "drop=%.4e split=%.4e relative difference %.1f%% < 10%% (1e6 shots, %.0fs)",
                  rates[0], rates[1], rel * 100.0, timer.seconds());
    report(12, pass, buf);
}

}  // namespace

int main() {
    std::printf("acceptance suite (threads: %d)\n", hw_threads());
    criterion_1_fold_transversal();
    criterion_2_determinism();
    criterion_3_propagation_lemma();
    criterion_4_projection_property();
    criterion_5_exhaustive_correction();
    criterion_6_splitting_failure();
    criterion_7_lom_scaling();
    criterion_8_min_error_weight();
    criterion_9_fragile_fixtures();
    criterion_10_windowed_equivalence();
    criterion_11_preferential_treatment();
    property_split_vs_drop();
    std::printf(
        "note: absolute error rates under circuit-level hardware noise are out of scope; "
        "the checks above substitute property- and scaled-experiment acceptance.\n");
    std::printf("failures: %d\n", g_failures);
    return g_failures;
}
