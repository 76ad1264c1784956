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

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lomatch/distance.h"
#include "lomatch/experiments.h"
#include "lomatch/sampler.h"
#include "lomatch/window.h"

using namespace lomatch;

namespace {

struct GlobalOptions {
    uint64_t seed = 0;
    int threads = 1;
    std::string frame = "pre";
    std::string format = "csv";
};

std::string read_input(const std::string &path) {
    if (path.empty() || path == "-") {
        std::stringstream buffer;
        buffer << std::cin.rdbuf();
        return buffer.str();
    }
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open input file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_output(const std::string &path, const std::string &content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw std::invalid_argument("cannot open output file '" + path + "'");
    }
    out << content;
}

Frame parse_frame(const std::string &name) {
    if (name == "pre") {
        return Frame::PreGate;
    }
    if (name == "post") {
        return Frame::PostGate;
    }
    throw std::invalid_argument("frame must be 'pre' or 'post'");
}

NoiseModel parse_noise(const std::string &name, double p) {
    if (name == "basic") {
        return NoiseModel::basic(p);
    }
    if (name == "phenom" || name == "phenomenological") {
        return NoiseModel::phenomenological(p);
    }
    throw std::invalid_argument("noise must be 'basic' or 'phenom'");
}

BareCircuit load_circuit(const std::string &circuit_file, const std::string &exp, int d,
                         const std::string &basis, int idle_rounds) {
    if (!exp.empty()) {
        return gen_repeated_gate(repeated_gate_from_name(exp), d, basis == "X", idle_rounds);
    }
    return parse_circuit(read_input(circuit_file));
}

Realization default_realization(const BareCircuit &c) {
    Realization r;
    for (const auto &m : c.measurements) {
        if (m.conditions_something) {
            r.bits[m.id] = false;
        }
    }
    return r;
}

struct RunArtifacts {
    BareCircuit bare;
    Realization realization;
    EncodedCircuit enc;
    DetectorSet dets;
    LomPlan plan;
    DecodingHypergraph dem;
};

RunArtifacts build_artifacts(const BareCircuit &bare, int d, Frame frame,
                             const NoiseModel &noise) {
    RunArtifacts a;
    a.bare = bare;
    a.realization = default_realization(bare);
    a.enc = encode(bare, d, a.realization);
    a.dets = build_detectors(a.enc, frame);
    std::vector<ObservableSpec> requested;
    for (const auto &m : bare.measurements) {
        ObservableSpec spec{{m.id}};
        if (!is_fragile(bare, spec, a.realization).fragile) {
            requested.push_back(spec);
        }
    }
    a.plan = plan_lom(bare, a.realization, requested);
    a.dem = build_dem(a.enc, a.dets, a.plan.observables, noise);
    return a;
}

struct PointResult {
    int d;
    double p;
    MonteCarloResult mc;
};

std::string format_results(const std::vector<PointResult> &rows, const std::string &format) {
    if (format == "json") {
        nlohmann::json out = nlohmann::json::array();
        for (const auto &row : rows) {
            out.push_back({{"d", row.d},
                           {"p", row.p},
                           {"shots", row.mc.shots},
                           {"failures", row.mc.failures},
                           {"p_log", row.mc.p_log},
                           {"ci_lo", row.mc.ci_lo},
                           {"ci_hi", row.mc.ci_hi}});
        }
        return out.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "d,p,shots,failures,p_log,ci_lo,ci_hi\n";
    for (const auto &row : rows) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%d,%.8g,%llu,%llu,%.8g,%.8g,%.8g\n", row.d, row.p,
                      static_cast<unsigned long long>(row.mc.shots),
                      static_cast<unsigned long long>(row.mc.failures), row.mc.p_log,
                      row.mc.ci_lo, row.mc.ci_hi);
        out << buf;
    }
    return out.str();
}

struct DecoderChoice {
    std::string name = "lom";
    int commit_width = 0;
    int buffer_width = 0;
    bool shortcut = false;
    bool synchronize = false;
    double slow_reset_factor = 1.0;
};

PointResult run_point(const BareCircuit &bare, int d, Frame frame, const NoiseModel &noise,
                      const DecoderChoice &decoder, const MonteCarloOptions &mc_opts) {
    RunArtifacts a = build_artifacts(bare, d, frame, noise);
    uint64_t scored = 0;
    std::vector<size_t> requested_idx;
    for (const auto &spec : a.plan.requested) {
        size_t idx = a.plan.observable_index(spec);
        requested_idx.push_back(idx);
        scored |= uint64_t{1} << idx;
    }
    PointResult row{d, noise.p, {}};
    if (decoder.name == "lom") {
        LomDecoder lom(a.dem, a.plan);
        row.mc = monte_carlo(
            a.dem,
            [&](const ShotSample &shot, uint64_t) {
                LomPrediction pred = lom.decode(shot.syndrome);
                uint64_t mask = 0;
                for (size_t k = 0; k < pred.requested.size(); k++) {
                    if (pred.requested[k].flip) {
                        mask |= uint64_t{1} << requested_idx[k];
                    }
                }
                return mask;
            },
            scored, mc_opts);
    } else if (decoder.name == "splitting") {
        SplittingDecoder splitting(a.dem);
        row.mc = monte_carlo(
            a.dem,
            [&](const ShotSample &shot, uint64_t) { return splitting.decode(shot.syndrome); },
            scored, mc_opts);
    } else if (decoder.name == "windowed") {
        int commit = decoder.commit_width > 0 ? decoder.commit_width : d / 2 + 1;
        int buffer = decoder.buffer_width > 0 ? decoder.buffer_width : d / 2 + 1;
        WindowPlan plan = plan_windows(a.bare, a.enc, commit, buffer,
                                       decoder.slow_reset_factor, decoder.synchronize);
        WindowedDecoder windowed(a.dem, a.enc, a.bare, a.realization, plan, decoder.shortcut);
        row.mc = monte_carlo(
            a.dem,
            [&](const ShotSample &shot, uint64_t) {
                auto flips = windowed.decode(shot.syndrome);
                uint64_t mask = 0;
                for (size_t k = 0; k < a.plan.requested.size(); k++) {
                    bool flip = false;
                    for (int mid : a.plan.requested[k].measurements) {
                        flip = flip ^ flips.at(mid);
                    }
                    if (flip) {
                        mask |= uint64_t{1} << requested_idx[k];
                    }
                }
                return mask;
            },
            scored, mc_opts);
    } else {
        throw std::invalid_argument("decoder must be lom, splitting or windowed");
    }
    return row;
}

std::vector<double> parse_list(const std::string &text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(std::stod(item));
    }
    if (out.empty()) {
        throw std::invalid_argument("empty list");
    }
    return out;
}

std::vector<int> parse_int_list(const std::string &text) {
    std::vector<int> out;
    for (double v : parse_list(text)) {
        out.push_back(int(v));
    }
    return out;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Compiles logical Clifford circuits on the unrotated surface code into "
                 "decoding hypergraphs and benchmarks matching-based decoders"};
    app.require_subcommand(1);
    app.fallthrough();
    GlobalOptions global;
    app.add_option("--seed", global.seed, "Master random seed");
    app.add_option("--threads", global.threads, "Worker threads (env LOMDEC_THREADS overrides)");
    app.add_option("--frame", global.frame, "Detector frame: pre|post")->capture_default_str();
    app.add_option("--format", global.format, "Output format: csv|json")->capture_default_str();

    std::string circuit_file, exp, basis = "Z", out_file;
    int d = 3, idle_rounds = 0;
    double p = 0.01;
    std::string noise = "basic";
    std::string p_list = "0.01", d_list = "3";
    uint64_t max_shots = 10000000, max_failures = 1000;
    DecoderChoice decoder;
    std::string distance_mode = "circuit";
    int max_weight = 3;
    int trials = 20;
    uint64_t budget = 200000000;
    size_t observable_index = 0;

    auto add_circuit_opts = [&](CLI::App *cmd) {
        cmd->add_option("--circuit", circuit_file, "Circuit file ('-' for stdin)");
        cmd->add_option("--exp", exp,
                        "Generator: repeated-I|repeated-H|repeated-S|repeated-CNOT|"
                        "repeated-altCNOT");
        cmd->add_option("--d", d, "Code distance (odd, >= 3)")->capture_default_str();
        cmd->add_option("--basis", basis, "Experiment basis: Z|X")->capture_default_str();
        cmd->add_option("--idle-rounds", idle_rounds,
                        "Idle layers between reset and the first gate");
    };
    auto add_decoder_opts = [&](CLI::App *cmd) {
        cmd->add_option("--decoder", decoder.name, "lom|splitting|windowed")
            ->capture_default_str();
        cmd->add_option("--commit-width", decoder.commit_width, "Windowed commit width");
        cmd->add_option("--buffer-width", decoder.buffer_width, "Windowed buffer width");
        cmd->add_flag("--shortcut", decoder.shortcut, "Add short-cut edges to window tracks");
        cmd->add_flag("--synchronize", decoder.synchronize,
                      "Require measurements aligned to window boundaries");
        cmd->add_option("--slow-reset-factor", decoder.slow_reset_factor,
                        "Rounds-per-distance wait after resets");
    };

    CLI::App *gen = app.add_subcommand("gen", "Generate an experiment circuit");
    add_circuit_opts(gen);
    gen->add_option("--out", out_file, "Output path (default stdout)");

    CLI::App *build = app.add_subcommand("build", "Compile a circuit into a hypergraph file");
    add_circuit_opts(build);
    build->add_option("--noise", noise, "basic|phenom")->capture_default_str();
    build->add_option("--p", p, "Physical error probability")->capture_default_str();
    build->add_option("--out", out_file, "Output path (default stdout)");

    CLI::App *run = app.add_subcommand("run", "Monte-Carlo logical error estimate at one point");
    add_circuit_opts(run);
    add_decoder_opts(run);
    run->add_option("--noise", noise, "basic|phenom")->capture_default_str();
    run->add_option("--p", p, "Physical error probability")->capture_default_str();
    run->add_option("--max-shots", max_shots, "Shot cap")->capture_default_str();
    run->add_option("--max-failures", max_failures, "Failure cap")->capture_default_str();
    run->add_option("--out", out_file, "Output path (default stdout)");

    CLI::App *sweep = app.add_subcommand("sweep", "Monte-Carlo sweep over p and d lists");
    add_circuit_opts(sweep);
    add_decoder_opts(sweep);
    sweep->add_option("--noise", noise, "basic|phenom")->capture_default_str();
    sweep->add_option("--p", p_list, "Comma-separated probabilities")->capture_default_str();
    sweep->add_option("--d-list", d_list, "Comma-separated distances")->capture_default_str();
    sweep->add_option("--max-shots", max_shots, "Shot cap per point")->capture_default_str();
    sweep->add_option("--max-failures", max_failures, "Failure cap per point")
        ->capture_default_str();
    sweep->add_option("--out", out_file, "Output path (default stdout)");

    CLI::App *distance = app.add_subcommand("distance", "Exhaustive minimum-weight error search");
    add_circuit_opts(distance);
    distance->add_option("--noise", noise, "basic|phenom")->capture_default_str();
    distance->add_option("--p", p, "Probability used to build the hypergraph")
        ->capture_default_str();
    distance->add_option("--mode", distance_mode, "circuit|lom")->capture_default_str();
    distance->add_option("--observable", observable_index, "Observable index for lom mode");
    distance->add_option("--max-weight", max_weight, "Largest error weight to try")
        ->capture_default_str();
    distance->add_option("--budget", budget, "Combination budget")->capture_default_str();

    CLI::App *check = app.add_subcommand(
        "check", "Self-tests: fragility report, detector determinism, projection property");
    add_circuit_opts(check);
    check->add_option("--trials", trials, "Determinism trials")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (const char *env = std::getenv("LOMDEC_THREADS")) {
        global.threads = std::max(1, std::atoi(env));
    }

    try {
        Frame frame = parse_frame(global.frame);
        if (gen->parsed()) {
            BareCircuit bare = load_circuit(circuit_file, exp, d, basis, idle_rounds);
            write_output(out_file, bare.to_text());
            return 0;
        }
        if (build->parsed()) {
            BareCircuit bare = load_circuit(circuit_file, exp, d, basis, idle_rounds);
            RunArtifacts a = build_artifacts(bare, d, frame, parse_noise(noise, p));
            write_output(out_file, serialize_dem(a.dem));
            return 0;
        }
        if (run->parsed() || sweep->parsed()) {
            MonteCarloOptions mc_opts;
            mc_opts.max_shots = max_shots;
            mc_opts.max_failures = max_failures;
            mc_opts.seed = global.seed;
            mc_opts.threads = global.threads;
            std::vector<PointResult> rows;
            std::vector<int> ds = run->parsed() ? std::vector<int>{d} : parse_int_list(d_list);
            std::vector<double> ps =
                run->parsed() ? std::vector<double>{p} : parse_list(p_list);
            for (int dd : ds) {
                BareCircuit bare = load_circuit(circuit_file, exp, dd, basis, idle_rounds);
                for (double pp : ps) {
                    rows.push_back(run_point(bare, dd, frame, parse_noise(noise, pp), decoder,
                                             mc_opts));
                }
            }
            write_output(out_file, format_results(rows, global.format));
            return 0;
        }
        if (distance->parsed()) {
            BareCircuit bare = load_circuit(circuit_file, exp, d, basis, idle_rounds);
            RunArtifacts a = build_artifacts(bare, d, frame, parse_noise(noise, p));
            DistanceQuery query;
            query.mode = distance_mode == "lom" ? DistanceQuery::Mode::Lom
                                                : DistanceQuery::Mode::Circuit;
            query.observable_index = observable_index;
            query.max_weight = max_weight;
            query.budget = budget;
            DistanceResult res = brute_force_distance(a.dem, query);
            if (res.found) {
                std::cout << "minimum weight: " << res.weight << "\nwitness hyperedges:";
                for (int id : res.witness) {
                    std::cout << " " << id;
                }
                std::cout << "\n";
            } else {
                std::cout << "no undetectable error up to weight " << max_weight << "\n";
            }
            return 0;
        }
        if (check->parsed()) {
            BareCircuit bare = load_circuit(circuit_file, exp, d, basis, idle_rounds);
            Realization r = default_realization(bare);
            std::cout << "fragility:\n";
            for (const auto &m : bare.measurements) {
                ObservableSpec spec{{m.id}};
                auto frag = is_fragile(bare, spec, r);
                auto dual = is_fragile_via_forward(bare, spec, r);
                if (frag.fragile != dual.fragile) {
                    std::cout << "  m" << m.id << ": INCONSISTENT propagation routes\n";
                    return 3;
                }
                std::cout << "  m" << m.id << ": " << (frag.fragile ? "fragile" : "reliable")
                          << "\n";
            }
            auto gens = choose_generating_set(bare, r, {});
            std::cout << "reliable generating set:";
            for (const auto &g : gens) {
                std::cout << " " << g.str();
            }
            std::cout << "\n";
            EncodedCircuit enc = encode(bare, d, r);
            for (Frame f : {Frame::PreGate, Frame::PostGate}) {
                DetectorSet dets = build_detectors(enc, f);
                DeterminismReport report = check_determinism(enc, dets, trials);
                std::cout << (f == Frame::PreGate ? "pre-gate" : "post-gate")
                          << " determinism: "
                          << (report.ok() ? "pass"
                                          : std::to_string(report.violations.size()) +
                                                " violations")
                          << "\n";
                if (!report.ok()) {
                    return 2;
                }
            }
            DetectorSet dets = build_detectors(enc, frame);
            LomPlan plan = plan_lom(bare, r, {});
            DecodingHypergraph dem = build_dem(enc, dets, plan.observables,
                                               NoiseModel::basic(0.01));
            for (size_t k = 0; k < plan.observables.size(); k++) {
                extract_subgraph(dem, k);  // throws if a projection is not an edge
            }
            std::cout << "projection property: pass (" << plan.observables.size()
                      << " observables)\n";
            return 0;
        }
    } catch (const CircuitParseError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DemParseError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
