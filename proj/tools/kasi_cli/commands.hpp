/*
 * Copyright 2026 The kasi Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kasi/kasi.hpp"

namespace kasi::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kInputError = 2, kBudgetExceeded = 3 };

struct RunConfig
{
    std::string input = "-";
    std::string algorithm = "kasi";
    std::string problem = "lb";
    std::optional<Weight> bound;
    std::string output = "-";
    std::string emit_strategy;
    std::string emit_witness;
    std::string vi_variant = "worklist";
    bool check_conditions = false;
};

struct VerifyConfig
{
    std::vector<std::string> inputs;
    std::size_t trials = 500;
    std::size_t n_max = 7;
    Weight weight_max = 4;
    Weight bound_max = 10;
    std::size_t max_out_degree = 3;
    std::uint64_t seed = 1;
    std::size_t budget = 1'000'000;
    std::string counterexample = "counterexample.mpg";
};

struct BenchConfig
{
    std::vector<std::string> inputs;
    bool desk = false;
    std::vector<std::string> algorithms{"kasi", "vi"};
    std::vector<std::string> problems{"lb", "lwub"};
    std::optional<Weight> bound;
    std::size_t repeat = 3;
    double timeout = 60.0;
    std::uint64_t seed = 1;
    std::string output = "-";
};

/// Bad arguments or unreadable files, as opposed to malformed game text.
struct UsageError : Error
{
    using Error::Error;
};

inline std::string read_input(const std::string& path)
{
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(in), {}};
}

inline void write_output(const std::string& path, const std::string& text)
{
    if (path == "-" || path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << text;
}

/// Map library errors to exit codes, reporting on `err`.
inline int run_guarded(const std::function<int()>& body, std::ostream& err = std::cerr)
{
    try {
        return body();
    } catch (const BudgetExceeded& e) {
        err << "budget exceeded: " << e.what() << '\n';
        return kBudgetExceeded;
    } catch (const TimeLimitExceeded& e) {
        err << "time limit: " << e.what() << '\n';
        return kBudgetExceeded;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kInputError;
    } catch (const StructuralError& e) {
        err << "invalid game: " << e.what() << '\n';
        return kInputError;
    } catch (const InvalidSpec& e) {
        err << "invalid generator spec: " << e.what() << '\n';
        return kInputError;
    } catch (const OverflowRisk& e) {
        err << "weights too large: " << e.what() << '\n';
        return kInputError;
    } catch (const InvalidStrategy& e) {
        err << "invalid strategy: " << e.what() << '\n';
        return kInputError;
    } catch (const Error& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
}

inline int cmd_solve(const RunConfig& cfg, std::ostream& err = std::cerr)
{
    return run_guarded(
        [&] {
            if (cfg.problem != "lb" && cfg.problem != "lwub") throw UsageError("problem must be lb or lwub");
            if (cfg.problem == "lwub" && !cfg.bound) throw UsageError("--bound is required for lwub");
            if (cfg.problem == "lb" && cfg.bound) throw UsageError("--bound only applies to lwub");
            if (cfg.bound && *cfg.bound < 0) throw UsageError("--bound must be non-negative");
            const GameGraph g = io::parse_game(read_input(cfg.input));
            const Weight b = cfg.problem == "lb" ? lower_bound_reduction_bound(g) : *cfg.bound;

            if (cfg.algorithm == "vi") {
                if (!cfg.emit_strategy.empty() || !cfg.emit_witness.empty()) {
                    throw UsageError("strategies and witnesses are only produced by kasi");
                }
                ViOptions vo;
                if (cfg.vi_variant == "plain") vo.variant = ViVariant::Plain;
                else if (cfg.vi_variant != "worklist") throw UsageError("vi variant must be plain or worklist");
                write_output(cfg.output, io::render_result(vi_solve(g, b, vo)));
                return kOk;
            }
            if (cfg.algorithm != "kasi") throw UsageError("algorithm must be kasi or vi");
            SolverOptions so;
            so.check_conditions = cfg.check_conditions;
            const SolveResult r = solve_lwub(g, b, so);
            write_output(cfg.output, io::render_result(r));
            if (!cfg.emit_strategy.empty()) write_output(cfg.emit_strategy, io::render_strategy(r.max_strategy));
            if (!cfg.emit_witness.empty()) write_output(cfg.emit_witness, io::render_witness(r.min_witness));
            return kOk;
        },
        err);
}

inline int cmd_gen(const GenSpec& spec, const std::string& output, std::ostream& err = std::cerr)
{
    return run_guarded(
        [&] {
            const GameGraph g = generate(spec);
            std::ostringstream text;
            text << "c family=" << to_string(spec.family) << " seed=" << spec.seed << " shift=" << spec.shift << '\n'
                 << io::render_game(g);
            write_output(output, text.str());
            return kOk;
        },
        err);
}

/**
 * Delete vertices one at a time while `still_bad` holds, until no single
 * deletion keeps it. Deleted vertices go through induced_subgame, so dead
 * ends become losing self-loops.
 */
inline GameGraph shrink_counterexample(GameGraph g, const std::function<bool(const GameGraph&)>& still_bad)
{
    for (bool progress = true; progress && g.vertex_count() > 1;) {
        progress = false;
        for (VertexId drop = 0; drop < g.vertex_count(); ++drop) {
            std::vector<bool> keep(g.vertex_count(), true);
            keep[drop] = false;
            GameGraph smaller = induced_subgame(g, keep);
            if (still_bad(smaller)) {
                g = std::move(smaller);
                progress = true;
                break;
            }
        }
    }
    return g;
}

/// Empty when kasi, vi and the oracle agree on lwub_b and lb; a description otherwise.
inline std::optional<std::string> disagreement(const GameGraph& g, Weight b, std::size_t budget)
{
    OracleOptions oo;
    oo.state_budget = budget;
    SolverOptions so;
    so.check_conditions = true;
    try {
        const EnergyVector expected = oracle_lwub(g, b, oo);
        if (solve_lwub(g, b, so).lwub != expected) return "kasi lwub differs from the oracle at b=" + std::to_string(b);
        if (vi_solve(g, b) != expected) return "vi lwub differs from the oracle at b=" + std::to_string(b);
        if (solve_lb(g, so).lwub != oracle_lb(g, oo)) return std::string("kasi lb differs from the oracle");
    } catch (const BudgetExceeded&) {
        throw;
    } catch (const Error& e) {
        return std::string("solver failed: ") + e.what();
    }
    return std::nullopt;
}

inline int cmd_verify(const VerifyConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    return run_guarded(
        [&] {
            std::size_t agree = 0, total = 0;
            const auto report = [&](const GameGraph& g, Weight b, const std::string& why) {
                const GameGraph small = shrink_counterexample(
                    g, [&](const GameGraph& h) { return disagreement(h, b, cfg.budget).has_value(); });
                write_output(cfg.counterexample, "c " + why + "\nc bound=" + std::to_string(b) + "\n" +
                                                     io::render_game(small));
                err << "disagreement: " << why << "; shrunk instance (" << small.vertex_count()
                    << " vertices) written to " << cfg.counterexample << '\n';
            };

            for (const std::string& path : cfg.inputs) {
                const GameGraph g = io::parse_game(read_input(path));
                for (Weight b = 0; b <= cfg.bound_max; ++b) {
                    ++total;
                    if (auto why = disagreement(g, b, cfg.budget)) {
                        report(g, b, *why);
                        out << agree << '/' << total << " agree\n";
                        return kInternal;
                    }
                    ++agree;
                }
            }
            if (cfg.inputs.empty()) {
                if (cfg.n_max < 1) throw InvalidSpec("--n-max must be at least 1");
                Rng rng(cfg.seed, Rng::Stream::Structure);
                for (std::size_t t = 0; t < cfg.trials; ++t) {
                    GenSpec spec;
                    spec.family = Family::Uniform;
                    spec.seed = rng.next();
                    spec.n = 1 + rng.below(cfg.n_max);
                    spec.max_out_degree = cfg.max_out_degree;
                    spec.weight_lo = -cfg.weight_max;
                    spec.weight_hi = cfg.weight_max;
                    const GameGraph g = generate(spec);
                    const Weight b = rng.uniform(0, cfg.bound_max);
                    ++total;
                    if (auto why = disagreement(g, b, cfg.budget)) {
                        report(g, b, *why);
                        out << agree << '/' << total << " agree\n";
                        return kInternal;
                    }
                    ++agree;
                }
            }
            out << agree << '/' << total << " agree\n";
            return kOk;
        },
        err);
}

struct BenchInstance
{
    std::string name;
    GameGraph game;
};

/// Desk-scale stand-ins for the experimental families, shifted so that about a quarter of vertices have nu < 0.
inline std::vector<BenchInstance> desk_corpus(std::uint64_t seed)
{
    std::vector<std::pair<std::string, GenSpec>> specs;
    const auto add = [&](const std::string& name, GenSpec s) {
        s.seed = Rng::mix(seed + specs.size());
        specs.emplace_back(name, s);
    };
    GenSpec s;
    s.family = Family::Torus;
    s.rows = s.cols = 48;
    add("sqnc-desk", s);
    s.rows = 12;
    s.cols = 192;
    add("lnc-desk", s);
    s.family = Family::Layered;
    s.rows = s.cols = 48;
    add("pnc-desk", s);
    s = GenSpec{};
    s.family = Family::Sprand;
    s.n = 2048;
    s.edge_factor = 5;
    add("rand5-desk", s);
    s.edge_factor = 10;
    add("rand10-desk", s);

    std::vector<BenchInstance> out;
    for (auto& [name, spec] : specs) {
        if (auto shift = find_shift(spec, 0.25, 0, spec.weight_hi)) spec.shift = *shift;
        out.push_back({name, generate(spec)});
    }

    GenSpec m;
    m.family = Family::Collect;
    m.rows = m.cols = 10;
    m.items = 3;
    m.obstacles_per_mille = 150;
    m.recharge_weight = 20;
    m.seed = seed;
    out.push_back({"collect1-desk", generate(m)});
    m.rows = m.cols = 14;
    m.items = 4;
    out.push_back({"collect2-desk", generate(m)});
    m = GenSpec{};
    m.family = Family::Supply;
    m.locations = 8;
    m.max_request = 3;
    m.refill = 4;
    out.push_back({"supply1-desk", generate(m)});
    m.locations = 12;
    out.push_back({"supply2-desk", generate(m)});
    m = GenSpec{};
    m.family = Family::Taxi;
    m.locations = 8;
    out.push_back({"taxi1-desk", generate(m)});
    m.locations = 12;
    out.push_back({"taxi2-desk", generate(m)});
    return out;
}

/// Average finite lb over the vertices with finite lb, halved (0 if none is finite).
inline Weight default_lwub_bound(const GameGraph& g)
{
    SolverOptions quiet;
    quiet.check_conditions = false;
    const EnergyVector lb = solve_lb(g, quiet).lwub;
    Weight sum = 0, count = 0;
    for (const Energy& e : lb) {
        if (!e.is_finite()) continue;
        sum += e.value();
        ++count;
    }
    return count == 0 ? 0 : sum / count / 2;
}

inline int cmd_bench(const BenchConfig& cfg, std::ostream& err = std::cerr)
{
    return run_guarded(
        [&] {
            if (cfg.repeat < 1) throw UsageError("--repeat must be at least 1");
            std::vector<BenchInstance> corpus;
            for (const std::string& path : cfg.inputs) corpus.push_back({path, io::parse_game(read_input(path))});
            if (cfg.desk) {
                auto desk = desk_corpus(cfg.seed);
                std::move(desk.begin(), desk.end(), std::back_inserter(corpus));
            }
            if (corpus.empty()) throw UsageError("no instances: pass game files or --desk");

            std::vector<io::BenchRow> rows;
            for (const BenchInstance& inst : corpus) {
                std::optional<Weight> lwub_bound = cfg.bound;
                for (const std::string& problem : cfg.problems) {
                    if (problem != "lb" && problem != "lwub") throw UsageError("problem must be lb or lwub");
                    Weight b;
                    if (problem == "lb") {
                        b = lower_bound_reduction_bound(inst.game);
                    } else {
                        if (!lwub_bound) lwub_bound = default_lwub_bound(inst.game);
                        b = *lwub_bound;
                    }
                    for (const std::string& algo : cfg.algorithms) {
                        if (algo != "kasi" && algo != "vi") throw UsageError("algorithm must be kasi or vi");
                        io::BenchRow row{inst.name, inst.game.vertex_count(), inst.game.edge_count(), problem, b,
                                         algo, std::nullopt, 0};
                        std::vector<double> times;
                        for (std::size_t r = 0; r < cfg.repeat; ++r) {
                            const auto start = std::chrono::steady_clock::now();
                            try {
                                if (algo == "kasi") {
                                    SolverOptions so;
                                    so.check_conditions = false;
                                    row.iterations = solve_lwub(inst.game, b, so).iterations;
                                } else {
                                    ViOptions vo;
                                    vo.deadline = start + std::chrono::duration_cast<std::chrono::nanoseconds>(
                                                              std::chrono::duration<double>(cfg.timeout));
                                    row.iterations = vi_solve_detailed(inst.game, b, vo).iterations;
                                }
                            } catch (const TimeLimitExceeded&) {
                                times.clear();
                                break;
                            }
                            times.push_back(
                                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
                        }
                        if (!times.empty()) {
                            std::sort(times.begin(), times.end());
                            row.seconds = times[times.size() / 2];
                        }
                        rows.push_back(row);
                        err << io::render_bench_row(row) << '\n';
                    }
                }
            }
            std::sort(rows.begin(), rows.end(), [](const io::BenchRow& a, const io::BenchRow& b) {
                return std::tie(a.instance, a.problem, a.algorithm) < std::tie(b.instance, b.problem, b.algorithm);
            });
            std::string csv(io::kBenchHeader);
            csv += '\n';
            for (const auto& row : rows) csv += io::render_bench_row(row) + '\n';
            write_output(cfg.output, csv);
            return kOk;
        },
        err);
}

} // namespace kasi::cli
