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

// Small worked examples, one block per operation.

#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "kasi/kasi.hpp"
#include "test_support.hpp"

namespace kasi {
namespace {

const Energy kInf = Energy::infinity();
const Potential kNegInf = Potential::neg_inf();

VertexSet only(std::size_t n, VertexId v)
{
    VertexSet s(n);
    s.insert(v);
    return s;
}

TEST(Worked, Validate)
{
    EXPECT_FALSE(validate(GameGraph({Owner::Max}, {{0, 0, 0}})).has_value());
    auto err = validate(GameGraph({Owner::Max}, {}));
    ASSERT_TRUE(err.has_value());
    EXPECT_EQ(err->kind(), StructuralError::Kind::ZeroOutDegree);
    EXPECT_EQ(err->index(), 0u);
    err = validate(GameGraph({Owner::Max, Owner::Max}, {{0, 1, 5}}));
    ASSERT_TRUE(err.has_value());
    EXPECT_EQ(err->kind(), StructuralError::Kind::ZeroOutDegree);
    EXPECT_EQ(err->index(), 1u);
}

TEST(Worked, RestrictToStrategy)
{
    const GameGraph g = make_game({Owner::Min, Owner::Max, Owner::Max}, {{0, 1, 1}, {0, 2, 2}, {1, 1, 0}, {2, 2, 0}});
    const GameGraph r = restrict_to_strategy(g, {Owner::Min, {1, kNoVertex, kNoVertex}});
    EXPECT_EQ(r.out_degree(0), 1u);
    EXPECT_EQ(r.edge(r.out_edges(0)[0]).target, 1u);

    const GameGraph all_max = make_game({Owner::Max, Owner::Max}, {{0, 1, 1}, {0, 0, 2}, {1, 0, 0}});
    EXPECT_EQ(restrict_to_strategy(all_max, {Owner::Min, {kNoVertex, kNoVertex}}), all_max);

    const GameGraph ex = testing::example_game();
    const GameGraph r2 = restrict_to_strategy(ex, testing::example_min_strategy(1));
    EXPECT_EQ(r2.edge_count(), 5u);
    for (const Edge& e : r2.edges()) EXPECT_FALSE(e.source == 2 && e.target == 0);
}

TEST(Worked, InducedSubgame)
{
    const GameGraph g = testing::example_game();
    EXPECT_EQ(induced_subgame(g, std::vector<bool>(4, true)), g);

    // a -> b -> c, and c back to a
    const GameGraph chain = make_game({Owner::Max, Owner::Max, Owner::Max}, {{0, 1, 0}, {1, 2, 0}, {2, 0, 0}});
    const GameGraph ab = induced_subgame(chain, {true, true, false});
    EXPECT_EQ(ab.edges(), (std::vector<Edge>{{0, 1, 0}, {1, 1, -1}}));
    const GameGraph c = induced_subgame(chain, {false, false, true});
    EXPECT_EQ(c.edges(), (std::vector<Edge>{{0, 0, -1}}));
    for (Weight b : {0, 1, 5, 100}) {
        EXPECT_EQ(oracle_lwub(c, b), (EnergyVector{kInf}));
        EXPECT_EQ(solve_lwub(c, b).lwub, (EnergyVector{kInf}));
    }
}

TEST(Worked, MaxAbsWeight)
{
    EXPECT_EQ(max_abs_weight(make_game({Owner::Max}, {{0, 0, -3}, {0, 0, 2}})), 3);
    EXPECT_EQ(max_abs_weight(make_game({Owner::Max}, {{0, 0, 0}})), 0);
    EXPECT_EQ(max_abs_weight(make_game({Owner::Max}, {{0, 0, -10000}, {0, 0, 9999}})), 10000);
}

TEST(Worked, DijkstraLongest)
{
    const GameGraph single = make_game({Owner::Max}, {{0, 0, 0}});
    EXPECT_EQ(dijkstra_longest(single, 0, only(1, 0), {Potential(0)}), (PotentialVector{Potential(0)}));

    const GameGraph uv = make_game({Owner::Max, Owner::Max}, {{0, 1, -4}, {1, 1, 0}});
    const PotentialVector zero2(2, Potential(0));
    EXPECT_EQ(dijkstra_longest(uv, 3, only(2, 1), zero2)[0], kNegInf);
    EXPECT_EQ(dijkstra_longest(uv, 4, only(2, 1), zero2)[0], Potential(-4));
    EXPECT_EQ(oracle_lwub(uv, 4)[0], Energy(4));

    // u=0, v1=1, v2=2, t=3
    const GameGraph diamond = make_game({Owner::Max, Owner::Max, Owner::Max, Owner::Max},
                                        {{0, 1, -2}, {0, 2, -5}, {1, 3, -1}, {2, 3, 0}, {3, 3, 0}});
    EXPECT_EQ(dijkstra_longest(diamond, 10, only(4, 3), PotentialVector(4, Potential(0)))[0], Potential(-3));
}

TEST(Worked, EvaluateStrategy)
{
    const PositionalStrategy none2{Owner::Min, {kNoVertex, kNoVertex}};
    const GameGraph loops = make_game({Owner::Max, Owner::Max}, {{0, 0, 0}, {1, 1, 3}});
    const Evaluation fix = evaluate_strategy_detailed(loops, 4, none2, PotentialVector(2, Potential(0)));
    EXPECT_EQ(fix.initial_targets.size(), 2u);
    EXPECT_EQ(fix.dijkstra_calls, 1u);
    EXPECT_EQ(fix.d, PotentialVector(2, Potential(0)));

    const GameGraph chain = make_game({Owner::Max, Owner::Max}, {{0, 1, -5}, {1, 1, 0}});
    for (Weight b : {5, 6, 50}) {
        EXPECT_EQ(evaluate_strategy(chain, b, none2, PotentialVector(2, Potential(0))),
                  (PotentialVector{Potential(-5), Potential(0)}));
    }

    const GameGraph cycle = make_game({Owner::Max, Owner::Max}, {{0, 1, -3}, {1, 0, 1}});
    const Evaluation drained = evaluate_strategy_detailed(cycle, 15, none2, PotentialVector(2, Potential(0)));
    EXPECT_EQ(drained.d, (PotentialVector{kNegInf, kNegInf}));
    EXPECT_TRUE(drained.targets.empty());
}

TEST(Worked, ImproveStrategy)
{
    const GameGraph pos = make_game({Owner::Min, Owner::Max, Owner::Max}, {{0, 1, 0}, {0, 2, 4}, {1, 1, 1}, {2, 2, 0}});
    const PositionalStrategy pi{Owner::Min, {1, kNoVertex, kNoVertex}};
    const Improvement none = improve_strategy(pos, PotentialVector(3, Potential(0)), pi);
    EXPECT_FALSE(none.changed);
    EXPECT_EQ(none.strategy, pi);

    const GameGraph drop = make_game({Owner::Min, Owner::Max, Owner::Max}, {{0, 1, 0}, {0, 2, -2}, {1, 1, 0}, {2, 2, 0}});
    const Improvement sw = improve_strategy(drop, PotentialVector(3, Potential(0)), pi);
    EXPECT_TRUE(sw.changed);
    EXPECT_EQ(sw.strategy.choice[0], 2u);

    // the alternation at v3: loop strategy, then v1, then the loop again on the smaller domain
    const GameGraph ex = testing::example_game();
    const PotentialVector d1 = evaluate_strategy(ex, 15, testing::example_min_strategy(1), PotentialVector(4, Potential(0)));
    const Improvement to_v1 = improve_strategy(ex, d1, testing::example_min_strategy(1));
    EXPECT_EQ(to_v1.strategy, testing::example_min_strategy(0));
    const PotentialVector d2 = evaluate_strategy(ex, 15, to_v1.strategy, d1);
    const Improvement back = improve_strategy(ex, d2, to_v1.strategy);
    EXPECT_EQ(back.strategy, testing::example_min_strategy(1));
}

TEST(Worked, SolveLwub)
{
    const GameGraph pos = make_game({Owner::Max, Owner::Min, Owner::Max}, {{0, 1, 2}, {1, 2, 0}, {1, 0, 7}, {2, 0, 1}});
    for (Weight b : {0, 3, 40}) {
        const SolveResult r = solve_lwub(pos, b, testing::checked());
        EXPECT_EQ(r.lwub, EnergyVector(3, Energy(0)));
        EXPECT_EQ(r.iterations, 1u);
    }

    EXPECT_EQ(solve_lwub(testing::example_game(), 15, testing::checked()).lwub,
              (EnergyVector{Energy(0), Energy(12), kInf, kInf}));

    // m may loop for free; n's only move gains 3, so neither needs credit
    const GameGraph mn = make_game({Owner::Max, Owner::Min}, {{0, 1, -3}, {0, 0, 0}, {1, 0, 3}});
    EXPECT_EQ(oracle_lwub(mn, 3), (EnergyVector{Energy(0), Energy(0)}));
    EXPECT_EQ(solve_lwub(mn, 3, testing::checked()).lwub, (EnergyVector{Energy(0), Energy(0)}));
    EXPECT_EQ(vi_solve(mn, 3), (EnergyVector{Energy(0), Energy(0)}));
}

TEST(Worked, SolveLb)
{
    EXPECT_EQ(solve_lb(make_game({Owner::Max}, {{0, 0, 0}})).lwub, (EnergyVector{Energy(0)}));
    EXPECT_EQ(solve_lb(make_game({Owner::Max}, {{0, 0, -1}})).lwub, (EnergyVector{kInf}));
    const GameGraph two = make_game({Owner::Max, Owner::Max}, {{0, 1, 2}, {1, 0, -1}});
    EXPECT_EQ(lower_bound_reduction_bound(two), 2);
    EXPECT_EQ(solve_lb(two, testing::checked()).lwub, (EnergyVector{Energy(0), Energy(1)}));
    EXPECT_EQ(oracle_lb(two), (EnergyVector{Energy(0), Energy(1)}));
}

TEST(Worked, WinningSign)
{
    const GameGraph pos = make_game({Owner::Max, Owner::Min}, {{0, 1, 3}, {1, 0, 0}, {1, 1, 1}});
    EXPECT_EQ(winning_sign(pos).non_negative, (std::vector<VertexId>{0, 1}));
    EXPECT_EQ(oracle_value_sign(pos).non_negative, (std::vector<VertexId>{0, 1}));
    const GameGraph neg = make_game({Owner::Min}, {{0, 0, -1}});
    EXPECT_EQ(winning_sign(neg).negative, (std::vector<VertexId>{0}));
    EXPECT_EQ(oracle_value_sign(neg).negative, (std::vector<VertexId>{0}));

    // mixed cycles: Max picks between a +1 loop and Min's choice of a -2 or +3 cycle
    const GameGraph mixed = make_game({Owner::Max, Owner::Min, Owner::Max, Owner::Max},
                                      {{0, 1, 0}, {0, 3, -1}, {1, 2, -2}, {1, 0, 1}, {2, 1, 0}, {3, 3, 1}, {2, 2, -1}});
    const SignPartition got = winning_sign(mixed);
    const OracleSigns want = oracle_value_sign(mixed);
    EXPECT_EQ(got.non_negative, want.non_negative);
    EXPECT_EQ(got.negative, want.negative);
    EXPECT_FALSE(got.negative.empty());
    EXPECT_FALSE(got.non_negative.empty());
}

TEST(Worked, ExtractMaxStrategy)
{
    const GameGraph loop = make_game({Owner::Max, Owner::Max}, {{0, 1, -5}, {0, 0, 0}, {1, 1, 0}});
    EXPECT_EQ(solve_lwub(loop, 3).max_strategy.choice[0], 0u);

    const GameGraph chain = make_game({Owner::Max, Owner::Max}, {{0, 1, -2}, {1, 1, 0}});
    for (Weight b : {2, 3, 9}) EXPECT_EQ(solve_lwub(chain, b).max_strategy.choice[0], 1u);

    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const GameGraph g = testing::small_game(seed, 7, 5);
        const SolveResult r = solve_lwub(g, 7);
        const EnergyVector fixed = solve_lwub(restrict_to_strategy(g, r.max_strategy), 7).lwub;
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            if (r.lwub[v].is_finite()) {
                ASSERT_EQ(fixed[v], r.lwub[v]) << "seed " << seed;
            }
        }
    }
}

TEST(Worked, MinWitness)
{
    const GameGraph g = make_game({Owner::Min}, {{0, 0, -1}});
    const SolveResult r = solve_lwub(g, 5);
    EXPECT_EQ(r.min_witness.strategies.size(), 1u);
    const WitnessTrace t = verify_min_witness(g, 5, r.min_witness, 0, 100);
    EXPECT_LE(t.steps.size(), 101u);
    EXPECT_LT(t.steps.back().energy, 0);

    const GameGraph ex = testing::example_game();
    const SolveResult e = solve_lwub(ex, 15);
    const WitnessTrace w = verify_min_witness(ex, 15, e.min_witness, 2, 15);
    ASSERT_GE(w.steps.size(), 3u);
    EXPECT_EQ(w.steps[0].to, 3u); // to v4 first
    EXPECT_EQ(w.steps[2].to, 0u); // then to v1
    EXPECT_EQ(w.min_segment_weight, -20);

    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        const GameGraph h = testing::small_game(seed, 6, 4);
        if (h.vertex_count() != 6) continue;
        const SolveResult s = solve_lwub(h, 4);
        for (VertexId v = 0; v < 6; ++v) {
            if (s.lwub[v].is_finite()) continue;
            for (Weight credit = 0; credit <= 4; ++credit) {
                ASSERT_NO_THROW(verify_min_witness(h, 4, s.min_witness, v, credit)) << "seed " << seed;
            }
        }
    }
}

TEST(Worked, ViStep)
{
    const GameGraph zero = make_game({Owner::Max}, {{0, 0, 0}});
    EnergyVector d{Energy(0)};
    for (int i = 0; i < 5; ++i) EXPECT_EQ(d = vi_step(zero, 3, d), (EnergyVector{Energy(0)}));

    const GameGraph neg = make_game({Owner::Min}, {{0, 0, -1}});
    d = {Energy(0)};
    std::vector<Energy> seen;
    for (int i = 0; i < 3; ++i) seen.push_back((d = vi_step(neg, 2, d))[0]);
    EXPECT_EQ(seen, (std::vector<Energy>{Energy(1), Energy(2), kInf}));

    const GameGraph choice = make_game({Owner::Max, Owner::Max, Owner::Max}, {{0, 1, -1}, {0, 2, 0}, {1, 1, 0}, {2, 2, 0}});
    EXPECT_EQ(vi_step(choice, 5, EnergyVector(3, Energy(0)))[0], Energy(0));
}

TEST(Worked, ViSolve)
{
    const GameGraph pos = make_game({Owner::Max, Owner::Min}, {{0, 1, 1}, {1, 0, 0}, {1, 1, 2}});
    ViOptions plain;
    plain.variant = ViVariant::Plain;
    const ViResult r = vi_solve_detailed(pos, 4, plain);
    EXPECT_EQ(r.values, EnergyVector(2, Energy(0)));
    EXPECT_EQ(r.iterations, 1u);

    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const GameGraph g = testing::small_game(seed + 5000, 8, 6);
        const Weight b = static_cast<Weight>(seed % 25);
        ASSERT_EQ(vi_solve(g, b), solve_lwub(g, b).lwub) << "seed " << seed;
    }
}

TEST(Worked, Oracle)
{
    EXPECT_EQ(oracle_lwub(make_game({Owner::Max}, {{0, 0, 0}}), 0), (EnergyVector{Energy(0)}));
    for (Weight b : {0, 1, 7}) EXPECT_EQ(oracle_lwub(make_game({Owner::Max}, {{0, 0, -1}}), b), (EnergyVector{kInf}));
    const GameGraph uv = make_game({Owner::Max, Owner::Max}, {{0, 1, -4}, {1, 1, 0}});
    EXPECT_EQ(oracle_lwub(uv, 4)[0], Energy(4));
    EXPECT_EQ(oracle_lwub(uv, 3)[0], kInf);
    const OracleSigns pos = oracle_value_sign(make_game({Owner::Max, Owner::Min}, {{0, 1, 2}, {1, 0, 1}, {1, 1, 3}}));
    EXPECT_EQ(pos.negative.size(), 0u);
}

TEST(Worked, Sprand)
{
    GenSpec s;
    s.n = 5;
    s.edge_factor = 1;
    s.seed = 17;
    const GameGraph cyc = generate(s);
    ASSERT_EQ(cyc.edge_count(), 5u);
    // a single Hamiltonian cycle: every vertex has in- and out-degree 1 and 0 reaches everything
    std::set<VertexId> visited;
    VertexId v = 0;
    for (int i = 0; i < 5; ++i) {
        EXPECT_EQ(cyc.out_degree(v), 1u);
        EXPECT_EQ(cyc.in_edges(v).size(), 1u);
        visited.insert(v);
        v = cyc.edge(cyc.out_edges(v)[0]).target;
    }
    EXPECT_EQ(visited.size(), 5u);
    EXPECT_EQ(v, 0u);

    s.n = 100;
    s.edge_factor = 5;
    s.shift = 250;
    const GameGraph g = generate(s);
    EXPECT_EQ(g.edge_count(), 500u);
    for (const Edge& e : g.edges()) {
        EXPECT_GE(e.weight, 1 - 250);
        EXPECT_LE(e.weight, 10000 - 250);
    }
    EXPECT_EQ(generate(s), g);
}

TEST(Worked, Torus)
{
    GenSpec s;
    s.family = Family::Torus;
    s.rows = s.cols = 2;
    const GameGraph small = generate(s);
    EXPECT_EQ(small.vertex_count(), 4u);
    EXPECT_EQ(small.edge_count(), 8u);
    s.rows = s.cols = 16;
    s.added_cycles = 3;
    const GameGraph g = generate(s);
    EXPECT_EQ(g.vertex_count(), 256u);
    EXPECT_EQ(g.edge_count(), 512u + 3u * 16u);
    EXPECT_EQ(generate(s), g);
}

TEST(Worked, Models)
{
    GenSpec s;
    s.family = Family::Collect;
    s.rows = s.cols = 3;
    s.docks = 1;
    s.items = 2;
    s.idle_weight = -1;
    s.recharge_weight = 5;
    const GameGraph collect = generate(s);
    // no obstacles: the dock is reachable from everywhere, so every lb is finite
    const EnergyVector lb = oracle_lb(collect);
    EXPECT_TRUE(std::all_of(lb.begin(), lb.end(), [](Energy e) { return e.is_finite(); }));
    EXPECT_EQ(solve_lb(collect).lwub, lb);

    s.docks = 0;
    const GameGraph dark = generate(s);
    const EnergyVector none = oracle_lb(dark);
    EXPECT_TRUE(std::all_of(none.begin(), none.end(), [](Energy e) { return e.is_infinite(); }));
    EXPECT_EQ(solve_lb(dark).lwub, none);

    GenSpec sup;
    sup.family = Family::Supply;
    sup.max_request = 2;
    sup.refill = 3;
    const GameGraph supply = generate(sup);
    // vertex 0 is the request state at the depot
    EXPECT_EQ(supply.owner(0), Owner::Min);
    const EnergyVector at6 = oracle_lwub(supply, 6);
    EXPECT_TRUE(at6[0].is_finite());
    EXPECT_EQ(solve_lwub(supply, 6).lwub, at6);
}

TEST(Worked, GameText)
{
    const GameGraph t = io::parse_game("p mpg 1 1\no 0 MAX\ne 0 0 0\n");
    EXPECT_EQ(t, make_game({Owner::Max}, {{0, 0, 0}}));
    EXPECT_THROW(io::parse_game("p mpg 2 2\no 0 MAX\ne 0 1 0\ne 1 0 0\n"), ParseError);

    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        GenSpec s;
        s.seed = seed;
        s.family = seed % 3 == 0 ? Family::Uniform : seed % 3 == 1 ? Family::Sprand : Family::Torus;
        s.n = 1 + seed % 40;
        s.edge_factor = 1 + seed % 4;
        s.rows = 2 + seed % 5;
        s.cols = 2 + seed % 7;
        s.weight_lo = -50;
        s.weight_hi = 50;
        const GameGraph g = generate(s);
        const std::string text = io::render_game(g);
        ASSERT_EQ(io::render_game(io::parse_game(text)), text) << "seed " << seed;
    }
}

TEST(Worked, ResultText)
{
    const std::string r = io::render_result(EnergyVector{Energy(0), Energy(12), kInf, kInf});
    EXPECT_EQ(r, "v 0 0\nv 1 12\nv 2 inf\nv 3 inf\n");
    EXPECT_EQ(io::render_strategy({Owner::Min, {kNoVertex, kNoVertex}}), "");

    io::BenchRow row{"rand5-desk", 2048, 10240, "lb", 123, "kasi", 0.5, 12};
    const std::string line = io::render_bench_row(row);
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7);
    EXPECT_EQ(line, "rand5-desk,2048,10240,lb,123,kasi,0.500000,12");
}

TEST(Worked, KasiAndViAgreeOnMixedInstances)
{
    std::size_t compared = 0;
    for (std::uint64_t i = 0; i < 200; ++i) {
        GenSpec s;
        s.seed = 300 + i;
        s.weight_lo = 1;
        s.weight_hi = 60;
        s.shift = 20 + static_cast<Weight>(i % 20);
        switch (i % 4) {
        case 0: s.family = Family::Sprand; s.n = 50 + i; break;
        case 1: s.family = Family::Torus; s.rows = 4 + i % 6; s.cols = 5 + i % 9; break;
        case 2: s.family = Family::Layered; s.rows = 3 + i % 5; s.cols = 4 + i % 11; break;
        default: s.family = Family::Taxi; s.locations = 2 + i % 4; s.shift = 0; break;
        }
        const GameGraph g = generate(s);
        for (Weight b : {Weight{25}, lower_bound_reduction_bound(g)}) {
            ASSERT_EQ(io::render_result(vi_solve(g, b)), io::render_result(solve_lwub(g, b))) << "instance " << i;
            ++compared;
        }
    }
    EXPECT_EQ(compared, 400u);
}

} // namespace
} // namespace kasi
