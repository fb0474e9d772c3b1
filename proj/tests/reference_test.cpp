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

#include <functional>

#include <gtest/gtest.h>

#include "kasi/oracle.hpp"
#include "kasi/solver.hpp"
#include "kasi/vi.hpp"
#include "kasi/witness.hpp"
#include "test_support.hpp"

namespace kasi {
namespace {

const Energy kInf = Energy::infinity();

TEST(Oracle, HandCases)
{
    const GameGraph chain = make_game({Owner::Max, Owner::Max}, {{0, 1, -3}, {1, 1, 0}});
    EXPECT_EQ(oracle_lwub(chain, 5), (EnergyVector{Energy(3), Energy(0)}));
    EXPECT_EQ(oracle_lwub(chain, 2), (EnergyVector{kInf, Energy(0)}));
    const GameGraph zero_cycle = make_game({Owner::Max, Owner::Min}, {{0, 1, 2}, {1, 0, -2}});
    EXPECT_EQ(oracle_lwub(zero_cycle, 2), (EnergyVector{Energy(0), Energy(2)}));
    EXPECT_EQ(oracle_lwub(zero_cycle, 1), (EnergyVector{kInf, kInf}));
    EXPECT_EQ(oracle_lwub(testing::example_game(), 15), (EnergyVector{Energy(0), Energy(12), kInf, kInf}));
    EXPECT_EQ(oracle_lb(testing::example_game()), (EnergyVector{Energy(0), Energy(10), Energy(10), Energy(20)}));
}

TEST(Oracle, Budgets)
{
    const GameGraph g = testing::example_game();
    OracleOptions tight;
    tight.state_budget = 10;
    try {
        oracle_lwub(g, 15, tight);
        FAIL() << "expected BudgetExceeded";
    } catch (const BudgetExceeded& e) {
        EXPECT_EQ(e.required(), 64u);
        EXPECT_EQ(e.budget(), 10u);
    }
    tight.strategy_pair_budget = 1;
    EXPECT_THROW(oracle_value_sign(g, tight), BudgetExceeded);
    EXPECT_THROW(oracle_lwub(g, -1), Error);
}

TEST(Oracle, ValueSign)
{
    const GameGraph g = make_game({Owner::Max, Owner::Max, Owner::Min},
                                  {{0, 0, 1}, {1, 1, -1}, {2, 0, -5}, {2, 1, 5}});
    const OracleSigns s = oracle_value_sign(g);
    EXPECT_EQ(s.non_negative, (std::vector<VertexId>{0}));
    EXPECT_EQ(s.negative, (std::vector<VertexId>{1, 2}));
    const OracleSigns ex = oracle_value_sign(testing::example_game());
    EXPECT_EQ(ex.non_negative, (std::vector<VertexId>{0, 1, 2, 3}));
}

TEST(Witness, RejectsLiveStart)
{
    const GameGraph g = testing::example_game();
    const SolveResult r = solve_lwub(g, 15);
    EXPECT_THROW(verify_min_witness(g, 15, r.min_witness, 0, 0), Error);
    EXPECT_THROW(verify_min_witness(g, 15, r.min_witness, 9, 0), Error);
    EXPECT_THROW(verify_min_witness(g, 15, r.min_witness, 2, 0, 10), BudgetExceeded);
}

TEST(Witness, IncompleteWitnessIsReported)
{
    const GameGraph g = testing::example_game();
    MinWitness w = solve_lwub(g, 15).min_witness;
    // with only the v3 -> v1 strategy Min cannot beat credit 10 from v3
    w.strategies.resize(1);
    w.death_index[2] = 0;
    EXPECT_THROW(verify_min_witness(g, 15, w, 2, 15), WitnessIncomplete);
}

TEST(Witness, RandomGamesForceLosses)
{
    std::size_t checked = 0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const GameGraph g = testing::small_game(seed, 6, 4);
        const Weight b = static_cast<Weight>(seed % 9);
        const SolveResult r = solve_lwub(g, b, testing::checked());
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            if (r.lwub[v].is_finite()) {
                EXPECT_EQ(r.min_witness.death_index[v], kAlive);
                continue;
            }
            const WitnessTrace t = verify_min_witness(g, b, r.min_witness, v, b);
            ASSERT_FALSE(t.steps.empty());
            EXPECT_LT(t.steps.back().energy, 0);
            ++checked;
        }
    }
    EXPECT_GT(checked, 100u);
}

// least credit surviving k steps, by exhaustive recursion over the play tree
Energy survive_k(const GameGraph& g, Weight b, VertexId start, std::size_t k)
{
    const std::function<bool(VertexId, Weight, std::size_t)> ok = [&](VertexId v, Weight e, std::size_t left) {
        if (left == 0) return true;
        const auto step = [&](EdgeId id) {
            const Edge& ed = g.edge(id);
            return e + ed.weight >= 0 && ok(ed.target, std::min(b, e + ed.weight), left - 1);
        };
        const auto out = g.out_edges(v);
        return g.owner(v) == Owner::Max ? std::any_of(out.begin(), out.end(), step)
                                        : std::all_of(out.begin(), out.end(), step);
    };
    for (Weight e = 0; e <= b; ++e) {
        if (ok(start, e, k)) return Energy(e);
    }
    return kInf;
}

TEST(ValueIteration, StepsMatchPlayTree)
{
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const GameGraph g = testing::small_game(seed, 5, 3, 2);
        const Weight b = static_cast<Weight>(seed % 6);
        EnergyVector d(g.vertex_count(), Energy(0));
        for (std::size_t k = 1; k <= 5; ++k) {
            d = vi_step(g, b, d);
            for (VertexId v = 0; v < g.vertex_count(); ++v) {
                ASSERT_EQ(d[v], survive_k(g, b, v, k)) << "seed " << seed << " k " << k << " v " << v;
            }
        }
    }
}

TEST(ValueIteration, VariantsAndOrdersAgree)
{
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const GameGraph g = testing::small_game(seed, 12, 6);
        const Weight b = static_cast<Weight>(seed % 20);
        ViOptions plain;
        plain.variant = ViVariant::Plain;
        const EnergyVector expected = vi_solve(g, b, plain);
        ASSERT_EQ(vi_solve(g, b), expected) << "seed " << seed;
        for (std::uint64_t order = 1; order <= 3; ++order) {
            ViOptions shuffled;
            shuffled.order_seed = seed * 7 + order;
            ASSERT_EQ(vi_solve(g, b, shuffled), expected) << "seed " << seed << " order " << order;
        }
        ASSERT_EQ(expected, oracle_lwub(g, b)) << "seed " << seed;
    }
}

TEST(ValueIteration, HandCasesAndErrors)
{
    EXPECT_EQ(vi_solve(testing::example_game(), 15), (EnergyVector{Energy(0), Energy(12), kInf, kInf}));
    const GameGraph zero_cycle = make_game({Owner::Max, Owner::Min}, {{0, 1, 2}, {1, 0, -2}});
    EXPECT_EQ(vi_solve(zero_cycle, 1), (EnergyVector{kInf, kInf}));
    EXPECT_THROW(vi_solve(zero_cycle, -1), Error);
    EXPECT_THROW(vi_solve(GameGraph({Owner::Max}, {}), 1), StructuralError);
}

TEST(ValueIteration, Deadline)
{
    GenSpec spec;
    spec.n = 3000;
    spec.shift = 5000;
    const GameGraph g = generate(spec);
    ViOptions o;
    o.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
    EXPECT_THROW(vi_solve(g, 1'000'000, o), TimeLimitExceeded);
    o.variant = ViVariant::Plain;
    EXPECT_THROW(vi_solve(g, 1'000'000, o), TimeLimitExceeded);
}

} // namespace
} // namespace kasi
