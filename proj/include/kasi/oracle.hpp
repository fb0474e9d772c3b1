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

#include <deque>
#include <limits>
#include <string>
#include <vector>

#include "kasi/core.hpp"

namespace kasi {

/*
 * Brute-force references for small games, independent of the solvers.
 *
 * oracle_lwub unfolds the game over (vertex, energy) with energy in 0..b and
 * solves the resulting safety game. A move (v,e) -> (u, min(b, e + w)) is
 * legal when e + w >= 0 and loses otherwise.
 *
 * No separate bookkeeping is needed for the "no segment below -b" rule.
 * With truncation at b, the energy after a segment of weight s that starts
 * at energy e <= b is at most e + s <= b + s, so a segment lighter than -b
 * ends below zero. Conversely, if the truncated energy goes negative at step
 * n, take the last step j < n at which truncation happened (or the start):
 * the energy then was b (or the initial credit) and nothing was truncated
 * since, so either credit + S_n < 0 or the segment j..n weighs less than -b.
 * Starting with credit x > b is the same as starting with b for the same
 * reason, hence lwub_b(v) is the least e in 0..b whose state is safe.
 */

struct OracleOptions
{
    std::size_t state_budget = 1'000'000;
    std::size_t strategy_pair_budget = 100'000;
};

inline EnergyVector oracle_lwub(const GameGraph& g, Weight bound, const OracleOptions& options = {})
{
    if (auto err = validate(g)) throw *err;
    if (bound < 0) throw Error("bound must be non-negative");
    const std::size_t n = g.vertex_count();
    const unsigned __int128 need = static_cast<unsigned __int128>(n) * (static_cast<unsigned __int128>(bound) + 1);
    if (need > options.state_budget) {
        throw BudgetExceeded(need > std::numeric_limits<std::size_t>::max() ? std::numeric_limits<std::size_t>::max()
                                                                            : static_cast<std::size_t>(need),
                             options.state_budget, "energy state space exceeds the budget");
    }
    const std::size_t levels = static_cast<std::size_t>(bound) + 1;
    const std::size_t states = n * levels;
    const std::size_t sink = states;

    const auto successor = [&](std::size_t s, EdgeId id) -> std::size_t {
        const Edge& e = g.edge(id);
        const Weight next = static_cast<Weight>(s % levels) + e.weight;
        if (next < 0) return sink;
        return e.target * levels + static_cast<std::size_t>(std::min(next, bound));
    };

    std::vector<std::size_t> offset(states + 2, 0);
    std::vector<std::uint32_t> safe_moves(states, 0);
    for (std::size_t s = 0; s < states; ++s) {
        for (EdgeId id : g.out_edges(static_cast<VertexId>(s / levels))) {
            ++offset[successor(s, id) + 1];
            ++safe_moves[s];
        }
    }
    for (std::size_t s = 0; s <= states; ++s) offset[s + 1] += offset[s];
    std::vector<std::size_t> preds(offset[states + 1]);
    std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
    for (std::size_t s = 0; s < states; ++s) {
        for (EdgeId id : g.out_edges(static_cast<VertexId>(s / levels))) preds[fill[successor(s, id)]++] = s;
    }

    // greatest safe set = complement of Min's attractor to the sink
    std::vector<std::uint8_t> unsafe(states + 1, 0);
    unsafe[sink] = 1;
    std::deque<std::size_t> queue{sink};
    while (!queue.empty()) {
        const std::size_t t = queue.front();
        queue.pop_front();
        for (std::size_t i = offset[t]; i < offset[t + 1]; ++i) {
            const std::size_t s = preds[i];
            if (unsafe[s]) continue;
            if (g.owner(static_cast<VertexId>(s / levels)) == Owner::Min || --safe_moves[s] == 0) {
                unsafe[s] = 1;
                queue.push_back(s);
            }
        }
    }

    EnergyVector out(n, Energy::infinity());
    for (VertexId v = 0; v < n; ++v) {
        for (std::size_t e = 0; e < levels; ++e) {
            if (!unsafe[v * levels + e]) {
                out[v] = Energy(static_cast<Weight>(e));
                break;
            }
        }
    }
    return out;
}

/// lb through oracle_lwub at b = (|V| - 1) * W.
inline EnergyVector oracle_lb(const GameGraph& g, const OracleOptions& options = {})
{
    if (auto err = validate(g)) throw *err;
    const Weight n = static_cast<Weight>(g.vertex_count());
    return oracle_lwub(g, (n - 1) * max_abs_weight(g), options);
}

struct OracleSigns
{
    std::vector<VertexId> non_negative;
    std::vector<VertexId> negative;
};

/**
 * Sign of the mean-payoff value by enumerating all pairs of positional
 * strategies (as out-edge choices). For a fixed pair the play from v is a
 * lasso; its value has the sign of the cycle weight. nu(v) >= 0 iff some
 * Max choice keeps every Min reply at a non-negative cycle.
 */
inline OracleSigns oracle_value_sign(const GameGraph& g, const OracleOptions& options = {})
{
    if (auto err = validate(g)) throw *err;
    const std::size_t n = g.vertex_count();
    std::vector<VertexId> max_vs, min_vs;
    for (VertexId v = 0; v < n; ++v) (g.owner(v) == Owner::Max ? max_vs : min_vs).push_back(v);

    const auto count = [&](const std::vector<VertexId>& vs) {
        unsigned __int128 c = 1;
        for (VertexId v : vs) {
            c *= g.out_degree(v);
            if (c > options.strategy_pair_budget) return c;
        }
        return c;
    };
    const unsigned __int128 pairs = count(max_vs) * count(min_vs);
    if (pairs > options.strategy_pair_budget) {
        throw BudgetExceeded(pairs > std::numeric_limits<std::size_t>::max() ? std::numeric_limits<std::size_t>::max()
                                                                             : static_cast<std::size_t>(pairs),
                             options.strategy_pair_budget, "too many positional strategy pairs");
    }

    // odometer over out-edge positions
    const auto advance = [&](std::vector<std::size_t>& pos, const std::vector<VertexId>& vs) {
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (++pos[i] < g.out_degree(vs[i])) return true;
            pos[i] = 0;
        }
        return false;
    };

    std::vector<std::uint8_t> max_ok(n, 0);
    std::vector<EdgeId> next(n);
    std::vector<std::size_t> seen_at(n);
    std::vector<std::size_t> max_pos(max_vs.size(), 0);
    do {
        for (std::size_t i = 0; i < max_vs.size(); ++i) next[max_vs[i]] = g.out_edges(max_vs[i])[max_pos[i]];
        std::vector<std::uint8_t> all_replies_ok(n, 1);
        std::vector<std::size_t> min_pos(min_vs.size(), 0);
        do {
            for (std::size_t i = 0; i < min_vs.size(); ++i) next[min_vs[i]] = g.out_edges(min_vs[i])[min_pos[i]];
            for (VertexId v = 0; v < n; ++v) {
                if (!all_replies_ok[v]) continue;
                std::fill(seen_at.begin(), seen_at.end(), std::numeric_limits<std::size_t>::max());
                std::vector<Weight> prefix{0};
                VertexId x = v;
                while (seen_at[x] == std::numeric_limits<std::size_t>::max()) {
                    seen_at[x] = prefix.size() - 1;
                    prefix.push_back(prefix.back() + g.edge(next[x]).weight);
                    x = g.edge(next[x]).target;
                }
                if (prefix.back() - prefix[seen_at[x]] < 0) all_replies_ok[v] = 0;
            }
        } while (advance(min_pos, min_vs));
        for (VertexId v = 0; v < n; ++v) max_ok[v] |= all_replies_ok[v];
    } while (advance(max_pos, max_vs));

    OracleSigns out;
    for (VertexId v = 0; v < n; ++v) (max_ok[v] ? out.non_negative : out.negative).push_back(v);
    return out;
}

} // namespace kasi
