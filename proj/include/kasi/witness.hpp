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
#include <deque>
#include <limits>
#include <string>
#include <vector>

#include "kasi/core.hpp"
#include "kasi/solver.hpp"

namespace kasi {

struct TraceStep
{
    VertexId from;
    VertexId to;
    Weight weight;
    /// Energy after the move, before truncation to the bound; negative on the final, losing step.
    Weight energy;
    /// Witness strategy Min is following when the move is made.
    std::size_t strategy_index;
};

struct WitnessTrace
{
    std::vector<TraceStep> steps;
    /// Lightest contiguous segment of the trace.
    Weight min_segment_weight = 0;
    /// Whether that segment alone breaks the bound (weight < -b).
    bool segment_violation = false;
};

/**
 * Play Min's witness from a losing vertex against every Max behaviour.
 *
 * Min follows the witness strategy of the current index, starting at
 * index_at(v) and lowering it to index_at(u) whenever the play enters a
 * vertex u with a smaller index; it never moves to a higher one. Max is
 * adversarial. The product of (vertex, energy in 0..b, strategy index) is
 * finite, and with energy truncated at b a segment lighter than -b drives
 * the energy below zero, so Min wins iff the start state is in her attractor
 * to "energy < 0". The returned trace is the longest play Max can force.
 */
inline WitnessTrace verify_min_witness(const GameGraph& g, Weight bound, const MinWitness& witness, VertexId start,
                                       Weight credit, std::size_t state_budget = 1'000'000)
{
    const std::size_t n = g.vertex_count();
    const std::size_t k = witness.strategies.size();
    if (start >= n) throw Error("start vertex out of range");
    if (witness.death_index[start] == kAlive) {
        throw Error("vertex " + std::to_string(start) + " is not losing; nothing to verify");
    }
    if (credit < 0) throw Error("credit must be non-negative");
    const auto levels = static_cast<std::size_t>(bound) + 1;
    const unsigned __int128 need = static_cast<unsigned __int128>(n) * levels * k;
    if (need > state_budget) {
        throw BudgetExceeded(need > std::numeric_limits<std::size_t>::max() ? std::numeric_limits<std::size_t>::max()
                                                                            : static_cast<std::size_t>(need),
                             state_budget, "witness product exceeds the state budget");
    }
    const std::size_t states = static_cast<std::size_t>(need);
    const std::size_t lose = states;

    std::vector<std::vector<EdgeId>> used(k);
    for (std::size_t c = 0; c < k; ++c) used[c] = strategy_edges(g, witness.strategies[c]);

    const auto index_of = [&](VertexId v, Weight e, std::size_t c) {
        return (c * n + v) * levels + static_cast<std::size_t>(e);
    };
    struct Move
    {
        std::size_t to;
        EdgeId edge;
    };
    const auto moves = [&](std::size_t s, auto&& emit) {
        const std::size_t e = s % levels;
        const VertexId v = static_cast<VertexId>((s / levels) % n);
        const std::size_t c = s / levels / n;
        const auto step = [&](EdgeId id) {
            const Edge& ed = g.edge(id);
            const Weight next = static_cast<Weight>(e) + ed.weight;
            if (next < 0) {
                emit(Move{lose, id});
                return;
            }
            emit(Move{index_of(ed.target, std::min(next, bound), std::min(c, witness.index_at(ed.target))), id});
        };
        if (g.owner(v) == Owner::Min) {
            step(used[c][v]);
        } else {
            for (EdgeId id : g.out_edges(v)) step(id);
        }
    };

    // reverse transition lists, CSR
    std::vector<std::size_t> offset(states + 2, 0);
    std::vector<std::uint32_t> pending(states, 0);
    for (std::size_t s = 0; s < states; ++s) {
        moves(s, [&](Move m) {
            ++offset[m.to + 1];
            ++pending[s];
        });
    }
    for (std::size_t s = 0; s <= states; ++s) offset[s + 1] += offset[s];
    std::vector<std::size_t> preds(offset[states + 1]);
    {
        std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
        for (std::size_t s = 0; s < states; ++s) moves(s, [&](Move m) { preds[fill[m.to]++] = s; });
    }

    // Min's attractor to `lose`, in BFS layers; rank = moves until loss under Max's longest resistance
    constexpr std::size_t kUnranked = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> rank(states + 1, kUnranked);
    rank[lose] = 0;
    std::deque<std::size_t> queue{lose};
    while (!queue.empty()) {
        const std::size_t t = queue.front();
        queue.pop_front();
        for (std::size_t i = offset[t]; i < offset[t + 1]; ++i) {
            const std::size_t s = preds[i];
            if (rank[s] != kUnranked) continue;
            const VertexId v = static_cast<VertexId>((s / levels) % n);
            if (g.owner(v) == Owner::Min || --pending[s] == 0) {
                rank[s] = rank[t] + 1;
                queue.push_back(s);
            }
        }
    }

    std::size_t state = index_of(start, std::min(credit, bound), witness.index_at(start));
    if (rank[state] == kUnranked) {
        throw WitnessIncomplete("Max survives the witness from vertex " + std::to_string(start) + " with credit " +
                                std::to_string(credit));
    }

    WitnessTrace trace;
    Weight prefix = 0, max_prefix = 0;
    trace.min_segment_weight = std::numeric_limits<Weight>::max();
    while (state != lose) {
        Move best{kUnranked, kNoEdge};
        moves(state, [&](Move m) {
            if (rank[m.to] == kUnranked) return;
            if (best.to == kUnranked || rank[m.to] > rank[best.to]) best = m;
        });
        const Edge& ed = g.edge(best.edge);
        const Weight energy = static_cast<Weight>(state % levels) + ed.weight;
        trace.steps.push_back({ed.source, ed.target, ed.weight, energy, state / levels / n});
        prefix += ed.weight;
        trace.min_segment_weight = std::min(trace.min_segment_weight, prefix - max_prefix);
        max_prefix = std::max(max_prefix, prefix);
        state = best.to;
    }
    trace.segment_violation = trace.min_segment_weight < -bound;
    return trace;
}

} // namespace kasi
