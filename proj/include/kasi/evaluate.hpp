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

#include <string>
#include <vector>

#include "kasi/core.hpp"
#include "kasi/dijkstra.hpp"

namespace kasi {

struct Evaluation
{
    PotentialVector d;
    VertexSet initial_targets;
    VertexSet targets;
    /// Longest-path forest of the last Dijkstra pass.
    std::vector<EdgeId> parent;
    std::size_t dijkstra_calls = 0;
};

namespace detail {

// true iff v has an edge of G_pi whose transformed weight under d is >= 0
inline bool has_nonnegative_edge(const StrategyView& view, const PotentialVector& d, VertexId v)
{
    const GameGraph& g = view.graph();
    if (d[v].is_neg_inf()) return false;
    for (EdgeId e : g.out_edges(v)) {
        if (!view.active(e)) continue;
        const VertexId u = g.edge(e).target;
        if (d[u].is_finite() && g.edge(e).weight - d[v].value() + d[u].value() >= 0) return true;
    }
    return false;
}

} // namespace detail

/**
 * Evaluate Min's strategy pi: returns d with d(v) = -lwub_b of v in the
 * one-player game Gamma_pi(D), D = {v | d_prev(v) > -inf}.
 *
 * The candidate set starts as the zero-potential vertices with a
 * non-negative transformed edge and shrinks until longest paths to it stop
 * invalidating any member.
 */
inline Evaluation evaluate_strategy_detailed(const GameGraph& g, Weight bound, const PositionalStrategy& pi,
                                             const PotentialVector& d_prev)
{
    const StrategyView view(g, pi);
    const std::size_t n = g.vertex_count();

    Evaluation ev;
    ev.targets = VertexSet(n);
    for (VertexId v = 0; v < n; ++v) {
        if (d_prev[v] == Potential(0) && detail::has_nonnegative_edge(view, d_prev, v)) ev.targets.insert(v);
    }
    ev.initial_targets = ev.targets;

    PotentialVector potentials = d_prev;
    for (;;) {
        LongestPaths paths = longest_paths_detailed(view, bound, ev.targets, potentials);
        ++ev.dijkstra_calls;
        potentials = std::move(paths.d);
        ev.parent = std::move(paths.parent);

        bool removed = false;
        for (VertexId v : ev.targets.elements()) {
            if (!detail::has_nonnegative_edge(view, potentials, v)) {
                ev.targets.erase(v);
                removed = true;
            }
        }
        if (!removed) break;
    }
    ev.d = std::move(potentials);
    return ev;
}

inline PotentialVector evaluate_strategy(const GameGraph& g, Weight bound, const PositionalStrategy& pi,
                                         const PotentialVector& d_prev)
{
    return evaluate_strategy_detailed(g, bound, pi, d_prev).d;
}

/**
 * Check the entry conditions of evaluate_strategy with A = {d = 0} and
 * D = {d > -inf}:
 *  (ii) on D \ A every d(v) < 0 and d(v) >= d(u) + w(v,u) along G_pi;
 *  (i)  every cycle of G_pi(D \ A) is negative.
 * (i) is checked by Bellman-Ford on w' = w * (k + 1) + 1, k = |D \ A|: a
 * simple cycle is negative under w exactly when it is negative under w', so
 * a cycle of weight >= 0 shows up as a positive w'-cycle. Skipped when
 * |D \ A| exceeds cycle_check_limit.
 */
inline void check_entry_conditions(const GameGraph& g, const PositionalStrategy& pi, const PotentialVector& d,
                                   std::size_t cycle_check_limit = 4096)
{
    const StrategyView view(g, pi);
    const std::size_t n = g.vertex_count();
    std::vector<std::uint8_t> inner(n, 0);
    std::size_t k = 0;
    for (VertexId v = 0; v < n; ++v) {
        if (d[v].is_neg_inf() || d[v] == Potential(0)) continue;
        if (d[v].value() > 0) {
            throw PreconditionViolated(2, "d(" + std::to_string(v) + ") is positive");
        }
        inner[v] = 1;
        ++k;
        for (EdgeId e : g.out_edges(v)) {
            if (!view.active(e)) continue;
            const Edge& ed = g.edge(e);
            if (d[v] < d[ed.target] + ed.weight) {
                throw PreconditionViolated(2, "edge " + std::to_string(v) + "->" + std::to_string(ed.target) +
                                                  " violates d(v) >= d(u) + w(v,u)");
            }
        }
    }
    if (k == 0 || k > cycle_check_limit) return;

    const Weight scale = static_cast<Weight>(k) + 1;
    std::vector<Weight> dist(n, 0);
    for (std::size_t round = 0; round <= k; ++round) {
        bool changed = false;
        for (EdgeId e = 0; e < g.edge_count(); ++e) {
            const Edge& ed = g.edge(e);
            if (!inner[ed.source] || !inner[ed.target] || !view.active(e)) continue;
            const Weight cand = dist[ed.source] + ed.weight * scale + 1;
            if (cand > dist[ed.target]) {
                dist[ed.target] = cand;
                changed = true;
            }
        }
        if (!changed) return;
    }
    throw PreconditionViolated(1, "G_pi(D \\ A) has a non-negative cycle");
}

} // namespace kasi
