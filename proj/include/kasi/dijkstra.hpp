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

#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "kasi/core.hpp"

namespace kasi {

/**
 * The edge set of G_pi over an unmodified game: every edge of a vertex not
 * owned by the strategy player, plus the single edge the strategy uses at
 * each of its player's vertices. A default-constructed view over a graph
 * treats every edge as active (the graph is already restricted).
 */
class StrategyView
{
public:
    explicit StrategyView(const GameGraph& g) : graph_(&g) {}
    StrategyView(const GameGraph& g, const PositionalStrategy& s)
        : graph_(&g), chosen_(strategy_edges(g, s))
    {}

    const GameGraph& graph() const noexcept { return *graph_; }

    bool active(EdgeId e) const
    {
        if (chosen_.empty()) return true;
        const EdgeId c = chosen_[graph_->edge(e).source];
        return c == kNoEdge || c == e;
    }

private:
    const GameGraph* graph_;
    std::vector<EdgeId> chosen_;
};

struct LongestPaths
{
    PotentialVector d;
    /// First edge of the chosen longest path for finite non-target vertices, kNoEdge otherwise.
    std::vector<EdgeId> parent;
};

/**
 * Longest admissible paths to a target set in a one-player graph.
 *
 * For each vertex v with a finite potential, d(v) is the largest weight of a
 * path from v to `targets` (targets only at the end) whose every suffix
 * weighs at least -bound; d(v) = 0 on targets, -infinity if no such path
 * exists. Vertices with potential -infinity are outside the domain and stay
 * -infinity.
 *
 * The search runs backwards from the targets on the potential-transformed
 * weights w(x,y) - p(x) + p(y), which must be non-positive on every relaxed
 * edge; the key of a vertex is d(x) - p(x) <= 0, so a max-heap settles
 * vertices in Dijkstra order. Stale heap entries are skipped on pop.
 *
 * Suffix pruning: when y is settled, d(y) is the weight of the heaviest
 * admissible path from y. Any admissible path from x through the edge (x,y)
 * has an admissible remainder from y, and swapping that remainder for the
 * heaviest one raises the total while every suffix that starts at y or later
 * stays admissible. So the best admissible path through (x,y) exists iff
 * d(y) + w(x,y) >= -bound, and then it weighs exactly that. Rejecting the
 * relaxation otherwise is therefore exact, not a heuristic.
 */
inline LongestPaths longest_paths_detailed(const StrategyView& view, Weight bound, const VertexSet& targets,
                                           const PotentialVector& potentials)
{
    const GameGraph& g = view.graph();
    const std::size_t n = g.vertex_count();

    LongestPaths out{PotentialVector(n, Potential::neg_inf()), std::vector<EdgeId>(n, kNoEdge)};
    std::vector<Weight> key(n, 0);
    std::vector<std::uint8_t> reached(n, 0), settled(n, 0);
    std::priority_queue<std::pair<Weight, VertexId>> heap;

    for (VertexId t = 0; t < n; ++t) {
        if (!targets.contains(t)) continue;
        if (potentials[t] != Potential(0)) {
            throw Error("target " + std::to_string(t) + " does not have potential 0");
        }
        reached[t] = 1;
        out.d[t] = Potential(0);
        heap.emplace(0, t);
    }

    while (!heap.empty()) {
        const auto [k, y] = heap.top();
        heap.pop();
        if (settled[y] || k != key[y]) continue;
        settled[y] = 1;
        const Weight dy = out.d[y].value();
        const Weight py = potentials[y].value();

        for (EdgeId e : g.in_edges(y)) {
            if (!view.active(e)) continue;
            const VertexId x = g.edge(e).source;
            if (settled[x] || targets.contains(x) || potentials[x].is_neg_inf()) continue;
            const Weight w = g.edge(e).weight;
            const Weight px = potentials[x].value();
            if (w - px + py > 0) {
                throw PositiveTransformedEdge(e, "edge " + std::to_string(x) + "->" + std::to_string(y) +
                                                     " has positive transformed weight");
            }
            const Weight candidate = dy + w;
            if (candidate < -bound) continue;
            const Weight kx = candidate - px;
            if (!reached[x] || kx > key[x]) {
                reached[x] = 1;
                key[x] = kx;
                out.d[x] = Potential(candidate);
                out.parent[x] = e;
                heap.emplace(kx, x);
            }
        }
    }

    for (VertexId v = 0; v < n; ++v) {
        if (!settled[v]) {
            out.d[v] = Potential::neg_inf();
            out.parent[v] = kNoEdge;
        }
    }
    return out;
}

/// Longest admissible paths to `targets` in an already restricted graph; see longest_paths_detailed.
inline PotentialVector dijkstra_longest(const GameGraph& restricted, Weight bound, const VertexSet& targets,
                                        const PotentialVector& potentials)
{
    return longest_paths_detailed(StrategyView(restricted), bound, targets, potentials).d;
}

} // namespace kasi
