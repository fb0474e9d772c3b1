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

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kasi/core.hpp"
#include "kasi/evaluate.hpp"

namespace kasi {

#ifdef NDEBUG
inline constexpr bool kCheckConditionsByDefault = false;
#else
inline constexpr bool kCheckConditionsByDefault = true;
#endif

/// Index of the evaluation in which a vertex's potential became -infinity.
inline constexpr std::size_t kAlive = std::numeric_limits<std::size_t>::max();

/**
 * Min's optimal play from losing vertices: the strategies pi_0..pi_k in the
 * order they were evaluated, and for each vertex the index of the evaluation
 * that made it -infinity (kAlive if it stayed finite).
 */
struct MinWitness
{
    std::vector<PositionalStrategy> strategies;
    std::vector<std::size_t> death_index;

    /// Strategy index Min uses at v: its death index, the last strategy for surviving vertices.
    std::size_t index_at(VertexId v) const
    {
        return death_index[v] == kAlive ? strategies.size() - 1 : death_index[v];
    }

    friend bool operator==(const MinWitness&, const MinWitness&) = default;
};

/**
 * Rebuild the Min witness from a run's history: the evaluated strategies in
 * order and the potential vector each evaluation produced. A vertex dies in
 * the first evaluation that makes it -infinity.
 */
inline MinWitness build_min_witness(std::vector<PositionalStrategy> strategies,
                                    const std::vector<PotentialVector>& evaluations)
{
    if (strategies.size() != evaluations.size() || strategies.empty()) {
        throw Error("witness history needs one potential vector per strategy");
    }
    MinWitness w{std::move(strategies), std::vector<std::size_t>(evaluations.front().size(), kAlive)};
    for (std::size_t i = 0; i < evaluations.size(); ++i) {
        for (VertexId v = 0; v < w.death_index.size(); ++v) {
            if (w.death_index[v] == kAlive && evaluations[i][v].is_neg_inf()) w.death_index[v] = i;
        }
    }
    return w;
}

struct IterationEvent
{
    std::size_t index;
    const PositionalStrategy& strategy;
    const PotentialVector& d_before;
    const Evaluation& evaluation;
};

struct SolverOptions
{
    /// Verify entry conditions (i) and (ii) before each evaluation.
    bool check_conditions = kCheckConditionsByDefault;
    std::size_t cycle_check_limit = 4096;
    /// Start from this Min strategy instead of the lowest-indexed successors.
    std::optional<PositionalStrategy> initial_strategy;
    /// Draw the initial Min strategy at random; ignored when initial_strategy is set.
    std::optional<std::uint64_t> initial_strategy_seed;
    std::function<void(const IterationEvent&)> on_iteration;
};

struct SolveResult
{
    EnergyVector lwub;
    PositionalStrategy max_strategy;
    MinWitness min_witness;
    std::size_t iterations = 0;
    std::size_t dijkstra_calls = 0;
    PotentialVector final_d;
    Weight bound = 0;
};

struct Improvement
{
    PositionalStrategy strategy;
    bool changed = false;
};

/**
 * Switch every Min vertex v with finite d(v) that has an edge (v,u) with
 * d(v) > d(u) + w(v,u). Among several such edges the one minimising
 * d(u) + w(v,u) wins, then the lowest u.
 */
inline Improvement improve_strategy(const GameGraph& g, const PotentialVector& d, const PositionalStrategy& pi)
{
    Improvement out{pi, false};
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (g.owner(v) != Owner::Min || d[v].is_neg_inf()) continue;
        VertexId best = kNoVertex;
        Potential best_value;
        for (EdgeId e : g.out_edges(v)) {
            const Edge& ed = g.edge(e);
            const Potential cand = d[ed.target] + ed.weight;
            if (!(d[v] > cand)) continue;
            if (best == kNoVertex || cand < best_value || (cand == best_value && ed.target < best)) {
                best = ed.target;
                best_value = cand;
            }
        }
        if (best != kNoVertex && best != out.strategy.choice[v]) {
            out.strategy.choice[v] = best;
            out.changed = true;
        }
    }
    return out;
}

/**
 * Optimal positional strategy of Max read off a converged evaluation:
 * the longest-path forest edge outside the final candidate set, an edge with
 * non-negative transformed weight inside it (lowest target), and the lowest
 * successor at vertices with d = -infinity.
 */
inline PositionalStrategy extract_max_strategy(const GameGraph& g, const Evaluation& ev)
{
    PositionalStrategy sigma{Owner::Max, std::vector<VertexId>(g.vertex_count(), kNoVertex)};
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (g.owner(v) != Owner::Max) continue;
        VertexId pick = kNoVertex;
        if (ev.d[v].is_finite() && !ev.targets.contains(v)) {
            pick = g.edge(ev.parent[v]).target;
        } else if (ev.d[v].is_finite()) {
            for (EdgeId e : g.out_edges(v)) {
                const Edge& ed = g.edge(e);
                if (ed.target < pick && ev.d[ed.target].is_finite() &&
                    ed.weight - ev.d[v].value() + ev.d[ed.target].value() >= 0) {
                    pick = ed.target;
                }
            }
        } else {
            for (EdgeId e : g.out_edges(v)) pick = std::min(pick, g.edge(e).target);
        }
        if (pick == kNoVertex) throw InternalError("no strategy edge for Max vertex " + std::to_string(v));
        sigma.choice[v] = pick;
    }
    return sigma;
}

/// |V|^2 * W + 1, saturating.
inline std::size_t iteration_budget(const GameGraph& g)
{
    const auto n = static_cast<unsigned __int128>(g.vertex_count());
    const auto budget = n * n * static_cast<unsigned __int128>(max_abs_weight(g)) + 1;
    return budget > std::numeric_limits<std::size_t>::max() ? std::numeric_limits<std::size_t>::max()
                                                              : static_cast<std::size_t>(budget);
}

inline PositionalStrategy random_strategy(const GameGraph& g, Owner player, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    PositionalStrategy s{player, std::vector<VertexId>(g.vertex_count(), kNoVertex)};
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (g.owner(v) != player) continue;
        const auto out = g.out_edges(v);
        s.choice[v] = g.edge(out[rng() % out.size()]).target;
    }
    return s;
}

/**
 * Minimal sufficient initial energy for Max with energy truncated at `bound`
 * (lwub_b), by strategy improvement over Min's positional strategies.
 *
 * Each iteration evaluates the current Min strategy, records it for the Min
 * witness, then applies improve_strategy; the loop ends when no Min vertex
 * switches. The descent of d, the iteration budget |V|^2 W + 1, the |V| bound
 * on Dijkstra passes per evaluation and the shrinking of the candidate set
 * are checked on every iteration and reported as InternalError.
 */
inline SolveResult solve_lwub(const GameGraph& g, Weight bound, const SolverOptions& options = {})
{
    if (auto err = validate(g)) throw *err;
    if (bound < 0) throw Error("bound must be non-negative");
    check_arithmetic_width(g, bound);

    const std::size_t n = g.vertex_count();
    const std::size_t budget = iteration_budget(g);

    PositionalStrategy pi = options.initial_strategy ? *options.initial_strategy
                            : options.initial_strategy_seed
                                ? random_strategy(g, Owner::Min, *options.initial_strategy_seed)
                                : lowest_successor_strategy(g, Owner::Min);
    check_strategy(g, pi);
    if (pi.player != Owner::Min) throw InvalidStrategy("initial strategy must belong to Min");
    PotentialVector d(n, Potential(0));
    VertexSet previous_targets(n);
    for (VertexId v = 0; v < n; ++v) previous_targets.insert(v);

    SolveResult result;
    result.bound = bound;
    result.min_witness.death_index.assign(n, kAlive);

    Evaluation ev;
    for (std::size_t iter = 0;; ++iter) {
        if (iter >= budget) {
            throw InternalError("strategy improvement exceeded |V|^2 W + 1 = " + std::to_string(budget) +
                                " iterations");
        }
        if (options.check_conditions) check_entry_conditions(g, pi, d, options.cycle_check_limit);

        ev = evaluate_strategy_detailed(g, bound, pi, d);
        result.dijkstra_calls += ev.dijkstra_calls;

        if (ev.dijkstra_calls > std::max<std::size_t>(n, 1)) {
            throw InternalError("evaluation ran " + std::to_string(ev.dijkstra_calls) + " Dijkstra passes on " +
                                std::to_string(n) + " vertices");
        }
        if (!ev.initial_targets.is_subset_of(previous_targets)) {
            throw InternalError("candidate set gained a vertex between evaluations");
        }
        if (iter > 0 && !strictly_below(ev.d, d)) {
            throw InternalError("potential vector did not decrease in iteration " + std::to_string(iter));
        }

        result.min_witness.strategies.push_back(pi);
        for (VertexId v = 0; v < n; ++v) {
            if (d[v].is_finite() && ev.d[v].is_neg_inf()) result.min_witness.death_index[v] = iter;
        }
        if (options.on_iteration) options.on_iteration(IterationEvent{iter, pi, d, ev});

        previous_targets = ev.targets;
        d = ev.d;
        result.iterations = iter + 1;

        Improvement next = improve_strategy(g, d, pi);
        if (!next.changed) break;
        pi = std::move(next.strategy);
    }

    result.lwub = negate(d);
    result.max_strategy = extract_max_strategy(g, ev);
    result.final_d = std::move(d);
    return result;
}

/// The bound (|V| - 1) * W at which lwub coincides with lb.
inline Weight lower_bound_reduction_bound(const GameGraph& g)
{
    const Weight n = static_cast<Weight>(g.vertex_count());
    const Weight w = max_abs_weight(g);
    if (n > 1 && w > std::numeric_limits<Weight>::max() / (n - 1)) {
        throw OverflowRisk("(|V| - 1) * W does not fit into 64-bit weights");
    }
    return n == 0 ? 0 : (n - 1) * w;
}

/// Minimal sufficient initial energy without an upper bound (lb).
inline SolveResult solve_lb(const GameGraph& g, const SolverOptions& options = {})
{
    if (auto err = validate(g)) throw *err;
    const Weight b = lower_bound_reduction_bound(g);
    check_arithmetic_width(g, b);
    return solve_lwub(g, b, options);
}

struct SignPartition
{
    std::vector<VertexId> non_negative;
    std::vector<VertexId> negative;

    friend bool operator==(const SignPartition&, const SignPartition&) = default;
};

/// Split vertices by the sign of their mean-payoff value: nu(v) >= 0 iff lb(v) is finite.
inline SignPartition sign_partition_from(const EnergyVector& lb)
{
    SignPartition p;
    for (VertexId v = 0; v < lb.size(); ++v) (lb[v].is_finite() ? p.non_negative : p.negative).push_back(v);
    return p;
}

inline SignPartition winning_sign(const GameGraph& g, const SolverOptions& options = {})
{
    return sign_partition_from(solve_lb(g, options).lwub);
}

} // namespace kasi
