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

#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "kasi/core.hpp"

namespace kasi {

// Value iteration (VI) for lwub_b. d_k(v) is the least credit that keeps
// Max's energy non-negative for k steps with energy truncated at b; the
// iteration climbs from d_0 = 0 to the least fixpoint, which is lwub_b.

enum class ViVariant { Plain, Worklist };

struct ViOptions
{
    ViVariant variant = ViVariant::Worklist;
    /// Worklist only: pop a uniformly random pending vertex instead of FIFO order.
    std::optional<std::uint64_t> order_seed;
    /// Abort with TimeLimitExceeded once this point in time has passed.
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct ViResult
{
    EnergyVector values;
    /// Sweeps (plain) or vertex recomputations (worklist).
    std::size_t iterations = 0;
};

namespace detail {

// max(0, d(u) - w): the credit needed at v to take (v,u) and arrive with d(u)
inline Energy vi_edge_cost(Energy du, Weight w)
{
    if (du.is_infinite()) return du;
    return Energy(std::max<Weight>(0, du.value() - w));
}

inline Energy vi_update(const GameGraph& g, Weight bound, const EnergyVector& d, VertexId v)
{
    const bool max_vertex = g.owner(v) == Owner::Max;
    std::optional<Energy> x;
    for (EdgeId e : g.out_edges(v)) {
        const Energy c = vi_edge_cost(d[g.edge(e).target], g.edge(e).weight);
        if (!x || (max_vertex ? c < *x : c > *x)) x = c;
    }
    if (x->is_infinite() || x->value() > bound) return Energy::infinity();
    return *x;
}

inline void check_deadline(const ViOptions& options)
{
    if (options.deadline && std::chrono::steady_clock::now() > *options.deadline) {
        throw TimeLimitExceeded("value iteration hit its time limit");
    }
}

} // namespace detail

/// One synchronous VI sweep: every vertex is recomputed from `d`.
inline EnergyVector vi_step(const GameGraph& g, Weight bound, const EnergyVector& d)
{
    EnergyVector next(d.size());
    for (VertexId v = 0; v < g.vertex_count(); ++v) next[v] = detail::vi_update(g, bound, d, v);
    return next;
}

namespace detail {

inline ViResult vi_plain(const GameGraph& g, Weight bound, const ViOptions& options)
{
    ViResult r{EnergyVector(g.vertex_count(), Energy(0)), 0};
    for (;;) {
        if ((r.iterations & 63) == 0) check_deadline(options);
        EnergyVector next = vi_step(g, bound, r.values);
        ++r.iterations;
        if (next == r.values) return r;
        r.values = std::move(next);
    }
}

/*
 * Worklist VI. A vertex is recomputed only when a successor's value grew.
 * For a Max vertex v we keep support[v], the number of out-edges whose cost
 * does not exceed d(v); a successor increase that pushes an edge's cost
 * above d(v) decrements it, and v needs recomputing only when it reaches 0.
 * A Min vertex needs recomputing as soon as one edge cost exceeds d(v).
 * Values only grow and are capped by b or infinity, so the loop terminates in
 * the same least fixpoint as the plain sweep whatever the pop order.
 */
inline ViResult vi_worklist(const GameGraph& g, Weight bound, const ViOptions& options)
{
    const std::size_t n = g.vertex_count();
    ViResult r{EnergyVector(n, Energy(0)), 0};
    EnergyVector& d = r.values;
    std::vector<std::uint32_t> support(n, 0);
    std::vector<std::uint8_t> queued(n, 1);
    std::vector<VertexId> work(n);
    for (VertexId v = 0; v < n; ++v) work[v] = v;
    std::size_t head = 0;
    std::optional<std::mt19937_64> rng;
    if (options.order_seed) rng.emplace(*options.order_seed);

    const auto pop = [&]() -> VertexId {
        if (rng) {
            const std::size_t i = head + (*rng)() % (work.size() - head);
            std::swap(work[i], work.back());
            const VertexId v = work.back();
            work.pop_back();
            return v;
        }
        const VertexId v = work[head++];
        if (head > 4096 && head * 2 > work.size()) {
            work.erase(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(head));
            head = 0;
        }
        return v;
    };

    while (head < work.size()) {
        if ((r.iterations & 4095) == 0) check_deadline(options);
        const VertexId v = pop();
        queued[v] = 0;
        if (d[v].is_infinite()) continue;
        ++r.iterations;

        const Energy old = d[v];
        const Energy x = vi_update(g, bound, d, v);
        if (g.owner(v) == Owner::Max && x.is_finite()) {
            std::uint32_t count = 0;
            for (EdgeId e : g.out_edges(v)) {
                if (vi_edge_cost(d[g.edge(e).target], g.edge(e).weight) <= x) ++count;
            }
            support[v] = count;
        }
        if (x == old) continue;
        d[v] = x;

        for (EdgeId e : g.in_edges(v)) {
            const VertexId p = g.edge(e).source;
            if (queued[p] || d[p].is_infinite()) continue;
            const Weight w = g.edge(e).weight;
            const Energy before = vi_edge_cost(old, w), after = vi_edge_cost(x, w);
            bool wake = false;
            if (g.owner(p) == Owner::Max) {
                if (before <= d[p] && after > d[p]) wake = --support[p] == 0;
            } else {
                wake = after > d[p];
            }
            if (wake) {
                queued[p] = 1;
                work.push_back(p);
            }
        }
    }
    return r;
}

} // namespace detail

inline ViResult vi_solve_detailed(const GameGraph& g, Weight bound, const ViOptions& options = {})
{
    if (auto err = validate(g)) throw *err;
    if (bound < 0) throw Error("bound must be non-negative");
    check_arithmetic_width(g, bound);
    return options.variant == ViVariant::Plain ? detail::vi_plain(g, bound, options)
                                               : detail::vi_worklist(g, bound, options);
}

/// lwub_b by value iteration.
inline EnergyVector vi_solve(const GameGraph& g, Weight bound, const ViOptions& options = {})
{
    return vi_solve_detailed(g, bound, options).values;
}

} // namespace kasi
