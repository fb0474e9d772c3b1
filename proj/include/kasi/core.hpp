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
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kasi/error.hpp"

namespace kasi {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using Weight = std::int64_t;

inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();
inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

enum class Owner : std::uint8_t { Max, Min };

constexpr Owner opponent(Owner o) noexcept { return o == Owner::Max ? Owner::Min : Owner::Max; }

inline const char* to_string(Owner o) noexcept { return o == Owner::Max ? "MAX" : "MIN"; }

struct Edge
{
    VertexId source;
    VertexId target;
    Weight weight;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/**
 * Finite weighted directed graph whose vertices are split between Max and Min.
 *
 * Immutable after construction. Parallel edges and self-loops are allowed.
 * Out- and in-adjacency are stored as CSR arrays of edge ids; edges whose
 * endpoints are out of range are kept in edges() but left out of the
 * adjacency so that validate() can report them.
 */
class GameGraph
{
public:
    GameGraph() = default;

    GameGraph(std::vector<Owner> owners, std::vector<Edge> edges)
        : owners_(std::move(owners)), edges_(std::move(edges))
    {
        build_adjacency();
    }

    std::size_t vertex_count() const noexcept { return owners_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    Owner owner(VertexId v) const { return owners_[v]; }
    const std::vector<Owner>& owners() const noexcept { return owners_; }

    const Edge& edge(EdgeId e) const { return edges_[e]; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    std::span<const EdgeId> out_edges(VertexId v) const
    {
        return {out_list_.data() + out_offset_[v], out_list_.data() + out_offset_[v + 1]};
    }

    std::span<const EdgeId> in_edges(VertexId v) const
    {
        return {in_list_.data() + in_offset_[v], in_list_.data() + in_offset_[v + 1]};
    }

    std::size_t out_degree(VertexId v) const { return out_offset_[v + 1] - out_offset_[v]; }

    friend bool operator==(const GameGraph& a, const GameGraph& b)
    {
        return a.owners_ == b.owners_ && a.edges_ == b.edges_;
    }

private:
    void build_adjacency()
    {
        const std::size_t n = owners_.size();
        out_offset_.assign(n + 1, 0);
        in_offset_.assign(n + 1, 0);
        for (const Edge& e : edges_) {
            if (e.source >= n || e.target >= n) continue;
            ++out_offset_[e.source + 1];
            ++in_offset_[e.target + 1];
        }
        for (std::size_t v = 0; v < n; ++v) {
            out_offset_[v + 1] += out_offset_[v];
            in_offset_[v + 1] += in_offset_[v];
        }
        out_list_.resize(out_offset_[n]);
        in_list_.resize(in_offset_[n]);
        std::vector<std::size_t> out_fill(out_offset_.begin(), out_offset_.end() - 1);
        std::vector<std::size_t> in_fill(in_offset_.begin(), in_offset_.end() - 1);
        for (EdgeId id = 0; id < edges_.size(); ++id) {
            const Edge& e = edges_[id];
            if (e.source >= n || e.target >= n) continue;
            out_list_[out_fill[e.source]++] = id;
            in_list_[in_fill[e.target]++] = id;
        }
    }

    std::vector<Owner> owners_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> out_offset_{0};
    std::vector<std::size_t> in_offset_{0};
    std::vector<EdgeId> out_list_;
    std::vector<EdgeId> in_list_;
};

/**
 * Check every GameGraph invariant. Returns the first violation, or nothing
 * when the graph is a legal game. Checked in order: dangling edges, zero
 * out-degree, adjacency consistency.
 */
inline std::optional<StructuralError> validate(const GameGraph& g)
{
    const std::size_t n = g.vertex_count();
    for (EdgeId id = 0; id < g.edge_count(); ++id) {
        const Edge& e = g.edge(id);
        if (e.source >= n || e.target >= n) {
            return StructuralError(StructuralError::Kind::DanglingEdge, id,
                                   "edge " + std::to_string(id) + " has an endpoint outside 0.." +
                                       std::to_string(n == 0 ? 0 : n - 1));
        }
    }
    for (VertexId v = 0; v < n; ++v) {
        if (g.out_degree(v) == 0) {
            return StructuralError(StructuralError::Kind::ZeroOutDegree, v,
                                   "vertex " + std::to_string(v) + " has no outgoing edge");
        }
    }
    // every edge id must appear exactly once in the out-list of its source and
    // once in the in-list of its target
    std::vector<std::uint8_t> seen_out(g.edge_count(), 0), seen_in(g.edge_count(), 0);
    const auto mismatch = [] {
        return StructuralError(StructuralError::Kind::AdjacencyMismatch, 0,
                               "in- and out-adjacency disagree");
    };
    for (VertexId v = 0; v < n; ++v) {
        for (EdgeId id : g.out_edges(v)) {
            if (id >= g.edge_count() || g.edge(id).source != v || seen_out[id]++) return mismatch();
        }
        for (EdgeId id : g.in_edges(v)) {
            if (id >= g.edge_count() || g.edge(id).target != v || seen_in[id]++) return mismatch();
        }
    }
    for (EdgeId id = 0; id < g.edge_count(); ++id) {
        if (!seen_out[id] || !seen_in[id]) return mismatch();
    }
    return std::nullopt;
}

/// Build a game and throw the first structural violation, if any.
inline GameGraph make_game(std::vector<Owner> owners, std::vector<Edge> edges)
{
    GameGraph g(std::move(owners), std::move(edges));
    if (auto err = validate(g)) throw *err;
    return g;
}

/// W, the maximal absolute edge weight (0 for an edgeless or all-zero graph).
inline Weight max_abs_weight(const GameGraph& g)
{
    Weight w = 0;
    for (const Edge& e : g.edges()) {
        if (e.weight == std::numeric_limits<Weight>::min()) {
            throw OverflowRisk("edge weight has no representable absolute value");
        }
        w = std::max(w, e.weight < 0 ? -e.weight : e.weight);
    }
    return w;
}

/**
 * Throw OverflowRisk unless every sum the solvers form fits in Weight.
 * Solvers add at most |V| edge weights on top of a value bounded by
 * max(bound, |V| * W); we require |V| * (|V| * W + bound) to stay well inside
 * the 64-bit range.
 */
inline void check_arithmetic_width(const GameGraph& g, Weight bound = 0)
{
    constexpr auto limit = static_cast<unsigned __int128>(std::numeric_limits<Weight>::max() / 4);
    const auto n = static_cast<unsigned __int128>(g.vertex_count() + 1);
    const auto w = static_cast<unsigned __int128>(max_abs_weight(g));
    if (bound < 0) throw OverflowRisk("negative bound");
    const auto span = n * w + static_cast<unsigned __int128>(bound);
    if (span > limit || n * span > limit) {
        throw OverflowRisk("|V| * (|V| * W + b) does not fit into 64-bit weights");
    }
}

/**
 * Vertex potential in Z extended with -infinity.
 *
 * The -infinity element is a separate state, not a reserved integer: value()
 * is only defined on finite potentials and adding a weight to -infinity
 * yields -infinity.
 */
class Potential
{
public:
    constexpr Potential() noexcept = default;
    constexpr explicit Potential(Weight value) noexcept : value_(value) {}

    static constexpr Potential neg_inf() noexcept
    {
        Potential p;
        p.finite_ = false;
        return p;
    }

    constexpr bool is_finite() const noexcept { return finite_; }
    constexpr bool is_neg_inf() const noexcept { return !finite_; }
    constexpr Weight value() const noexcept { return value_; }

    friend constexpr Potential operator+(Potential p, Weight w) noexcept
    {
        return p.finite_ ? Potential(p.value_ + w) : p;
    }

    friend constexpr bool operator==(Potential a, Potential b) noexcept
    {
        return a.finite_ == b.finite_ && (!a.finite_ || a.value_ == b.value_);
    }

    friend constexpr bool operator<(Potential a, Potential b) noexcept
    {
        if (!b.finite_) return false;
        if (!a.finite_) return true;
        return a.value_ < b.value_;
    }
    friend constexpr bool operator>(Potential a, Potential b) noexcept { return b < a; }
    friend constexpr bool operator<=(Potential a, Potential b) noexcept { return !(b < a); }
    friend constexpr bool operator>=(Potential a, Potential b) noexcept { return !(a < b); }

private:
    Weight value_ = 0;
    bool finite_ = true;
};

using PotentialVector = std::vector<Potential>;

/// Minimal initial energy in N0 extended with +infinity.
class Energy
{
public:
    constexpr Energy() noexcept = default;
    constexpr explicit Energy(Weight value) noexcept : value_(value) {}

    static constexpr Energy infinity() noexcept
    {
        Energy e;
        e.finite_ = false;
        return e;
    }

    constexpr bool is_finite() const noexcept { return finite_; }
    constexpr bool is_infinite() const noexcept { return !finite_; }
    constexpr Weight value() const noexcept { return value_; }

    friend constexpr bool operator==(Energy a, Energy b) noexcept
    {
        return a.finite_ == b.finite_ && (!a.finite_ || a.value_ == b.value_);
    }

    friend constexpr bool operator<(Energy a, Energy b) noexcept
    {
        if (!a.finite_) return false;
        if (!b.finite_) return true;
        return a.value_ < b.value_;
    }
    friend constexpr bool operator>(Energy a, Energy b) noexcept { return b < a; }
    friend constexpr bool operator<=(Energy a, Energy b) noexcept { return !(b < a); }
    friend constexpr bool operator>=(Energy a, Energy b) noexcept { return !(a < b); }

private:
    Weight value_ = 0;
    bool finite_ = true;
};

using EnergyVector = std::vector<Energy>;

/// -d, mapping -infinity to +infinity.
inline EnergyVector negate(const PotentialVector& d)
{
    EnergyVector out;
    out.reserve(d.size());
    for (Potential p : d) out.push_back(p.is_finite() ? Energy(-p.value()) : Energy::infinity());
    return out;
}

/// Pointwise d <= e with at least one strict entry.
inline bool strictly_below(const PotentialVector& d, const PotentialVector& e)
{
    bool strict = false;
    for (std::size_t v = 0; v < d.size(); ++v) {
        if (e[v] < d[v]) return false;
        strict = strict || d[v] < e[v];
    }
    return strict;
}

/**
 * Positional strategy of one player: a successor for each of that player's
 * vertices. Entries of the other player's vertices hold kNoVertex.
 */
struct PositionalStrategy
{
    Owner player = Owner::Min;
    std::vector<VertexId> choice;

    VertexId operator()(VertexId v) const { return choice[v]; }

    friend bool operator==(const PositionalStrategy&, const PositionalStrategy&) = default;
};

/// Throw InvalidStrategy unless s is defined on exactly its player's vertices and follows edges.
inline void check_strategy(const GameGraph& g, const PositionalStrategy& s)
{
    if (s.choice.size() != g.vertex_count()) {
        throw InvalidStrategy("strategy size " + std::to_string(s.choice.size()) +
                              " does not match vertex count " + std::to_string(g.vertex_count()));
    }
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (g.owner(v) != s.player) {
            if (s.choice[v] != kNoVertex) {
                throw InvalidStrategy("strategy defined on vertex " + std::to_string(v) +
                                      " of the other player");
            }
            continue;
        }
        const auto out = g.out_edges(v);
        const bool ok = std::any_of(out.begin(), out.end(),
                                    [&](EdgeId e) { return g.edge(e).target == s.choice[v]; });
        if (!ok) {
            throw InvalidStrategy("no edge from " + std::to_string(v) + " to " +
                                  (s.choice[v] == kNoVertex ? std::string("<none>")
                                                            : std::to_string(s.choice[v])));
        }
    }
}

/// Strategy choosing the lowest-indexed successor at every vertex of `player`.
inline PositionalStrategy lowest_successor_strategy(const GameGraph& g, Owner player)
{
    PositionalStrategy s{player, std::vector<VertexId>(g.vertex_count(), kNoVertex)};
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (g.owner(v) != player) continue;
        for (EdgeId e : g.out_edges(v)) s.choice[v] = std::min(s.choice[v], g.edge(e).target);
    }
    return s;
}

/**
 * The edge a positional strategy actually uses at each of its player's
 * vertices, kNoEdge elsewhere. When parallel edges lead to the chosen
 * successor the one worst for the opponent is taken: the lightest for Min,
 * the heaviest for Max (lowest edge id on ties).
 */
inline std::vector<EdgeId> strategy_edges(const GameGraph& g, const PositionalStrategy& s)
{
    std::vector<EdgeId> chosen(g.vertex_count(), kNoEdge);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (g.owner(v) != s.player) continue;
        for (EdgeId e : g.out_edges(v)) {
            if (g.edge(e).target != s.choice[v]) continue;
            if (chosen[v] == kNoEdge) {
                chosen[v] = e;
                continue;
            }
            const Weight cur = g.edge(chosen[v]).weight, cand = g.edge(e).weight;
            if (s.player == Owner::Min ? cand < cur : cand > cur) chosen[v] = e;
        }
    }
    return chosen;
}

/**
 * G_pi (or G_sigma): drop every edge leaving the strategy owner's vertices
 * except the one the strategy uses. Vertex ids, owners and the weights of
 * surviving edges are unchanged; surviving edges keep their relative order.
 */
inline GameGraph restrict_to_strategy(const GameGraph& g, const PositionalStrategy& s)
{
    check_strategy(g, s);
    const auto chosen = strategy_edges(g, s);
    std::vector<Edge> edges;
    edges.reserve(g.edge_count());
    for (EdgeId id = 0; id < g.edge_count(); ++id) {
        const VertexId src = g.edge(id).source;
        if (g.owner(src) == s.player && chosen[src] != id) continue;
        edges.push_back(g.edge(id));
    }
    return GameGraph(g.owners(), std::move(edges));
}

/// Weight of the self-loop given to vertices left without successors in an induced subgame.
inline constexpr Weight kDeadEndLoopWeight = -1;

/**
 * Gamma(D): the subgame induced by the vertices with keep[v] set, renumbered
 * in increasing order of their original ids. Vertices whose out-degree drops
 * to zero receive a self-loop of weight kDeadEndLoopWeight, which makes them
 * losing for Max under every bound.
 */
inline GameGraph induced_subgame(const GameGraph& g, const std::vector<bool>& keep)
{
    std::vector<VertexId> new_id(g.vertex_count(), kNoVertex);
    std::vector<Owner> owners;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (v < keep.size() && keep[v]) {
            new_id[v] = static_cast<VertexId>(owners.size());
            owners.push_back(g.owner(v));
        }
    }
    if (owners.empty()) throw EmptyKeepSet();
    std::vector<Edge> edges;
    std::vector<std::uint8_t> has_out(owners.size(), 0);
    for (const Edge& e : g.edges()) {
        const VertexId s = new_id[e.source], t = new_id[e.target];
        if (s == kNoVertex || t == kNoVertex) continue;
        edges.push_back({s, t, e.weight});
        has_out[s] = 1;
    }
    for (VertexId v = 0; v < owners.size(); ++v) {
        if (!has_out[v]) edges.push_back({v, v, kDeadEndLoopWeight});
    }
    return GameGraph(std::move(owners), std::move(edges));
}

/// Weight of a path given as consecutive edge ids. Throws if the edges do not chain.
inline Weight path_weight(const GameGraph& g, std::span<const EdgeId> path)
{
    Weight sum = 0;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (path[i] >= g.edge_count()) throw Error("path uses an unknown edge");
        if (i > 0 && g.edge(path[i - 1]).target != g.edge(path[i]).source) {
            throw Error("path edges do not chain");
        }
        sum += g.edge(path[i]).weight;
    }
    return sum;
}

/// Weight of a cycle given as consecutive edge ids; the last edge must return to the first source.
inline Weight cycle_weight(const GameGraph& g, std::span<const EdgeId> cycle)
{
    const Weight w = path_weight(g, cycle);
    if (cycle.empty() || g.edge(cycle.back()).target != g.edge(cycle.front()).source) {
        throw Error("edges do not form a cycle");
    }
    return w;
}

/**
 * Subset of the vertices of a graph with O(1) membership and a running size.
 */
class VertexSet
{
public:
    VertexSet() = default;
    explicit VertexSet(std::size_t universe) : member_(universe, 0) {}

    bool contains(VertexId v) const { return member_[v] != 0; }
    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }
    std::size_t universe() const noexcept { return member_.size(); }

    void insert(VertexId v)
    {
        if (!member_[v]) {
            member_[v] = 1;
            ++size_;
        }
    }

    void erase(VertexId v)
    {
        if (member_[v]) {
            member_[v] = 0;
            --size_;
        }
    }

    bool is_subset_of(const VertexSet& other) const
    {
        for (std::size_t v = 0; v < member_.size(); ++v) {
            if (member_[v] && !other.member_[v]) return false;
        }
        return true;
    }

    std::vector<VertexId> elements() const
    {
        std::vector<VertexId> out;
        out.reserve(size_);
        for (std::size_t v = 0; v < member_.size(); ++v) {
            if (member_[v]) out.push_back(static_cast<VertexId>(v));
        }
        return out;
    }

    friend bool operator==(const VertexSet& a, const VertexSet& b) { return a.member_ == b.member_; }

private:
    std::vector<std::uint8_t> member_;
    std::size_t size_ = 0;
};

} // namespace kasi
