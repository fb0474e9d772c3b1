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
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "kasi/core.hpp"
#include "kasi/random.hpp"
#include "kasi/solver.hpp"

namespace kasi {

enum class Family { Sprand, Torus, Layered, Collect, Supply, Taxi, Uniform };

inline const char* to_string(Family f) noexcept
{
    switch (f) {
    case Family::Sprand: return "sprand";
    case Family::Torus: return "torus";
    case Family::Layered: return "layered";
    case Family::Collect: return "collect";
    case Family::Supply: return "supply";
    case Family::Taxi: return "taxi";
    case Family::Uniform: return "uniform";
    }
    return "?";
}

inline std::optional<Family> family_from_string(const std::string& s)
{
    for (Family f : {Family::Sprand, Family::Torus, Family::Layered, Family::Collect, Family::Supply, Family::Taxi,
                     Family::Uniform}) {
        if (s == to_string(f)) return f;
    }
    return std::nullopt;
}

/**
 * Parameters of every generator family. Fields not used by a family are
 * ignored. Generation is a pure function of the spec.
 */
struct GenSpec
{
    Family family = Family::Sprand;
    std::uint64_t seed = 1;

    // sprand, uniform
    std::size_t n = 64;
    std::size_t edge_factor = 5;
    std::size_t max_out_degree = 3;

    // torus, layered (rows = layers, cols = width), collect grid
    std::size_t rows = 8;
    std::size_t cols = 8;
    std::size_t added_cycles = 0;
    /// 0 means cols.
    std::size_t cycle_length = 0;

    // synthetic weights: uniform in [weight_lo, weight_hi], then minus shift
    Weight weight_lo = 1;
    Weight weight_hi = 10000;
    Weight shift = 0;

    // collect
    std::size_t items = 2;
    std::size_t docks = 1;
    std::size_t obstacles_per_mille = 0;
    Weight move_weight = -1;
    Weight idle_weight = -1;
    Weight recharge_weight = 5;

    // supply, taxi
    std::size_t locations = 4;
    Weight max_request = 2;
    Weight refill = 3;
    Weight hop_weight = 0;
    Weight fare_per_hop = 3;
    Weight drive_weight = -1;
};

namespace detail {

inline void require(bool ok, const std::string& what)
{
    if (!ok) throw InvalidSpec(what);
}

inline std::vector<Owner> random_owners(std::size_t n, std::uint64_t seed)
{
    Rng rng(seed, Rng::Stream::Owners);
    std::vector<Owner> owners(n);
    for (auto& o : owners) o = rng.coin() ? Owner::Max : Owner::Min;
    return owners;
}

// draw weights in edge order from the weight stream
inline void assign_weights(std::vector<Edge>& edges, const GenSpec& spec)
{
    Rng rng(spec.seed, Rng::Stream::Weights);
    for (Edge& e : edges) e.weight = rng.uniform(spec.weight_lo, spec.weight_hi) - spec.shift;
}

inline void check_weight_range(const GenSpec& spec)
{
    require(spec.weight_lo <= spec.weight_hi, "weight range is empty");
}

inline std::vector<VertexId> random_permutation(std::size_t n, Rng& rng)
{
    std::vector<VertexId> p(n);
    std::iota(p.begin(), p.end(), VertexId{0});
    for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
    return p;
}

// `count` cycles through `length` distinct random vertices each
inline void add_random_cycles(std::vector<Edge>& edges, std::size_t n, std::size_t count, std::size_t length,
                              Rng& rng)
{
    for (std::size_t c = 0; c < count; ++c) {
        std::vector<VertexId> p(n);
        std::iota(p.begin(), p.end(), VertexId{0});
        for (std::size_t i = 0; i < length; ++i) std::swap(p[i], p[i + rng.below(n - i)]);
        for (std::size_t i = 0; i < length; ++i) edges.push_back({p[i], p[(i + 1) % length], 0});
    }
}

} // namespace detail

/// Random Hamiltonian cycle plus (edge_factor - 1) * n uniform random edges.
inline GameGraph gen_sprand(const GenSpec& spec)
{
    detail::require(spec.n >= 1, "sprand needs n >= 1");
    detail::require(spec.edge_factor >= 1, "sprand needs edge_factor >= 1");
    detail::check_weight_range(spec);
    Rng rng(spec.seed, Rng::Stream::Structure);
    const auto perm = detail::random_permutation(spec.n, rng);
    std::vector<Edge> edges;
    edges.reserve(spec.n * spec.edge_factor);
    for (std::size_t i = 0; i < spec.n; ++i) edges.push_back({perm[i], perm[(i + 1) % spec.n], 0});
    for (std::size_t i = spec.n; i < spec.n * spec.edge_factor; ++i) {
        const auto s = static_cast<VertexId>(rng.below(spec.n));
        const auto t = static_cast<VertexId>(rng.below(spec.n));
        edges.push_back({s, t, 0});
    }
    detail::assign_weights(edges, spec);
    return make_game(detail::random_owners(spec.n, spec.seed), std::move(edges));
}

/// rows x cols grid with wrap-around (right and down neighbours), plus optional random cycles.
inline GameGraph gen_torus(const GenSpec& spec)
{
    detail::require(spec.rows >= 2 && spec.cols >= 2, "torus needs rows, cols >= 2");
    detail::check_weight_range(spec);
    const std::size_t n = spec.rows * spec.cols;
    const std::size_t length = spec.cycle_length == 0 ? spec.cols : spec.cycle_length;
    detail::require(spec.added_cycles == 0 || (length >= 2 && length <= n), "cycle_length must be in 2..rows*cols");
    std::vector<Edge> edges;
    edges.reserve(2 * n + spec.added_cycles * length);
    for (std::size_t r = 0; r < spec.rows; ++r) {
        for (std::size_t c = 0; c < spec.cols; ++c) {
            const auto v = static_cast<VertexId>(r * spec.cols + c);
            edges.push_back({v, static_cast<VertexId>(r * spec.cols + (c + 1) % spec.cols), 0});
            edges.push_back({v, static_cast<VertexId>(((r + 1) % spec.rows) * spec.cols + c), 0});
        }
    }
    Rng rng(spec.seed, Rng::Stream::Structure);
    detail::add_random_cycles(edges, n, spec.added_cycles, length, rng);
    detail::assign_weights(edges, spec);
    return make_game(detail::random_owners(n, spec.seed), std::move(edges));
}

/**
 * Layered network wrapped on a torus: rows layers of cols vertices. Vertex
 * (l, j) has edges to (l+1, j), (l+1, j+1) and (l, j+1), all indices modulo
 * the dimensions. An approximation of the usual layered network family.
 */
inline GameGraph gen_layered(const GenSpec& spec)
{
    detail::require(spec.rows >= 2 && spec.cols >= 2, "layered needs rows, cols >= 2");
    detail::check_weight_range(spec);
    const std::size_t n = spec.rows * spec.cols;
    const auto id = [&](std::size_t l, std::size_t j) {
        return static_cast<VertexId>((l % spec.rows) * spec.cols + j % spec.cols);
    };
    const std::size_t length = spec.cycle_length == 0 ? spec.cols : spec.cycle_length;
    detail::require(spec.added_cycles == 0 || (length >= 2 && length <= n), "cycle_length must be in 2..rows*cols");
    std::vector<Edge> edges;
    edges.reserve(3 * n);
    for (std::size_t l = 0; l < spec.rows; ++l) {
        for (std::size_t j = 0; j < spec.cols; ++j) {
            edges.push_back({id(l, j), id(l + 1, j), 0});
            edges.push_back({id(l, j), id(l + 1, j + 1), 0});
            edges.push_back({id(l, j), id(l, j + 1), 0});
        }
    }
    Rng rng(spec.seed, Rng::Stream::Structure);
    detail::add_random_cycles(edges, n, spec.added_cycles, length, rng);
    detail::assign_weights(edges, spec);
    return make_game(detail::random_owners(n, spec.seed), std::move(edges));
}

/// n vertices, each with 1..max_out_degree random successors; small test instances.
inline GameGraph gen_uniform(const GenSpec& spec)
{
    detail::require(spec.n >= 1, "uniform needs n >= 1");
    detail::require(spec.max_out_degree >= 1, "uniform needs max_out_degree >= 1");
    detail::check_weight_range(spec);
    Rng rng(spec.seed, Rng::Stream::Structure);
    std::vector<Edge> edges;
    for (std::size_t v = 0; v < spec.n; ++v) {
        const std::size_t deg = 1 + rng.below(spec.max_out_degree);
        for (std::size_t i = 0; i < deg; ++i) {
            edges.push_back({static_cast<VertexId>(v), static_cast<VertexId>(rng.below(spec.n)), 0});
        }
    }
    detail::assign_weights(edges, spec);
    return make_game(detail::random_owners(spec.n, spec.seed), std::move(edges));
}

namespace detail {

// Builds vertices on demand from a key and remembers their ids.
template <typename Key>
class StateIndex
{
public:
    VertexId get(const Key& key, Owner owner)
    {
        const auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
        const auto pos = static_cast<std::size_t>(it - keys_.begin());
        if (it != keys_.end() && *it == key) return ids_[pos];
        keys_.insert(it, key);
        const auto id = static_cast<VertexId>(owners_.size());
        ids_.insert(ids_.begin() + static_cast<std::ptrdiff_t>(pos), id);
        owners_.push_back(owner);
        return id;
    }
    std::vector<Owner> take_owners() { return std::move(owners_); }

private:
    std::vector<Key> keys_;
    std::vector<VertexId> ids_;
    std::vector<Owner> owners_;
};

/*
 * collect: a robot on a grid with obstacles and docking cells. Robot states
 * (cell, active item) belong to Max: move to a free neighbour (move_weight),
 * or idle in place (idle_weight, recharge_weight on a dock). Reaching the
 * active item hands control to Min, who picks the next active item
 * (weight 0). Energy is not part of the state.
 */
inline GameGraph gen_collect(const GenSpec& spec)
{
    require(spec.rows >= 1 && spec.cols >= 1, "collect needs a nonempty grid");
    require(spec.items >= 1, "collect needs at least one item");
    require(spec.obstacles_per_mille < 1000, "obstacles_per_mille must be below 1000");
    const std::size_t cells = spec.rows * spec.cols;
    Rng rng(spec.seed, Rng::Stream::Layout);
    std::vector<std::uint8_t> blocked(cells, 0);
    for (auto& b : blocked) b = rng.below(1000) < spec.obstacles_per_mille;
    // docks and items go to distinct random cells, which are cleared
    require(spec.docks + spec.items <= cells, "grid too small for docks and items");
    const auto order = random_permutation(cells, rng);
    std::vector<std::uint8_t> dock(cells, 0);
    std::vector<std::size_t> item_cell(spec.items);
    for (std::size_t i = 0; i < spec.docks; ++i) dock[order[i]] = 1;
    for (std::size_t i = 0; i < spec.items; ++i) item_cell[i] = order[spec.docks + i];
    for (std::size_t i = 0; i < spec.docks + spec.items; ++i) blocked[order[i]] = 0;

    StateIndex<std::array<std::size_t, 3>> index;
    const auto robot = [&](std::size_t cell, std::size_t item) { return index.get({0, cell, item}, Owner::Max); };
    const auto scheduler = [&](std::size_t item) { return index.get({1, item, 0}, Owner::Min); };

    std::vector<Edge> edges;
    for (std::size_t cell = 0; cell < cells; ++cell) {
        if (blocked[cell]) continue;
        const std::size_t r = cell / spec.cols, c = cell % spec.cols;
        for (std::size_t item = 0; item < spec.items; ++item) {
            const VertexId from = robot(cell, item);
            edges.push_back({from, from, dock[cell] ? spec.recharge_weight : spec.idle_weight});
            const std::array<std::pair<long, long>, 4> steps{{{-1, 0}, {1, 0}, {0, -1}, {0, 1}}};
            for (auto [dr, dc] : steps) {
                const long nr = static_cast<long>(r) + dr, nc = static_cast<long>(c) + dc;
                if (nr < 0 || nc < 0 || nr >= static_cast<long>(spec.rows) || nc >= static_cast<long>(spec.cols))
                    continue;
                const auto next = static_cast<std::size_t>(nr) * spec.cols + static_cast<std::size_t>(nc);
                if (blocked[next]) continue;
                const VertexId to = next == item_cell[item] ? scheduler(item) : robot(next, item);
                edges.push_back({from, to, spec.move_weight});
            }
        }
    }
    for (std::size_t item = 0; item < spec.items; ++item) {
        const VertexId from = scheduler(item);
        for (std::size_t j = 0; j < spec.items; ++j) {
            if (j != item || spec.items == 1) edges.push_back({from, robot(item_cell[item], j), 0});
        }
    }
    return make_game(index.take_owners(), std::move(edges));
}

/*
 * supply: a truck on a ring of locations, location 0 is the depot. Min
 * issues a request (destination, amount 1..max_request); Max drives around
 * the ring (hop_weight per hop). The first pass through the depot during a
 * request loads `refill`; arriving at the destination unloads the amount.
 */
inline GameGraph gen_supply(const GenSpec& spec)
{
    require(spec.locations >= 3, "supply needs at least 3 locations");
    require(spec.max_request >= 1, "supply needs max_request >= 1");
    const std::size_t L = spec.locations;
    StateIndex<std::array<std::size_t, 5>> index;
    const auto request = [&](std::size_t loc) { return index.get({0, loc, 0, 0, 0}, Owner::Min); };
    const auto route = [&](std::size_t loc, std::size_t dest, Weight amount, std::size_t loaded) {
        return index.get({1, loc, dest, static_cast<std::size_t>(amount), loaded}, Owner::Max);
    };
    std::vector<Edge> edges;
    request(0);
    for (std::size_t loc = 0; loc < L; ++loc) {
        for (std::size_t dest = 1; dest < L; ++dest) {
            if (dest == loc) continue;
            for (Weight a = 1; a <= spec.max_request; ++a) {
                edges.push_back({request(loc), route(loc, dest, a, 0), 0});
                for (std::size_t loaded = 0; loaded < 2; ++loaded) {
                    const VertexId from = route(loc, dest, a, loaded);
                    for (std::size_t next : {(loc + 1) % L, (loc + L - 1) % L}) {
                        const bool load = next == 0 && loaded == 0;
                        const Weight w = spec.hop_weight + (load ? spec.refill : 0);
                        if (next == dest) {
                            edges.push_back({from, request(dest), w - a});
                        } else {
                            edges.push_back({from, route(next, dest, a, load ? 1 : loaded), w});
                        }
                    }
                }
            }
        }
    }
    return make_game(index.take_owners(), std::move(edges));
}

/*
 * taxi: a cab on a ring. Min calls it for a ride (pickup, destination); Max
 * drives (drive_weight per hop) to the pickup and on to the destination,
 * where it is paid fare_per_hop times the ring distance of the ride.
 */
inline GameGraph gen_taxi(const GenSpec& spec)
{
    require(spec.locations >= 2, "taxi needs at least 2 locations");
    const std::size_t L = spec.locations;
    const auto dist = [&](std::size_t a, std::size_t b) {
        const std::size_t d = a > b ? a - b : b - a;
        return static_cast<Weight>(std::min(d, L - d));
    };
    StateIndex<std::array<std::size_t, 5>> index;
    const auto call = [&](std::size_t loc) { return index.get({0, loc, 0, 0, 0}, Owner::Min); };
    const auto drive = [&](std::size_t loc, std::size_t p, std::size_t q, std::size_t carrying) {
        return index.get({1, loc, p, q, carrying}, Owner::Max);
    };
    std::vector<Edge> edges;
    call(0);
    for (std::size_t loc = 0; loc < L; ++loc) {
        for (std::size_t p = 0; p < L; ++p) {
            for (std::size_t q = 0; q < L; ++q) {
                if (p == q) continue;
                edges.push_back({call(loc), drive(loc, p, q, loc == p ? 1 : 0), 0});
                for (std::size_t carrying = 0; carrying < 2; ++carrying) {
                    const VertexId from = drive(loc, p, q, carrying);
                    for (std::size_t next : {(loc + 1) % L, (loc + L - 1) % L}) {
                        if (carrying && next == q) {
                            edges.push_back({from, call(q), spec.drive_weight + spec.fare_per_hop * dist(p, q)});
                        } else {
                            edges.push_back({from, drive(next, p, q, carrying || next == p ? 1 : 0),
                                             spec.drive_weight});
                        }
                    }
                }
            }
        }
    }
    return make_game(index.take_owners(), std::move(edges));
}

} // namespace detail

/// collect, supply or taxi, depending on spec.family.
inline GameGraph gen_model(const GenSpec& spec)
{
    switch (spec.family) {
    case Family::Collect: return detail::gen_collect(spec);
    case Family::Supply: return detail::gen_supply(spec);
    case Family::Taxi: return detail::gen_taxi(spec);
    default: throw InvalidSpec(std::string("not a model family: ") + to_string(spec.family));
    }
}

inline GameGraph generate(const GenSpec& spec)
{
    switch (spec.family) {
    case Family::Sprand: return gen_sprand(spec);
    case Family::Torus: return gen_torus(spec);
    case Family::Layered: return gen_layered(spec);
    case Family::Uniform: return gen_uniform(spec);
    default: return gen_model(spec);
    }
}

/**
 * Smallest shift in [lo, hi] at which at least `min_negative_fraction` of the
 * vertices have a negative mean-payoff value, by binary search (lowering all
 * weights never raises a value). Returns nothing if even `hi` falls short.
 */
inline std::optional<Weight> find_shift(GenSpec spec, double min_negative_fraction, Weight lo, Weight hi)
{
    const auto enough = [&](Weight shift) {
        spec.shift = shift;
        const GameGraph g = generate(spec);
        SolverOptions quiet;
        quiet.check_conditions = false;
        const auto signs = winning_sign(g, quiet);
        return static_cast<double>(signs.negative.size()) >=
               min_negative_fraction * static_cast<double>(g.vertex_count());
    };
    if (!enough(hi)) return std::nullopt;
    while (lo < hi) {
        const Weight mid = lo + (hi - lo) / 2;
        if (enough(mid)) hi = mid;
        else lo = mid + 1;
    }
    return lo;
}

} // namespace kasi
