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
#include <charconv>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "kasi/core.hpp"
#include "kasi/solver.hpp"

namespace kasi::io {

// Line-oriented text formats. See docs/file-formats.md for the grammar.

namespace detail {

inline std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

template <typename T>
T number(std::string_view token, std::size_t line, const char* what)
{
    T value{};
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw ParseError(line, std::string("bad ") + what + " '" + std::string(token) + "'");
    }
    return value;
}

// Calls fn(line_no, tokens) on every non-blank, non-comment line.
template <typename Fn>
void for_each_record(std::string_view text, Fn&& fn)
{
    std::size_t line_no = 0, pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        ++line_no;
        const auto tokens = split(text.substr(pos, end - pos));
        if (!tokens.empty() && tokens[0] != "c") fn(line_no, tokens);
        if (end == text.size()) break;
        pos = end + 1;
    }
}

inline void expect_arity(const std::vector<std::string_view>& t, std::size_t n, std::size_t line)
{
    if (t.size() != n) {
        throw ParseError(line, "'" + std::string(t[0]) + "' line needs " + std::to_string(n - 1) + " fields");
    }
}

} // namespace detail

/**
 * Parse a game:
 *   c <comment>
 *   p mpg <n> <m>
 *   o <v> <MAX|MIN>      n lines, one per vertex
 *   e <u> <v> <w>        m lines
 * The graph is validated after parsing; structural problems are thrown as
 * StructuralError.
 */
inline GameGraph parse_game(std::string_view text)
{
    std::optional<std::size_t> n, m;
    std::vector<Owner> owners;
    std::vector<std::uint8_t> has_owner;
    std::vector<Edge> edges;
    std::size_t last_line = 0;

    detail::for_each_record(text, [&](std::size_t line, const std::vector<std::string_view>& t) {
        last_line = line;
        if (t[0] == "p") {
            if (n) throw ParseError(line, "duplicate header");
            detail::expect_arity(t, 4, line);
            if (t[1] != "mpg") throw ParseError(line, "expected 'p mpg <n> <m>'");
            n = detail::number<std::size_t>(t[2], line, "vertex count");
            m = detail::number<std::size_t>(t[3], line, "edge count");
            if (*n >= kNoVertex || *m >= kNoEdge) throw ParseError(line, "graph too large");
            owners.assign(*n, Owner::Max);
            has_owner.assign(*n, 0);
            edges.reserve(*m);
            return;
        }
        if (!n) throw ParseError(line, "record before the 'p mpg' header");
        if (t[0] == "o") {
            detail::expect_arity(t, 3, line);
            const auto v = detail::number<std::size_t>(t[1], line, "vertex id");
            if (v >= *n) throw ParseError(line, "vertex id " + std::to_string(v) + " out of range");
            if (has_owner[v]) throw ParseError(line, "duplicate owner for vertex " + std::to_string(v));
            if (t[2] == "MAX") owners[v] = Owner::Max;
            else if (t[2] == "MIN") owners[v] = Owner::Min;
            else throw ParseError(line, "owner must be MAX or MIN");
            has_owner[v] = 1;
        } else if (t[0] == "e") {
            detail::expect_arity(t, 4, line);
            const auto u = detail::number<std::size_t>(t[1], line, "vertex id");
            const auto v = detail::number<std::size_t>(t[2], line, "vertex id");
            const auto w = detail::number<Weight>(t[3], line, "weight");
            if (u >= *n || v >= *n) throw ParseError(line, "edge endpoint out of range");
            if (edges.size() == *m) throw ParseError(line, "more edges than the header declares");
            edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), w});
        } else {
            throw ParseError(line, "unknown record '" + std::string(t[0]) + "'");
        }
    });

    if (!n) throw ParseError(last_line + 1, "missing 'p mpg' header");
    for (std::size_t v = 0; v < *n; ++v) {
        if (!has_owner[v]) throw ParseError(last_line + 1, "missing owner line for vertex " + std::to_string(v));
    }
    if (edges.size() != *m) {
        throw ParseError(last_line + 1, "header declares " + std::to_string(*m) + " edges, found " +
                                            std::to_string(edges.size()));
    }
    return make_game(std::move(owners), std::move(edges));
}

/// Render a game; edges are sorted by source, then target, then weight.
inline std::string render_game(const GameGraph& g)
{
    std::vector<Edge> edges = g.edges();
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.source, a.target, a.weight) < std::tie(b.source, b.target, b.weight);
    });
    std::ostringstream out;
    out << "p mpg " << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (VertexId v = 0; v < g.vertex_count(); ++v) out << "o " << v << ' ' << to_string(g.owner(v)) << '\n';
    for (const Edge& e : edges) out << "e " << e.source << ' ' << e.target << ' ' << e.weight << '\n';
    return out.str();
}

/// `v <id> <value|inf>` per vertex.
inline std::string render_result(const EnergyVector& values)
{
    std::ostringstream out;
    for (VertexId v = 0; v < values.size(); ++v) {
        out << "v " << v << ' ';
        if (values[v].is_finite()) out << values[v].value();
        else out << "inf";
        out << '\n';
    }
    return out.str();
}

inline std::string render_result(const SolveResult& r) { return render_result(r.lwub); }

inline EnergyVector parse_result(std::string_view text)
{
    std::vector<std::optional<Energy>> values;
    detail::for_each_record(text, [&](std::size_t line, const std::vector<std::string_view>& t) {
        if (t[0] != "v") throw ParseError(line, "expected a 'v' line");
        detail::expect_arity(t, 3, line);
        const auto v = detail::number<std::size_t>(t[1], line, "vertex id");
        if (v >= kNoVertex) throw ParseError(line, "vertex id out of range");
        if (v >= values.size()) values.resize(v + 1);
        if (values[v]) throw ParseError(line, "duplicate value for vertex " + std::to_string(v));
        values[v] = t[2] == "inf" ? Energy::infinity() : Energy(detail::number<Weight>(t[2], line, "value"));
        if (values[v]->is_finite() && values[v]->value() < 0) throw ParseError(line, "negative energy");
    });
    EnergyVector out;
    for (std::size_t v = 0; v < values.size(); ++v) {
        if (!values[v]) throw ParseError(0, "no value for vertex " + std::to_string(v));
        out.push_back(*values[v]);
    }
    return out;
}

/// `s <id> <target>` for each vertex the strategy is defined on.
inline std::string render_strategy(const PositionalStrategy& s)
{
    std::ostringstream out;
    for (VertexId v = 0; v < s.choice.size(); ++v) {
        if (s.choice[v] != kNoVertex) out << "s " << v << ' ' << s.choice[v] << '\n';
    }
    return out.str();
}

/// Parse `s` lines into a strategy of `player` over `vertex_count` vertices.
inline PositionalStrategy parse_strategy(std::string_view text, Owner player, std::size_t vertex_count)
{
    PositionalStrategy s{player, std::vector<VertexId>(vertex_count, kNoVertex)};
    detail::for_each_record(text, [&](std::size_t line, const std::vector<std::string_view>& t) {
        if (t[0] != "s") throw ParseError(line, "expected an 's' line");
        detail::expect_arity(t, 3, line);
        const auto v = detail::number<std::size_t>(t[1], line, "vertex id");
        const auto u = detail::number<std::size_t>(t[2], line, "vertex id");
        if (v >= vertex_count || u >= vertex_count) throw ParseError(line, "vertex id out of range");
        s.choice[v] = static_cast<VertexId>(u);
    });
    return s;
}

/**
 * Min witness: for each strategy in order a `k <index>` line followed by its
 * `s` lines, then `x <id> <index>` for every vertex that died.
 */
inline std::string render_witness(const MinWitness& w)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < w.strategies.size(); ++i) {
        out << "k " << i << '\n' << render_strategy(w.strategies[i]);
    }
    for (VertexId v = 0; v < w.death_index.size(); ++v) {
        if (w.death_index[v] != kAlive) out << "x " << v << ' ' << w.death_index[v] << '\n';
    }
    return out.str();
}

inline MinWitness parse_witness(std::string_view text, std::size_t vertex_count)
{
    MinWitness w;
    w.death_index.assign(vertex_count, kAlive);
    detail::for_each_record(text, [&](std::size_t line, const std::vector<std::string_view>& t) {
        if (t[0] == "k") {
            detail::expect_arity(t, 2, line);
            if (detail::number<std::size_t>(t[1], line, "index") != w.strategies.size()) {
                throw ParseError(line, "strategy blocks must be numbered 0, 1, ...");
            }
            w.strategies.push_back({Owner::Min, std::vector<VertexId>(vertex_count, kNoVertex)});
        } else if (t[0] == "s") {
            if (w.strategies.empty()) throw ParseError(line, "'s' line before the first 'k' line");
            detail::expect_arity(t, 3, line);
            const auto v = detail::number<std::size_t>(t[1], line, "vertex id");
            const auto u = detail::number<std::size_t>(t[2], line, "vertex id");
            if (v >= vertex_count || u >= vertex_count) throw ParseError(line, "vertex id out of range");
            w.strategies.back().choice[v] = static_cast<VertexId>(u);
        } else if (t[0] == "x") {
            detail::expect_arity(t, 3, line);
            const auto v = detail::number<std::size_t>(t[1], line, "vertex id");
            if (v >= vertex_count) throw ParseError(line, "vertex id out of range");
            w.death_index[v] = detail::number<std::size_t>(t[2], line, "index");
        } else {
            throw ParseError(line, "unknown record '" + std::string(t[0]) + "'");
        }
    });
    return w;
}

struct BenchRow
{
    std::string instance;
    std::size_t n = 0;
    std::size_t m = 0;
    std::string problem;
    Weight bound = 0;
    std::string algorithm;
    /// Median wall-clock seconds; empty when the run hit its time limit.
    std::optional<double> seconds;
    std::size_t iterations = 0;
};

inline constexpr std::string_view kBenchHeader = "instance,n,m,problem,bound,algorithm,seconds,iterations";

inline std::string render_bench_row(const BenchRow& r)
{
    char secs[32] = "n/a";
    if (r.seconds) std::snprintf(secs, sizeof secs, "%.6f", *r.seconds);
    std::ostringstream out;
    out << r.instance << ',' << r.n << ',' << r.m << ',' << r.problem << ',' << r.bound << ',' << r.algorithm << ','
        << secs << ',' << r.iterations;
    return out.str();
}

} // namespace kasi::io
