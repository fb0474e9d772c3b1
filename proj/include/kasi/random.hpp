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
#include <limits>
#include <random>

namespace kasi {

/**
 * Seeded generator for instance generation. The engine is std::mt19937_64,
 * whose output sequence is fixed by the standard; bounded draws use our own
 * rejection sampling because std distributions differ across libraries.
 * Each generation phase gets its own stream so that changing one phase
 * (say, the number of extra edges) does not shift the draws of another.
 */
class Rng
{
public:
    enum class Stream : std::uint64_t { Structure = 1, Weights = 2, Owners = 3, Layout = 4 };

    Rng(std::uint64_t seed, Stream stream)
        : engine_(mix(seed ^ mix(static_cast<std::uint64_t>(stream) * 0x9e3779b97f4a7c15ULL)))
    {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound)
    {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    /// Uniform in [lo, hi].
    std::int64_t uniform(std::int64_t lo, std::int64_t hi)
    {
        const auto span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(engine_());
        return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + below(span));
    }

    bool coin() { return (engine_() >> 63) != 0; }

    /// splitmix64 finaliser
    static constexpr std::uint64_t mix(std::uint64_t z)
    {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 engine_;
};

} // namespace kasi
