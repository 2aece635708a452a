/*
 * Copyright 2026 The fogplace Authors
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

#ifndef FOGPLACE_RANDOM_HPP
#define FOGPLACE_RANDOM_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace fogplace {

/// splitmix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept
{
    return mix_seed(mix_seed(base) ^ (stream * 0xd1342543de82ef95ULL + 1));
}

/// Seeded random stream.
///
/// Draws are produced from raw mt19937_64 output rather than the standard
/// distributions, whose algorithms differ between standard libraries, so
/// that every emitted result is reproducible across toolchains.
class rng_stream
{
public:
    rng_stream() : engine_(5489u) {}
    explicit rng_stream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform01() noexcept
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi]; returns lo when the range is degenerate.
    double uniform(double lo, double hi) noexcept
    {
        return lo + (hi - lo) * uniform01();
    }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi)
    {
        if (hi < lo)
        {
            throw std::invalid_argument("uniform_int: empty range");
        }
        auto const span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0)
        {
            return static_cast<std::int64_t>(engine_());
        }
        auto const limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span);
        std::uint64_t x;
        do
        {
            x = engine_();
        }
        while (x >= limit);
        return lo + static_cast<std::int64_t>(x % span);
    }

    std::size_t index(std::size_t n)
    {
        if (n == 0)
        {
            throw std::invalid_argument("index: empty range");
        }
        return static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(n) - 1));
    }

    bool bernoulli(double p) noexcept { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

} // namespace fogplace

#endif // FOGPLACE_RANDOM_HPP
