// SPDX-License-Identifier: Apache-2.0
//
// kronbeam - Kronecker-factor analog beamforming and two-stage channel
// estimation for large uniform linear arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

#include "types.hpp"

namespace kronbeam
{

namespace detail
{
// SplitMix64 finalizer; used to spread seeds for independent child streams.
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}
} // namespace detail

// Deterministic random stream with hierarchical sub-stream derivation.
//
// The same (seed, derivation path) always produces the same draw sequence,
// independent of platform and of how many draws sibling streams consumed.
// Gaussian variates come from an explicit Box-Muller transform rather than
// std::normal_distribution, whose output sequence is implementation-defined.
class RngStream
{
  public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), eng_(detail::splitmix64(seed)) {}

    std::uint64_t seed() const { return seed_; }

    // Child stream addressed by up to two indices (e.g. sweep cell, trial).
    // Derivation uses only the parent seed, never the draw position.
    RngStream derive(std::uint64_t a, std::uint64_t b = 0) const
    {
        std::uint64_t s = seed_;
        s = detail::splitmix64(s ^ (0xA0761D6478BD642FULL + a));
        s = detail::splitmix64(s ^ (0xE7037ED1A0B428DBULL + b));
        return RngStream(s);
    }

    // Uniform on [0, 1) with 53 random mantissa bits.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Uniform angle on [0, 2*pi).
    PhaseAngle uniform_angle() { return PhaseAngle(two_pi * uniform01()); }

    // Uniform over {-1, +1}.
    double rademacher() { return (eng_() & 1ULL) ? 1.0 : -1.0; }

    // Pair of independent standard normals (Box-Muller).
    void gaussian_pair(double& g0, double& g1)
    {
        double u1 = 1.0 - uniform01(); // (0, 1]; keeps log() finite
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        g0 = r * std::cos(two_pi * u2);
        g1 = r * std::sin(two_pi * u2);
    }

    // Circularly symmetric complex normal with E|x|^2 = var.
    cplx complex_normal(double var = 1.0)
    {
        double g0, g1;
        gaussian_pair(g0, g1);
        double s = std::sqrt(0.5 * var);
        return {s * g0, s * g1};
    }

  private:
    std::uint64_t seed_;
    std::mt19937_64 eng_;
};

} // namespace kronbeam
