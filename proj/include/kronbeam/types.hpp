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

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace kronbeam
{

using cplx = std::complex<double>;
using cvec = Eigen::VectorXcd;
using cmat = Eigen::MatrixXcd;
using rvec = Eigen::VectorXd;
using rmat = Eigen::MatrixXd;

inline constexpr double two_pi = 6.283185307179586476925286766559;

// Reduce any real angle to the canonical interval [0, 2*pi).
inline double canonical_angle(double radians)
{
    double v = std::fmod(radians, two_pi);
    if (v < 0.0)
        v += two_pi;
    if (v >= two_pi) // fmod rounding can land exactly on 2*pi
        v = 0.0;
    return v;
}

// Inter-antenna phase difference in radians, always kept in [0, 2*pi).
// All core math operates on this quantity; the physical angle of arrival
// enters only through `phase_from_physical` below.
struct PhaseAngle
{
    double rad = 0.0;

    PhaseAngle() = default;
    PhaseAngle(double radians) : rad(canonical_angle(radians)) {}

    double value() const { return rad; }
};

// Phase difference produced by a plane wave from physical angle `aoa` hitting
// a linear array with element spacing `spacing` at wavelength `wavelength`.
inline PhaseAngle phase_from_physical(double aoa, double spacing, double wavelength)
{
    if (spacing <= 0.0 || wavelength <= 0.0)
        throw std::invalid_argument("phase_from_physical: spacing and wavelength must be positive");
    return PhaseAngle(two_pi * spacing / wavelength * std::cos(aoa));
}

// Distance between two angles on the circle, in [0, pi].
inline double circular_distance(double a, double b)
{
    double d = std::fabs(canonical_angle(a) - canonical_angle(b));
    return d > two_pi - d ? two_pi - d : d;
}

inline double circular_distance(PhaseAngle a, PhaseAngle b)
{
    return circular_distance(a.rad, b.rad);
}

// A beamformer needs one Kronecker factor per nulled path plus, ideally, one
// for signal enhancement; thrown when the factorization of N cannot cover the
// requested set of nulls.
struct InsufficientFactors : std::runtime_error
{
    explicit InsufficientFactors(const std::string& what) : std::runtime_error(what) {}
};

// An interference angle coincides exactly with a data-path angle, so nulling
// one would annihilate the other.
struct DegenerateScenario : std::runtime_error
{
    explicit DegenerateScenario(const std::string& what) : std::runtime_error(what) {}
};

// The beam-steering target was itself listed among the angles to null.
struct TargetInNullSet : std::runtime_error
{
    explicit TargetInNullSet(const std::string& what) : std::runtime_error(what) {}
};

// Invalid or inconsistent experiment configuration; carries every violated
// constraint in one message.
struct ConfigError : std::runtime_error
{
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace kronbeam
