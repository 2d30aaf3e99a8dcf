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

#include <sstream>
#include <vector>

#include "kron.hpp"
#include "rng.hpp"
#include "types.hpp"

namespace kronbeam
{

// Steering vector of an n-element uniform linear array for inter-antenna
// phase difference `phi`: [1, e^{j phi}, ..., e^{j (n-1) phi}].
inline cvec steering_vector(PhaseAngle phi, int n)
{
    if (n < 2)
        throw std::invalid_argument("steering_vector: array size must be >= 2");
    return geometric_phases(phi.value(), n);
}

// Magnitude of the normalized correlation of two steering directions,
//   |v(phi)^H v(omega)| / n = |sin(n d / 2) / (n sin(d / 2))|,  d = omega - phi.
// Result is in [0, 1]; equals 1 iff the directions coincide. Evaluated in
// closed form, with a series fallback where the denominator degenerates.
inline double normalized_inner_product(double phi, double omega, int n)
{
    if (n < 2)
        throw std::invalid_argument("normalized_inner_product: array size must be >= 2");
    double half = 0.5 * (canonical_angle(omega) - canonical_angle(phi));
    double den = std::sin(half);
    if (std::fabs(den) < 1e-9)
    {
        // Degenerate at half = 0 and at the wrap half = +-pi; both mean the
        // directions coincide. With e the offset from the nearest zero of
        // sin, the ratio expands as 1 - (n^2 - 1) e^2 / 6.
        double e = std::min(std::fabs(half), two_pi / 2.0 - std::fabs(half));
        return 1.0 - (static_cast<double>(n) * n - 1.0) * e * e / 6.0;
    }
    double r = std::fabs(std::sin(n * half) / (n * den));
    return r > 1.0 ? 1.0 : r;
}

inline double normalized_inner_product(PhaseAngle phi, PhaseAngle omega, int n)
{
    return normalized_inner_product(phi.value(), omega.value(), n);
}

// One propagation path: complex gain and phase-difference angle.
struct PathComponent
{
    cplx gain{0.0, 0.0};
    PhaseAngle angle;
};

// Static dimensions and powers of one uplink cell with co-channel
// interference from neighboring cells.
struct SystemConfig
{
    int antennas = 128;     // receive array size N
    int users = 4;          // in-cell users K
    int interferers = 2;    // out-of-cell single-path interferers M
    int pathsPerUser = 2;   // propagation paths per in-cell user L
    int pilotLength = 16;   // training symbols per frame Z

    std::vector<double> userPower;       // per-user symbol power; empty = all 1
    std::vector<double> interfererPower; // per-interferer symbol power; empty = all 1
    std::vector<double> pathVar;         // per-user path-gain variance; empty = all 1
    double noiseVar = 1.0;               // receiver noise variance per antenna

    double user_power(int k) const { return userPower.empty() ? 1.0 : userPower.at(k); }
    double interferer_power(int n) const
    {
        return interfererPower.empty() ? 1.0 : interfererPower.at(n);
    }
    double path_var(int k) const { return pathVar.empty() ? 1.0 : pathVar.at(k); }

    // Collect every violated constraint; empty result means valid.
    std::vector<std::string> violations() const
    {
        std::vector<std::string> out;
        auto fail = [&out](const std::string& msg) { out.push_back(msg); };
        if (antennas < 2)
            fail("antennas must be >= 2");
        if (users < 1)
            fail("users must be >= 1");
        if (interferers < 0)
            fail("interferers must be >= 0");
        if (pathsPerUser < 1)
            fail("pathsPerUser must be >= 1");
        if (pilotLength < 1)
            fail("pilotLength must be >= 1");
        if (users > pilotLength)
            fail("users must not exceed pilotLength (orthogonal pilots)");
        if (!userPower.empty() && static_cast<int>(userPower.size()) != users)
            fail("userPower size must equal users");
        if (!interfererPower.empty() && static_cast<int>(interfererPower.size()) != interferers)
            fail("interfererPower size must equal interferers");
        if (!pathVar.empty() && static_cast<int>(pathVar.size()) != users)
            fail("pathVar size must equal users");
        for (double p : userPower)
            if (!(p > 0.0))
                fail("userPower entries must be positive");
        for (double p : interfererPower)
            if (!(p > 0.0))
                fail("interfererPower entries must be positive");
        for (double p : pathVar)
            if (!(p > 0.0))
                fail("pathVar entries must be positive");
        if (!(noiseVar > 0.0))
            fail("noiseVar must be positive");
        return out;
    }

    void validate() const
    {
        auto bad = violations();
        if (bad.empty())
            return;
        std::ostringstream oss;
        oss << "invalid configuration: ";
        for (std::size_t i = 0; i < bad.size(); ++i)
            oss << (i ? "; " : "") << bad[i];
        throw ConfigError(oss.str());
    }
};

// One random channel realization: gains and angles for all in-cell paths and
// all interferers. `degenerate` marks an exact angle collision between an
// interferer and a data path (probability zero for continuous draws, but
// detected so constructions can refuse to null a data direction).
struct Scenario
{
    SystemConfig config;
    std::vector<std::vector<PathComponent>> dataPaths; // [user][path]
    std::vector<PathComponent> interfPaths;            // [interferer]
    bool degenerate = false;
};

// Channel vector of a multi-path user: g = sum_l a_l v(Phi_l).
inline cvec synthesize_data_channel(const std::vector<PathComponent>& paths, int n)
{
    if (paths.empty())
        throw std::invalid_argument("synthesize_data_channel: at least one path required");
    cvec g = cvec::Zero(n);
    for (const PathComponent& p : paths)
        g += p.gain * steering_vector(p.angle, n);
    return g;
}

// Channel vector of a single-path interferer: h = beta v(Theta).
inline cvec synthesize_interference_channel(cplx gain, PhaseAngle angle, int n)
{
    return gain * steering_vector(angle, n);
}

// Stack user channels into the N x K matrix G.
inline cmat data_channel_matrix(const Scenario& sc)
{
    cmat g(sc.config.antennas, sc.config.users);
    for (int k = 0; k < sc.config.users; ++k)
        g.col(k) = synthesize_data_channel(sc.dataPaths[k], sc.config.antennas);
    return g;
}

// Stack interferer channels into the N x M matrix H (N x 0 when M = 0).
inline cmat interference_channel_matrix(const Scenario& sc)
{
    cmat h(sc.config.antennas, sc.config.interferers);
    for (int n = 0; n < sc.config.interferers; ++n)
        h.col(n) = synthesize_interference_channel(sc.interfPaths[n].gain,
                                                   sc.interfPaths[n].angle, sc.config.antennas);
    return h;
}

// Draw one random realization: path gains are circularly symmetric complex
// normal (variance pathVar for data paths, 1 for interferer gains) and all
// angles are uniform on [0, 2*pi). The stream is taken by value, so calling
// twice with the same stream object yields the identical scenario.
inline Scenario draw_scenario(const SystemConfig& config, RngStream stream)
{
    config.validate();

    Scenario sc;
    sc.config = config;
    sc.dataPaths.resize(config.users);
    for (int k = 0; k < config.users; ++k)
    {
        sc.dataPaths[k].resize(config.pathsPerUser);
        for (int l = 0; l < config.pathsPerUser; ++l)
        {
            sc.dataPaths[k][l].angle = stream.uniform_angle();
            sc.dataPaths[k][l].gain = stream.complex_normal(config.path_var(k));
        }
    }
    sc.interfPaths.resize(config.interferers);
    for (int n = 0; n < config.interferers; ++n)
    {
        sc.interfPaths[n].angle = stream.uniform_angle();
        sc.interfPaths[n].gain = stream.complex_normal(1.0);
    }

    for (const PathComponent& ip : sc.interfPaths)
        for (const auto& user : sc.dataPaths)
            for (const PathComponent& dp : user)
                if (ip.angle.value() == dp.angle.value())
                    sc.degenerate = true;
    return sc;
}

// Single received vector y = G x + H s + noise for one symbol interval.
// `x` carries the K user symbols (power included), `s` the M interferer
// symbols, `noise` the N-element receiver noise.
inline cvec received_signal(const Scenario& sc, const cvec& x, const cvec& s, const cvec& noise)
{
    const int n = sc.config.antennas;
    if (x.size() != sc.config.users)
        throw std::invalid_argument("received_signal: symbol vector size must equal users");
    if (s.size() != sc.config.interferers)
        throw std::invalid_argument("received_signal: interferer symbol size must equal interferers");
    if (noise.size() != n)
        throw std::invalid_argument("received_signal: noise size must equal antennas");

    cvec y = noise;
    for (int k = 0; k < sc.config.users; ++k)
        y += synthesize_data_channel(sc.dataPaths[k], n) * x[k];
    for (int m = 0; m < sc.config.interferers; ++m)
        y += synthesize_interference_channel(sc.interfPaths[m].gain, sc.interfPaths[m].angle, n) *
             s[m];
    return y;
}

// Received N x Z training block Y = G P + H Q + noise, where row k of
// `pilots` is user k's Z-symbol training sequence (power included) and row m
// of `interfPilots` is interferer m's co-channel symbol sequence.
inline cmat received_training_matrix(const Scenario& sc, const rmat& pilots,
                                     const rmat& interfPilots, const cmat& noise)
{
    const int n = sc.config.antennas;
    const int z = sc.config.pilotLength;
    if (pilots.rows() != sc.config.users || pilots.cols() != z)
        throw std::invalid_argument("received_training_matrix: pilot block must be users x pilotLength");
    if (interfPilots.rows() != sc.config.interferers || interfPilots.cols() != z)
        throw std::invalid_argument(
            "received_training_matrix: interferer block must be interferers x pilotLength");
    if (noise.rows() != n || noise.cols() != z)
        throw std::invalid_argument("received_training_matrix: noise block must be antennas x pilotLength");

    cmat y = noise;
    for (int k = 0; k < sc.config.users; ++k)
        y += synthesize_data_channel(sc.dataPaths[k], n) * pilots.row(k).cast<cplx>();
    for (int m = 0; m < sc.config.interferers; ++m)
        y += synthesize_interference_channel(sc.interfPaths[m].gain, sc.interfPaths[m].angle, n) *
             interfPilots.row(m).cast<cplx>();
    return y;
}

} // namespace kronbeam
