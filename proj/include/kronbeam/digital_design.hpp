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

#include "analog_design.hpp"
#include "linalg.hpp"

namespace kronbeam
{

// Analog front end plus digital stage; the end-to-end per-user combiner is
// column k of `combined()`.
struct HybridBeamformer
{
    cmat analog;  // N x K, unit-modulus entries
    cmat digital; // K x K

    cmat combined() const { return analog * digital; }
};

// Channel seen by the digital stage after the analog front end: F_RF^H G.
inline cmat effective_channel(const cmat& analog, const Scenario& sc)
{
    if (analog.rows() != sc.config.antennas)
        throw std::invalid_argument("effective_channel: analog row count must equal antennas");
    return analog.adjoint() * data_channel_matrix(sc);
}

// MMSE digital stage for a given analog front end:
//   F_BB = (Gt D Gt^H + N0 F_RF^H F_RF)^{-1} Gt,   Gt = F_RF^H G.
// Per column this maximizes the post-combining SINR of its user within the
// in-cell signal model (colored noise F_RF^H F_RF); residual inter-cell
// leakage is the analog stage's job.
inline HybridBeamformer mmse_digital(const cmat& analog, const Scenario& sc)
{
    const int k = sc.config.users;
    if (analog.cols() != k)
        throw std::invalid_argument("mmse_digital: one analog column per user required");

    cmat gt = effective_channel(analog, sc);
    cmat a = sc.config.noiseVar * (analog.adjoint() * analog);
    for (int u = 0; u < k; ++u)
        a += sc.config.user_power(u) * gt.col(u) * gt.col(u).adjoint();

    HybridBeamformer out;
    out.analog = analog;
    // K x K system; partial-pivot LU tolerates the rank-deficient signal part
    // that an exact-nulling front end can produce.
    out.digital = a.partialPivLu().solve(gt);
    return out;
}

inline HybridBeamformer mmse_digital(const AnalogBeamformer& analog, const Scenario& sc)
{
    return mmse_digital(analog.matrix(), sc);
}

// Unconstrained MMSE combiner over all N antennas, aware of the interference
// covariance: F = (G D G^H + H D' H^H + N0 I)^{-1} G. Benchmark only — its
// N^3 solve is exactly what the hybrid architecture avoids.
inline cmat fully_digital_mmse(const Scenario& sc)
{
    const int n = sc.config.antennas;
    cmat g = data_channel_matrix(sc);
    cmat a = cmat::Zero(n, n);
    for (int u = 0; u < sc.config.users; ++u)
        a += sc.config.user_power(u) * g.col(u) * g.col(u).adjoint();
    for (int m = 0; m < sc.config.interferers; ++m)
    {
        cvec h = synthesize_interference_channel(sc.interfPaths[m].gain, sc.interfPaths[m].angle,
                                                 n);
        a += sc.config.interferer_power(m) * h * h.adjoint();
    }
    a += sc.config.noiseVar * cmat::Identity(n, n);
    return hermitian_solve(a, g);
}

// Phase-only combiner aligned with a channel vector; zero entries map to
// weight 1 (phase of zero taken as zero).
inline cvec equal_gain_beamformer(const cvec& g)
{
    cvec f(g.size());
    for (Eigen::Index i = 0; i < g.size(); ++i)
        f[i] = g[i] == cplx(0.0, 0.0) ? cplx(1.0, 0.0) : std::polar(1.0, std::arg(g[i]));
    return f;
}

// Phase-shifter approximation of an unconstrained combiner column: keep the
// phases, drop the magnitudes.
inline cvec analog_mmse_projection(const cvec& digitalVector)
{
    return equal_gain_beamformer(digitalVector);
}

} // namespace kronbeam
