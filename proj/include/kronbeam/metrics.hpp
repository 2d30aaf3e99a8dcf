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

#include <algorithm>
#include <numeric>
#include <vector>

#include "digital_design.hpp"

namespace kronbeam
{

// Achievable rate of user k for an arbitrary bank of per-user combiners
// (column k of `combiners` serves user k):
//   log2(1 + P_k |w^H g_k|^2 /
//            (sum_{m != k} P_m |w^H g_m|^2 + sum_n P'_n |w^H h_n|^2
//             + N0 ||w||^2)).
inline double user_rate(const cmat& combiners, const Scenario& sc, int k)
{
    if (combiners.rows() != sc.config.antennas || combiners.cols() != sc.config.users)
        throw std::invalid_argument("user_rate: combiner bank must be antennas x users");
    if (k < 0 || k >= sc.config.users)
        throw std::invalid_argument("user_rate: user index out of range");

    const cvec w = combiners.col(k);
    double num = 0.0;
    double den = sc.config.noiseVar * w.squaredNorm();
    for (int m = 0; m < sc.config.users; ++m)
    {
        double p = sc.config.user_power(m) *
                   std::norm(w.dot(synthesize_data_channel(sc.dataPaths[m], sc.config.antennas)));
        if (m == k)
            num = p;
        else
            den += p;
    }
    for (int i = 0; i < sc.config.interferers; ++i)
        den += sc.config.interferer_power(i) *
               std::norm(w.dot(synthesize_interference_channel(
                   sc.interfPaths[i].gain, sc.interfPaths[i].angle, sc.config.antennas)));
    return std::log2(1.0 + num / den);
}

inline double user_rate(const HybridBeamformer& hybrid, const Scenario& sc, int k)
{
    return user_rate(hybrid.combined(), sc, k);
}

inline double sum_rate(const cmat& combiners, const Scenario& sc)
{
    double total = 0.0;
    for (int k = 0; k < sc.config.users; ++k)
        total += user_rate(combiners, sc, k);
    return total;
}

inline double sum_rate(const HybridBeamformer& hybrid, const Scenario& sc)
{
    return sum_rate(hybrid.combined(), sc);
}

// Mean circular angle error under the best one-to-one assignment of
// estimates to true angles. Requires no more estimates than truths; with
// fewer estimates the unmatched truths are simply not scored (detection
// misses are accounted separately by callers).
inline double aoa_error(const std::vector<PhaseAngle>& estimates,
                        const std::vector<PhaseAngle>& truths)
{
    if (estimates.empty())
        return 0.0;
    if (estimates.size() > truths.size())
        throw std::invalid_argument("aoa_error: more estimates than true angles");

    // Instances are tiny (a handful of paths), so enumerate assignments of
    // truths to estimates directly.
    std::vector<int> idx(truths.size());
    std::iota(idx.begin(), idx.end(), 0);
    double best = -1.0;
    std::sort(idx.begin(), idx.end());
    do
    {
        double cost = 0.0;
        for (std::size_t e = 0; e < estimates.size(); ++e)
            cost += circular_distance(estimates[e], truths[idx[e]]);
        if (best < 0.0 || cost < best)
            best = cost;
    } while (std::next_permutation(idx.begin(), idx.end()));

    return best / static_cast<double>(estimates.size());
}

} // namespace kronbeam
