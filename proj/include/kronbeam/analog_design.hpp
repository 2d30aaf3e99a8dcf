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
#include <limits>
#include <vector>

#include "array_channel.hpp"
#include "kron.hpp"

namespace kronbeam
{

// Analog (phase-shifter) beamformer in both composed and factor form, one
// column per served user. Every entry has unit modulus by construction.
struct AnalogBeamformer
{
    std::vector<cvec> columns;                 // per-user length-N weight vectors
    std::vector<std::vector<cvec>> factorForm; // per-user Kronecker factors
    std::vector<bool> enhancementDegenerate;   // per-user: merged channel vanished

    cmat matrix() const
    {
        if (columns.empty())
            throw std::logic_error("AnalogBeamformer: no columns");
        cmat f(columns.front().size(), static_cast<Eigen::Index>(columns.size()));
        for (std::size_t k = 0; k < columns.size(); ++k)
            f.col(static_cast<Eigen::Index>(k)) = columns[k];
        return f;
    }
};

// Unit-modulus factor orthogonal to `targetFactor` (itself unit-modulus):
// entry i is targetFactor[i] * e^{j 2 pi (rowIndex-1) i / n}. The inner
// product against the target telescopes to a full sum of n-th roots of unity,
// which vanishes for any rowIndex in 2..n. rowIndex picks which orthogonal
// modulation row is used; for n = 2 the modulation is the Hadamard row
// [1, -1].
inline cvec nulling_factor(const cvec& targetFactor, int rowIndex = 2)
{
    const int n = static_cast<int>(targetFactor.size());
    if (n < 2)
        throw std::invalid_argument("nulling_factor: factor length must be >= 2");
    if (rowIndex < 2 || rowIndex > n)
        throw std::invalid_argument("nulling_factor: rowIndex must be in 2..n");

    cvec f(n);
    for (int i = 0; i < n; ++i)
        f[i] = targetFactor[i] * std::polar(1.0, two_pi * (rowIndex - 1) * i / n);
    return f;
}

namespace detail
{
// Data channel as seen through the fixed leading factors: each path's gain is
// scaled by those factors' responses, and the remaining factors collapse into
// one virtual steering vector per path (their strides telescope). The l1 norm
// of the result is exactly the combined magnitude a phase-aligned enhancement
// factor extracts from it.
inline cvec merged_channel(const std::vector<PathComponent>& dataPaths,
                           const std::vector<cvec>& fixedFactors, const FactorShape& shape)
{
    const std::size_t fixed = fixedFactors.size();
    const int mergedStride = shape.stride(fixed);
    const int mergedLen = shape.total() / mergedStride;

    cvec merged = cvec::Zero(mergedLen);
    for (const PathComponent& p : dataPaths)
    {
        cplx gain = p.gain;
        for (std::size_t m = 0; m < fixed; ++m)
        {
            cvec u = geometric_phases(shape.stride(m) * p.angle.value(), shape.lengths[m]);
            gain *= fixedFactors[m].dot(u); // response of fixed factor m to path
        }
        merged += gain * geometric_phases(mergedStride * p.angle.value(), mergedLen);
    }
    return merged;
}
} // namespace detail

// Factor that coherently combines the data paths over the sub-array not
// consumed by nulling. The first `fixedFactors.size()` factors of `shape` are
// already fixed; each path's effective gain is its physical gain multiplied
// by the fixed factors' responses to that path. The remaining factors merge
// into a single virtual steering vector per path (their strides telescope),
// and the combining factor is the entrywise phase of the gain-weighted sum.
//
// Returns the merged-factor weights (length N / prod(fixed lengths)) and sets
// `degenerate` when the merged channel is identically zero (every path
// annihilated by the fixed factors); the weights then fall back to all-ones.
inline cvec enhancement_factor(const std::vector<PathComponent>& dataPaths,
                               const std::vector<cvec>& fixedFactors, const FactorShape& shape,
                               bool* degenerate = nullptr)
{
    if (dataPaths.empty())
        throw std::invalid_argument("enhancement_factor: at least one data path required");
    if (fixedFactors.size() > shape.count())
        throw InsufficientFactors("enhancement_factor: more fixed factors than shape provides");

    cvec merged = detail::merged_channel(dataPaths, fixedFactors, shape);

    bool dead = merged.norm() == 0.0;
    if (degenerate)
        *degenerate = dead;

    const Eigen::Index mergedLen = merged.size();
    cvec f(mergedLen);
    for (Eigen::Index i = 0; i < mergedLen; ++i)
        f[i] = (dead || merged[i] == cplx(0.0, 0.0)) ? cplx(1.0, 0.0)
                                                     : std::polar(1.0, std::arg(merged[i]));
    return f;
}

namespace detail
{
// Null direction m consumes factor m (smallest lengths first, keeping the
// largest sub-array for coherent combining); remaining factors are free.
inline std::vector<cvec> nulling_factors(const std::vector<PhaseAngle>& nullAngles,
                                         const FactorShape& shape, int rowIndex)
{
    if (nullAngles.size() > shape.count())
        throw InsufficientFactors("factor budget: " + std::to_string(nullAngles.size()) +
                                  " null directions but only " + std::to_string(shape.count()) +
                                  " Kronecker factors");
    std::vector<cvec> fixed;
    fixed.reserve(nullAngles.size());
    for (std::size_t m = 0; m < nullAngles.size(); ++m)
    {
        cvec target =
            geometric_phases(shape.stride(m) * nullAngles[m].value(), shape.lengths[m]);
        int row = std::min(rowIndex, shape.lengths[m]);
        fixed.push_back(nulling_factor(target, row));
    }
    return fixed;
}
} // namespace detail

// Single-user analog beamformer: nulls every interferer of the scenario via
// one Kronecker factor each, then spends the remaining factors on coherently
// combining the user's data paths. Never materializes an N x N object; all
// work is on factors plus one O(N) composition.
//
// `searchAssignment` additionally tries every assignment of null direction to
// factor position (the nulled positions are still the leading ones) and keeps
// the one whose surviving data channel is largest; each assignment nulls the
// same directions, so the choice only affects how much signal the enhancement
// factor has left to combine. The exhaustive search covers at most 2..5 null
// directions (its cost is factorial); beyond that the canonical order is
// kept.
inline std::pair<cvec, std::vector<cvec>>
kron_analog_beamformer(const Scenario& sc, int userIndex, const FactorShape& shape,
                       int rowIndex = 2, bool* degenerate = nullptr,
                       bool searchAssignment = false)
{
    if (shape.total() != sc.config.antennas)
        throw std::invalid_argument("kron_analog_beamformer: shape does not factor the array size");
    if (userIndex < 0 || userIndex >= sc.config.users)
        throw std::invalid_argument("kron_analog_beamformer: user index out of range");
    if (sc.degenerate)
        throw DegenerateScenario(
            "kron_analog_beamformer: an interference angle coincides with a data-path angle");

    std::vector<PhaseAngle> nulls;
    nulls.reserve(sc.interfPaths.size());
    for (const PathComponent& p : sc.interfPaths)
        nulls.push_back(p.angle);
    if (nulls.size() > shape.count())
        throw InsufficientFactors("kron_analog_beamformer: " + std::to_string(nulls.size()) +
                                  " interferers exceed the " + std::to_string(shape.count()) +
                                  "-factor budget of N = " + std::to_string(shape.total()));

    std::vector<cvec> factors = detail::nulling_factors(nulls, shape, rowIndex);
    if (searchAssignment && nulls.size() >= 2 && nulls.size() <= 5)
    {
        std::vector<std::size_t> order(nulls.size());
        for (std::size_t i = 0; i < order.size(); ++i)
            order[i] = i;

        double best = -1.0;
        std::vector<PhaseAngle> permuted(nulls.size());
        do
        {
            for (std::size_t i = 0; i < order.size(); ++i)
                permuted[i] = nulls[order[i]];
            std::vector<cvec> candidate = detail::nulling_factors(permuted, shape, rowIndex);
            double value =
                detail::merged_channel(sc.dataPaths[userIndex], candidate, shape).lpNorm<1>();
            // strict improvement keeps the first (canonical) order on ties
            if (value > best)
            {
                best = value;
                factors = std::move(candidate);
            }
        } while (std::next_permutation(order.begin(), order.end()));
    }
    factors.push_back(enhancement_factor(sc.dataPaths[userIndex], factors, shape, degenerate));
    return {kron_compose(factors), factors};
}

// One analog column per user, each nulling every interference direction. With
// `searchAssignment` every column picks its own best direction-to-factor
// assignment; otherwise all columns share the canonical nulling factors.
inline AnalogBeamformer multiuser_analog(const Scenario& sc, const FactorShape& shape,
                                         int rowIndex = 2, bool searchAssignment = false)
{
    AnalogBeamformer out;
    out.columns.reserve(sc.config.users);
    for (int k = 0; k < sc.config.users; ++k)
    {
        bool dead = false;
        auto [col, factors] =
            kron_analog_beamformer(sc, k, shape, rowIndex, &dead, searchAssignment);
        out.columns.push_back(std::move(col));
        out.factorForm.push_back(std::move(factors));
        out.enhancementDegenerate.push_back(dead);
    }
    return out;
}

// Zero-forcing beam: steers to `targetAngle` while placing an exact null on
// every angle of `nullAngles`. Null m consumes factor m; every remaining
// factor is phase-aligned to the target so its response is maximal.
struct ZfBeamformer
{
    cvec column;
    std::vector<cvec> factors;
    cplx targetResponse; // column^H v(target)
};

inline ZfBeamformer kron_zf_beamformer(PhaseAngle targetAngle,
                                       const std::vector<PhaseAngle>& nullAngles,
                                       const FactorShape& shape, int rowIndex = 2)
{
    for (const PhaseAngle& t : nullAngles)
        if (circular_distance(t, targetAngle) == 0.0)
            throw TargetInNullSet("kron_zf_beamformer: target angle is among the null angles");
    if (nullAngles.size() > shape.count())
        throw InsufficientFactors("kron_zf_beamformer: " + std::to_string(nullAngles.size()) +
                                  " null directions but only " + std::to_string(shape.count()) +
                                  " Kronecker factors");

    std::vector<cvec> factors = detail::nulling_factors(nullAngles, shape, rowIndex);
    for (std::size_t m = factors.size(); m < shape.count(); ++m)
        factors.push_back(
            geometric_phases(shape.stride(m) * targetAngle.value(), shape.lengths[m]));

    ZfBeamformer zf;
    zf.factors = std::move(factors);
    zf.column = kron_compose(zf.factors);
    zf.targetResponse =
        mixed_product_inner(zf.factors, steering_factors(targetAngle, shape));
    return zf;
}

// Indices of the interferers whose received power |gain|^2 reaches
// `powerThreshold`, strongest first, truncated to `maxCount`. Used to spend
// the limited factor budget on the dominant interferers only.
inline std::vector<int> adaptive_allocation(const std::vector<PathComponent>& interfPaths,
                                            double powerThreshold,
                                            int maxCount = std::numeric_limits<int>::max())
{
    if (maxCount < 0)
        throw std::invalid_argument("adaptive_allocation: maxCount must be >= 0");

    std::vector<int> idx;
    for (int n = 0; n < static_cast<int>(interfPaths.size()); ++n)
        if (std::norm(interfPaths[n].gain) >= powerThreshold)
            idx.push_back(n);
    std::sort(idx.begin(), idx.end(), [&interfPaths](int a, int b) {
        double pa = std::norm(interfPaths[a].gain), pb = std::norm(interfPaths[b].gain);
        return pa != pb ? pa > pb : a < b;
    });
    if (static_cast<int>(idx.size()) > maxCount)
        idx.resize(maxCount);
    return idx;
}

} // namespace kronbeam
