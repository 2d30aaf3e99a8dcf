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

#include "types.hpp"

namespace kronbeam
{

// Multiplicative factorization of the array size into factor lengths >= 2,
// kept sorted ascending. The product of the lengths is the array size.
struct FactorShape
{
    std::vector<int> lengths;

    FactorShape() = default;

    explicit FactorShape(std::vector<int> parts) : lengths(std::move(parts))
    {
        if (lengths.empty())
            throw std::invalid_argument("FactorShape: at least one factor required");
        for (int n : lengths)
            if (n < 2)
                throw std::invalid_argument("FactorShape: every factor length must be >= 2");
        std::sort(lengths.begin(), lengths.end());
    }

    std::size_t count() const { return lengths.size(); }

    int total() const
    {
        long long p = 1;
        for (int n : lengths)
            p *= n;
        return static_cast<int>(p);
    }

    // Index stride of factor m: the product of the lengths of factors 0..m-1.
    int stride(std::size_t m) const
    {
        long long s = 1;
        for (std::size_t i = 0; i < m; ++i)
            s *= lengths[i];
        return static_cast<int>(s);
    }
};

// Prime factorization of n >= 2 with multiplicity, ascending. This is the
// finest factor shape and therefore the default: it maximizes the number of
// independently tunable Kronecker factors.
inline FactorShape prime_factorization(int n)
{
    if (n < 2)
        throw std::invalid_argument("prime_factorization: argument must be >= 2");

    std::vector<int> parts;
    int rem = n;
    for (int p = 2; static_cast<long long>(p) * p <= rem; ++p)
        while (rem % p == 0)
        {
            parts.push_back(p);
            rem /= p;
        }
    if (rem > 1)
        parts.push_back(rem);
    return FactorShape(parts);
}

// Kronecker product in which the FIRST operand varies fastest:
//   out[q * len(a) + p] = a[p] * b[q].
// This matches the index decomposition i = i_0 + i_1 * n_0 + ... used for
// steering-vector factorizations, and is the reverse of the textbook
// convention out = kron(b, a).
inline cvec left_kron(const cvec& a, const cvec& b)
{
    cvec out(a.size() * b.size());
    Eigen::Index i = 0;
    for (Eigen::Index q = 0; q < b.size(); ++q)
        for (Eigen::Index p = 0; p < a.size(); ++p, ++i)
            out[i] = a[p] * b[q];
    return out;
}

// Fold a factor list into a full-length vector: factors[0] varies fastest.
inline cvec kron_compose(const std::vector<cvec>& factors)
{
    if (factors.empty())
        throw std::invalid_argument("kron_compose: empty factor list");
    cvec out = factors.front();
    for (std::size_t m = 1; m < factors.size(); ++m)
        out = left_kron(out, factors[m]);
    return out;
}

// Unit-magnitude geometric vector [1, e^{j w}, ..., e^{j (n-1) w}].
inline cvec geometric_phases(double w, int n)
{
    if (n < 1)
        throw std::invalid_argument("geometric_phases: length must be >= 1");
    cvec v(n);
    for (int i = 0; i < n; ++i)
        v[i] = std::polar(1.0, canonical_angle(static_cast<double>(i) * w));
    return v;
}

// Factorization of the steering vector for phase difference `phi` over the
// given shape: factor m is a short steering vector at phase stride(m) * phi.
// Composing the factors reproduces the full steering vector exactly.
inline std::vector<cvec> steering_factors(PhaseAngle phi, const FactorShape& shape)
{
    std::vector<cvec> factors;
    factors.reserve(shape.count());
    for (std::size_t m = 0; m < shape.count(); ++m)
        factors.push_back(geometric_phases(shape.stride(m) * phi.value(), shape.lengths[m]));
    return factors;
}

// Inner product <f, v> = f^H v of two vectors given in factor form, using the
// mixed-product rule: the full N-point product collapses to the product of
// per-factor inner products. Cost is O(sum n_m) instead of O(N).
inline cplx mixed_product_inner(const std::vector<cvec>& f, const std::vector<cvec>& v)
{
    if (f.size() != v.size())
        throw std::invalid_argument("mixed_product_inner: factor counts differ");
    cplx acc(1.0, 0.0);
    for (std::size_t m = 0; m < f.size(); ++m)
    {
        if (f[m].size() != v[m].size())
            throw std::invalid_argument("mixed_product_inner: factor lengths differ");
        acc *= f[m].dot(v[m]); // Eigen dot conjugates the left operand
    }
    return acc;
}

} // namespace kronbeam
