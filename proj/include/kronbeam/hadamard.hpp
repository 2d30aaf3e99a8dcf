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

#include <vector>

#include "types.hpp"

namespace kronbeam
{
namespace detail
{

inline bool is_prime(int q)
{
    if (q < 2)
        return false;
    for (int d = 2; d * d <= q; ++d)
        if (q % d == 0)
            return false;
    return true;
}

// Quadratic character on GF(q), q an odd prime: 0 at 0, +1 on squares,
// -1 otherwise.
inline std::vector<int> quadratic_character(int q)
{
    std::vector<int> chi(q, -1);
    chi[0] = 0;
    for (int x = 1; x < q; ++x)
        chi[static_cast<int>((static_cast<long long>(x) * x) % q)] = 1;
    return chi;
}

// Paley construction I: order q + 1 for prime q = 3 (mod 4). H = A + I with
// A skew: first row +1, first column -1, core the Jacobsthal matrix
// chi(i - j).
inline rmat paley_one(int q)
{
    auto chi = quadratic_character(q);
    int n = q + 1;
    rmat h = rmat::Zero(n, n);
    h(0, 0) = 1.0;
    for (int i = 0; i < q; ++i)
    {
        h(0, 1 + i) = 1.0;
        h(1 + i, 0) = -1.0;
    }
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j)
        {
            int d = ((i - j) % q + q) % q;
            h(1 + i, 1 + j) = (i == j) ? 1.0 : static_cast<double>(chi[d]);
        }
    return h;
}

// Paley construction II: order 2(q + 1) for prime q = 1 (mod 4). The
// symmetric conference matrix S (zero diagonal, first row/column +1, core
// chi(i - j)) is expanded entrywise:
//   +1 -> [ 1  1; 1 -1],  -1 -> [-1 -1; -1  1],  0 -> [ 1 -1; -1 -1].
inline rmat paley_two(int q)
{
    auto chi = quadratic_character(q);
    int m = q + 1;
    rmat s = rmat::Zero(m, m);
    for (int i = 0; i < q; ++i)
    {
        s(0, 1 + i) = 1.0;
        s(1 + i, 0) = 1.0;
    }
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j)
            s(1 + i, 1 + j) = static_cast<double>(chi[((i - j) % q + q) % q]);

    rmat h(2 * m, 2 * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
        {
            double v = s(i, j);
            double a, b, c, d;
            if (v > 0.5)
                a = 1, b = 1, c = 1, d = -1;
            else if (v < -0.5)
                a = -1, b = -1, c = -1, d = 1;
            else
                a = 1, b = -1, c = -1, d = -1;
            h(2 * i, 2 * j) = a;
            h(2 * i, 2 * j + 1) = b;
            h(2 * i + 1, 2 * j) = c;
            h(2 * i + 1, 2 * j + 1) = d;
        }
    return h;
}

} // namespace detail

// Hadamard matrix of order z (z = 1, 2, or a multiple of 4 reachable through
// Sylvester doubling and the two Paley constructions; this covers every
// multiple of 4 up to 64 except 52). Rows are mutually orthogonal with
// entries +-1: H H^T = z I.
inline rmat hadamard_matrix(int z)
{
    if (z == 1)
        return rmat::Ones(1, 1);
    if (z == 2)
    {
        rmat h(2, 2);
        h << 1, 1, 1, -1;
        return h;
    }
    if (z < 1 || z % 4 != 0)
        throw std::invalid_argument("hadamard_matrix: order must be 1, 2, or a multiple of 4");

    if (detail::is_prime(z - 1) && (z - 1) % 4 == 3)
        return detail::paley_one(z - 1);
    if (z % 2 == 0 && detail::is_prime(z / 2 - 1) && (z / 2 - 1) % 4 == 1)
        return detail::paley_two(z / 2 - 1);
    if (z % 2 == 0 && (z / 2 == 2 || (z / 2) % 4 == 0))
    {
        // Sylvester doubling on a recursively built half-order matrix.
        rmat half = hadamard_matrix(z / 2);
        int m = z / 2;
        rmat h(z, z);
        h.topLeftCorner(m, m) = half;
        h.topRightCorner(m, m) = half;
        h.bottomLeftCorner(m, m) = half;
        h.bottomRightCorner(m, m) = -half;
        return h;
    }
    throw std::invalid_argument("hadamard_matrix: no construction for order " +
                                std::to_string(z));
}

} // namespace kronbeam
