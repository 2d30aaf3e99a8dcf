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

// Solve A X = B for Hermitian positive-definite A via an unblocked Cholesky
// factorization. The factor is built row by row with contiguous inner loops,
// so the arithmetic cost scales as a clean n^3 across problem sizes — unlike
// blocked/vectorized kernels whose per-element throughput varies severalfold
// with n, which matters when this solve is the object being timed.
inline cmat hermitian_solve(const cmat& a, const cmat& b)
{
    const int n = static_cast<int>(a.rows());
    if (a.cols() != n)
        throw std::invalid_argument("hermitian_solve: matrix must be square");
    if (b.rows() != n)
        throw std::invalid_argument("hermitian_solve: dimension mismatch");

    // Row-major copy of the lower triangle; row i is contiguous.
    std::vector<cplx> l(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j)
            l[static_cast<std::size_t>(i) * n + j] = a(i, j);

    for (int i = 0; i < n; ++i)
    {
        cplx* ri = l.data() + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < i; ++j)
        {
            const cplx* rj = l.data() + static_cast<std::size_t>(j) * n;
            cplx s = ri[j];
            for (int k = 0; k < j; ++k)
                s -= ri[k] * std::conj(rj[k]);
            ri[j] = s / rj[j].real();
        }
        double d = ri[i].real();
        for (int k = 0; k < i; ++k)
            d -= std::norm(ri[k]);
        if (!(d > 0.0))
            throw std::invalid_argument("hermitian_solve: matrix not positive definite");
        ri[i] = std::sqrt(d);
    }

    cmat x = b;
    for (int c = 0; c < x.cols(); ++c)
    {
        cplx* xc = x.col(c).data();
        // Forward: L y = b (contiguous row dots).
        for (int i = 0; i < n; ++i)
        {
            const cplx* ri = l.data() + static_cast<std::size_t>(i) * n;
            cplx s = xc[i];
            for (int k = 0; k < i; ++k)
                s -= ri[k] * xc[k];
            xc[i] = s / ri[i].real();
        }
        // Backward: L^H x = y.
        for (int i = n - 1; i >= 0; --i)
        {
            cplx s = xc[i];
            for (int k = i + 1; k < n; ++k)
                s -= std::conj(l[static_cast<std::size_t>(k) * n + i]) * xc[k];
            xc[i] = s / l[static_cast<std::size_t>(i) * n + i].real();
        }
    }
    return x;
}

} // namespace kronbeam
