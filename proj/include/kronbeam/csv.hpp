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

#include <ostream>

#include "monte_carlo.hpp"

namespace kronbeam
{

// Serialize a table as CSV: one header row, comma separators, LF line ends,
// no quoting (emitted values never contain commas). Output depends only on
// the table contents, so identical runs serialize identically.
inline void write_csv(std::ostream& os, const Table& table)
{
    for (std::size_t i = 0; i < table.header.size(); ++i)
        os << (i ? "," : "") << table.header[i];
    os << "\n";
    for (const auto& row : table.rows)
    {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << row[i];
        os << "\n";
    }
}

} // namespace kronbeam
