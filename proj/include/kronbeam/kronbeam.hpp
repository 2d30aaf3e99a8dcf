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
#include "array_channel.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "digital_design.hpp"
#include "estimation.hpp"
#include "hadamard.hpp"
#include "kron.hpp"
#include "linalg.hpp"
#include "metrics.hpp"
#include "monte_carlo.hpp"
#include "rng.hpp"
#include "types.hpp"
