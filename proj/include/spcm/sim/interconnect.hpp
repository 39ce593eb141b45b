/*
 * Copyright (c) 2026 The SPCM Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <span>
#include <string>
#include <vector>

#include "spcm/sim/state_space.hpp"

namespace spcm::sim {

/// Wire from a block output to a block input, both by label.
struct Connection {
  std::string from_output;
  std::string to_input;
};

/// Interconnect labeled blocks. Port labels must be unique across all
/// blocks. An input may be fed by several outputs (summed) and/or be listed
/// as external; inputs with no source are held at zero. The result keeps
/// every block state, in block order.
///
/// Throws LabelError on unresolved or ambiguous labels and
/// AlgebraicLoopError when a cycle of connections passes only through
/// nonzero direct-feedthrough paths.
StateSpace lti_connect(std::span<const StateSpace> blocks, std::span<const Connection> connections,
                       const Labels& external_inputs, const Labels& external_outputs);

}  // namespace spcm::sim
