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


#include "spcm/metrics/uncertainty.hpp"

#include <cmath>

namespace spcm::metrics {

void UncertainParameter::validate(const std::string& where, std::vector<std::string>& errors) const {
  if (path.empty()) errors.push_back(where + ".path: must not be empty");
  if (!std::isfinite(nominal) || !std::isfinite(min) || !std::isfinite(max))
    errors.push_back(where + ": bounds must be finite");
  else if (!(min < max))
    errors.push_back(where + ": min must be below max");
  else if (nominal < min || nominal > max)
    errors.push_back(where + ": nominal must lie within [min, max]");
}

}  // namespace spcm::metrics
