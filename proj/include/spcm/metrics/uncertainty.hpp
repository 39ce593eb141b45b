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

#include <string>
#include <vector>

namespace spcm::metrics {

enum class SamplingLaw { Uniform, TruncatedNormal };

/// Named scalar knob on a scenario, sampled per Monte Carlo run. For the
/// truncated normal, sigma is (max - min) / 6 about the nominal.
struct UncertainParameter {
  std::string path;
  double nominal = 0.0;
  double min = 0.0;
  double max = 0.0;
  SamplingLaw law = SamplingLaw::Uniform;

  void validate(const std::string& where, std::vector<std::string>& errors) const;
};

}  // namespace spcm::metrics
