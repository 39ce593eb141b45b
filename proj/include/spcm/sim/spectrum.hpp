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

#include <cstddef>
#include <span>
#include <vector>

namespace spcm::sim {

/// One-sided amplitude spectrum of a real signal (rectangular window).
/// amplitude[k] is the sinusoid amplitude at frequency[k] = k * fs / N, so a
/// tone a*sin(2 pi f t) on an exact bin reads a.
struct AmplitudeSpectrum {
  std::vector<double> frequency;  // Hz
  std::vector<double> amplitude;

  double resolution() const noexcept {
    return frequency.size() > 1 ? frequency[1] - frequency[0] : 0.0;
  }
  /// Index of the largest amplitude in [f_lo, f_hi].
  std::size_t peak_bin(double f_lo = 0.0, double f_hi = 1e300) const;
  std::size_t nearest_bin(double f) const;
};

AmplitudeSpectrum amplitude_spectrum(std::span<const double> signal, double sample_rate_hz);

}  // namespace spcm::sim
