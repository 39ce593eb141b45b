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

#include "spcm/sim/spectrum.hpp"

#include <cmath>
#include <complex>

#include <unsupported/Eigen/FFT>

#include "spcm/error.hpp"

namespace spcm::sim {

std::size_t AmplitudeSpectrum::peak_bin(double f_lo, double f_hi) const {
  std::size_t best = 0;
  double best_amp = -1.0;
  for (std::size_t k = 0; k < frequency.size(); ++k) {
    if (frequency[k] < f_lo || frequency[k] > f_hi) continue;
    if (amplitude[k] > best_amp) {
      best_amp = amplitude[k];
      best = k;
    }
  }
  return best;
}

std::size_t AmplitudeSpectrum::nearest_bin(double f) const {
  const double df = resolution();
  if (df <= 0.0) return 0;
  const auto k = static_cast<long long>(std::llround(f / df));
  if (k < 0) return 0;
  return std::min(static_cast<std::size_t>(k), frequency.size() - 1);
}

AmplitudeSpectrum amplitude_spectrum(std::span<const double> signal, double sample_rate_hz) {
  if (signal.size() < 2) throw Error("amplitude spectrum needs at least two samples");
  const std::size_t n = signal.size();
  std::vector<double> in(signal.begin(), signal.end());
  std::vector<std::complex<double>> out;
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  fft.fwd(out, in);

  AmplitudeSpectrum s;
  const std::size_t bins = n / 2 + 1;
  s.frequency.resize(bins);
  s.amplitude.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    s.frequency[k] = static_cast<double>(k) * sample_rate_hz / static_cast<double>(n);
    const bool edge = k == 0 || (n % 2 == 0 && k == n / 2);
    s.amplitude[k] = std::abs(out[k]) * (edge ? 1.0 : 2.0) / static_cast<double>(n);
  }
  return s;
}

}  // namespace spcm::sim
