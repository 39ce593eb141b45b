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

#include "spcm/sim/frequency_response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "spcm/error.hpp"

namespace spcm::sim {

std::vector<FrequencySample> freq_response(const StateSpace& sys, std::span<const double> omega) {
  for (double w : omega) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw ConfigError(fmt::format("frequency grid point {} is not finite and positive", w));
    }
  }
  using cd = std::complex<double>;
  const auto n = static_cast<Eigen::Index>(sys.num_states());
  const Eigen::MatrixXcd a = sys.a().cast<cd>();
  const Eigen::MatrixXcd b = sys.b().cast<cd>();
  const Eigen::MatrixXcd c = sys.c().cast<cd>();
  const Eigen::MatrixXcd d = sys.d().cast<cd>();

  std::vector<FrequencySample> out;
  out.reserve(omega.size());
  for (double w : omega) {
    FrequencySample s;
    s.omega = w;
    if (n == 0) {
      s.response = d;
    } else {
      Eigen::MatrixXcd m = -a;
      m.diagonal().array() += cd(0.0, w);
      Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
      const double rcond = lu.rcond();
      if (!(rcond > 1e-14)) {
        s.singular = true;
        s.response = Eigen::MatrixXcd::Constant(d.rows(), d.cols(),
                                                cd(std::numeric_limits<double>::quiet_NaN(), 0.0));
        s.singular_values = Eigen::VectorXd::Constant(std::min(d.rows(), d.cols()),
                                                      std::numeric_limits<double>::infinity());
        out.push_back(std::move(s));
        continue;
      }
      s.response = c * lu.solve(b) + d;
    }
    if (s.response.size() > 0) {
      s.singular_values = Eigen::JacobiSVD<Eigen::MatrixXcd>(s.response).singularValues();
    }
    out.push_back(std::move(s));
  }
  return out;
}

FrequencyEvaluator::FrequencyEvaluator(const StateSpace& sys) : d_(sys.d()) {
  if (sys.num_states() == 0) return;
  Eigen::HessenbergDecomposition<Eigen::MatrixXd> hd(sys.a());
  h_ = hd.matrixH();
  const Eigen::MatrixXd q = hd.matrixQ();
  qtb_ = q.transpose() * sys.b();
  cq_ = sys.c() * q;
}

Eigen::MatrixXcd FrequencyEvaluator::operator()(std::complex<double> s) const {
  using cd = std::complex<double>;
  Eigen::MatrixXcd g = d_.cast<cd>();
  const Eigen::Index n = h_.rows();
  if (n == 0) return g;
  // (sI - H) x = Q^T B, Gaussian elimination on the single subdiagonal.
  Eigen::MatrixXcd m = -h_.cast<cd>();
  m.diagonal().array() += s;
  Eigen::MatrixXcd x = qtb_.cast<cd>();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (std::abs(m(k + 1, k)) > std::abs(m(k, k))) {
      m.row(k).tail(n - k).swap(m.row(k + 1).tail(n - k));
      x.row(k).swap(x.row(k + 1));
    }
    if (m(k + 1, k) == cd(0.0)) continue;
    const cd f = m(k + 1, k) / m(k, k);
    m.row(k + 1).tail(n - k - 1) -= f * m.row(k).tail(n - k - 1);
    m(k + 1, k) = 0.0;
    x.row(k + 1) -= f * x.row(k);
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!(std::abs(m(k, k)) > 1e-14 * scale)) {
      return Eigen::MatrixXcd::Constant(g.rows(), g.cols(), cd(std::numeric_limits<double>::quiet_NaN(), 0.0));
    }
  }
  m.triangularView<Eigen::Upper>().solveInPlace(x);
  g += cq_.cast<cd>() * x;
  return g;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

}  // namespace spcm::sim
