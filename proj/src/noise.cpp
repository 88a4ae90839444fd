// Copyright 2026 The hufsense Authors
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

#include "hufsense/noise.hpp"

#include <cmath>
#include <numbers>

namespace hufsense {

NoiseSpec NoiseSpec::uniform(double amplitude) {
  if (!(amplitude >= 0.0)) throw DomainError("noise amplitude must be nonnegative");
  if (amplitude == 0.0) return none();
  return {NoiseKind::Uniform, amplitude, 0.0};
}

NoiseSpec NoiseSpec::gaussian(double sigma) {
  if (!(sigma >= 0.0)) throw DomainError("noise sigma must be nonnegative");
  if (sigma == 0.0) return none();
  return {NoiseKind::Gaussian, 0.0, sigma};
}

double NoiseSpec::sample(std::mt19937_64& rng) const {
  switch (kind) {
    case NoiseKind::Uniform: {
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      return amplitude * (unit(rng) - 0.5);
    }
    case NoiseKind::Gaussian: {
      std::normal_distribution<double> normal(0.0, sigma);
      return normal(rng);
    }
    case NoiseKind::None:
      break;
  }
  return 0.0;
}

double mean_absolute_noise(const NoiseSpec& noise) {
  switch (noise.kind) {
    case NoiseKind::Uniform:
      return noise.amplitude / 4.0;
    case NoiseKind::Gaussian:
      return 2.0 * noise.sigma / std::sqrt(2.0 * std::numbers::pi);
    case NoiseKind::None:
      break;
  }
  return 0.0;
}

double threshold_for(const NoiseSpec& noise) {
  switch (noise.kind) {
    case NoiseKind::Uniform:
      // E|eta| = N/4 sits in the middle of the noise range, so a zero-sum
      // measurement would pass the test half the time. Use the bound instead.
      return noise.amplitude / 2.0;
    case NoiseKind::Gaussian:
      return 2.0 * noise.sigma / std::sqrt(2.0 * std::numbers::pi);
    case NoiseKind::None:
      break;
  }
  return 0.0;
}

double predict_single_error(double sigma_noise, double sigma_signal) {
  if (!(sigma_signal > 0.0)) throw DomainError("signal standard deviation must be positive");
  if (!(sigma_noise >= 0.0)) throw DomainError("noise standard deviation must be nonnegative");
  const double sigma_y = std::hypot(sigma_signal, sigma_noise);
  const double root_pi = std::sqrt(std::numbers::pi);
  const double a = std::erf(sigma_noise / (root_pi * sigma_signal));
  const double b = std::erf(sigma_noise / (root_pi * sigma_y));
  return a + b - a * b;
}

double predict_recovery_error(double p_single, int s, Index n) {
  if (!(p_single >= 0.0 && p_single <= 1.0)) throw DomainError("probability must lie in [0, 1]");
  if (s < 0 || n < 1) throw DomainError("sparsity must be nonnegative and dimension positive");
  const double exponent = s * (std::log2(static_cast<double>(n)) + 1.0);
  if (exponent == 0.0) return 0.0;
  // log1p keeps small p accurate; p = 1 gives log1p(-1) = -inf and the result 1.
  return -std::expm1(exponent * std::log1p(-p_single));
}

double linearized_recovery_error(double t, int s, Index n) {
  return s * (std::log2(static_cast<double>(n)) + 1.0) * 4.0 * t / std::numbers::pi;
}

ErrorPrediction predict_errors(double sigma_noise, double sigma_signal, int s, Index n) {
  ErrorPrediction out;
  out.p_single = predict_single_error(sigma_noise, sigma_signal);
  out.t = sigma_noise / sigma_signal;
  out.p_recovery = predict_recovery_error(out.p_single, s, n);
  out.p_recovery_linearized = linearized_recovery_error(out.t, s, n);
  return out;
}

}  // namespace hufsense
