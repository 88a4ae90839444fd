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

#pragma once

#include <optional>
#include <random>

#include "hufsense/model.hpp"

namespace hufsense {

enum class NoiseKind { None, Uniform, Gaussian };

/// Additive, independent per-measurement noise.
///   Uniform:  eta = N * (U(0,1) - 0.5)
///   Gaussian: eta ~ N(0, sigma^2)
struct NoiseSpec {
  NoiseKind kind = NoiseKind::None;
  double amplitude = 0.0;
  double sigma = 0.0;

  static NoiseSpec none() { return {}; }
  static NoiseSpec uniform(double amplitude);
  static NoiseSpec gaussian(double sigma);

  bool is_none() const noexcept { return kind == NoiseKind::None; }
  double sample(std::mt19937_64& rng) const;
};

/// E|eta|: N/4 for uniform noise, 2 sigma / sqrt(2 pi) for Gaussian noise.
double mean_absolute_noise(const NoiseSpec& noise);

/// Default branch threshold. Gaussian noise uses E|eta|; bounded uniform noise
/// uses its bound N/2, so that an all-zero group never reads as active.
double threshold_for(const NoiseSpec& noise);

/// Probability that thresholding one noisy measurement disagrees with the clean
/// one, X ~ N(0, sigma_signal^2), eta ~ N(0, sigma_noise^2), T = E|eta|:
///   p = erf(a) + erf(b) - erf(a) erf(b),  a = sn/(sqrt(pi) sx), b = sn/(sqrt(pi) sy)
/// with sy^2 = sx^2 + sn^2.
double predict_single_error(double sigma_noise, double sigma_signal);

/// 1 - (1 - p)^(s (log2 n + 1))
double predict_recovery_error(double p_single, int s, Index n);

/// s (log2 n + 1) * 4t/pi
double linearized_recovery_error(double t, int s, Index n);

struct ErrorPrediction {
  double t = 0.0;
  double p_single = 0.0;
  double p_recovery = 0.0;
  double p_recovery_linearized = 0.0;
};

ErrorPrediction predict_errors(double sigma_noise, double sigma_signal, int s, Index n);

}  // namespace hufsense
