// Copyright 2026 The dpm4d Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "noise.hpp"

#include <cmath>
#include <numeric>

#include "rng.hpp"

namespace dpm4d {

GradientNoise::GradientNoise(std::uint64_t seed) {
  Rng rng(seed);
  std::iota(perm_.begin(), perm_.end(), 0);
  for (std::size_t i = perm_.size() - 1; i > 0; --i) {
    std::swap(perm_[i], perm_[rng.below(i + 1)]);
  }
  for (auto& g : gradient_) g = rng.uniform(-1.0, 1.0);
}

double GradientNoise::operator()(double x) const {
  const double cell = std::floor(x);
  const double f = x - cell;
  const auto i0 = static_cast<std::uint8_t>(static_cast<std::int64_t>(cell) & 255);
  const auto i1 = static_cast<std::uint8_t>(i0 + 1);
  const double g0 = gradient_[perm_[i0]];
  const double g1 = gradient_[perm_[i1]];
  const double fade = f * f * f * (f * (f * 6.0 - 15.0) + 10.0);
  // Raw 1D Perlin noise with gradients in [-1, 1] stays within [-0.5, 0.5].
  const double raw = (1.0 - fade) * g0 * f + fade * g1 * (f - 1.0);
  return 2.0 * raw;
}

}  // namespace dpm4d
