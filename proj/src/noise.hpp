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

#pragma once

#include <array>
#include <cstdint>

namespace dpm4d {

// Seeded 1D Perlin gradient noise, normalised so |noise(x)| <= kBound.
// noise(n) == 0 at every integer n, and the quintic fade makes it C2.
class GradientNoise {
 public:
  static constexpr double kBound = 1.0;

  explicit GradientNoise(std::uint64_t seed);
  double operator()(double x) const;

 private:
  std::array<std::uint8_t, 256> perm_{};
  std::array<double, 256> gradient_{};
};

}  // namespace dpm4d
