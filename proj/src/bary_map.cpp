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

#include "bary_map.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace dpm4d {

BaryRecord BaryRecord::dynamic(const BaryCoord& bc) {
  require(bc.face < kStaticFace, ErrorCode::kInvalidArgument, "face index collides with sentinel");
  const auto quantize = [](double a) {
    return static_cast<long>(std::lround(std::clamp(a, 0.0, 1.0) * kScale));
  };
  long q1 = quantize(bc.alpha[0]);
  long q2 = quantize(bc.alpha[1]);
  if (q1 + q2 > static_cast<long>(kScale)) {
    // Rounding pushed the pair past one; undo it on the weight that rounded
    // up the most.
    const double e1 = q1 - bc.alpha[0] * kScale;
    const double e2 = q2 - bc.alpha[1] * kScale;
    if (e1 >= e2) --q1; else --q2;
  }
  return BaryRecord{bc.face, static_cast<std::uint16_t>(q1), static_cast<std::uint16_t>(q2)};
}

BaryCoord BaryRecord::decode() const {
  BaryCoord bc;
  bc.face = face;
  const std::uint32_t rest = 65535u - alpha1 - alpha2;
  bc.alpha = Vec3(alpha1, alpha2, rest) / kScale;
  return bc;
}

}  // namespace dpm4d
