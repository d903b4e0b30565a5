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

#include <cstdint>
#include <vector>

#include "anim_mesh.hpp"

namespace dpm4d {

enum class PixelKind : std::uint8_t { kInvalid = 0, kStatic = 1, kDynamic = 2 };

// One 8-byte pixel record. The face field doubles as the flag: two reserved
// values mark no-surface and static pixels, anything else is a dynamic pixel
// pointing into the scene union face table. Weights are 16-bit fixed point
// (value / 65535); the third weight is whatever remains to reach one.
struct BaryRecord {
  static constexpr std::uint32_t kNoSurface = 0xFFFFFFFFu;
  static constexpr std::uint32_t kStaticFace = 0xFFFFFFFEu;
  static constexpr double kScale = 65535.0;

  std::uint32_t face = kNoSurface;
  std::uint16_t alpha1 = 0;
  std::uint16_t alpha2 = 0;

  PixelKind kind() const {
    if (face == kNoSurface) return PixelKind::kInvalid;
    if (face == kStaticFace) return PixelKind::kStatic;
    return PixelKind::kDynamic;
  }

  static BaryRecord invalid() { return BaryRecord{}; }
  static BaryRecord static_pixel() { return BaryRecord{kStaticFace, 0, 0}; }
  static BaryRecord dynamic(const BaryCoord& bc);

  BaryCoord decode() const;
  bool operator==(const BaryRecord&) const = default;
};

struct BaryMap {
  int width = 0;
  int height = 0;
  std::vector<BaryRecord> records;

  BaryMap() = default;
  BaryMap(int w, int h) : width(w), height(h), records(static_cast<std::size_t>(w) * h) {}

  std::size_t index(int u, int v) const { return static_cast<std::size_t>(v) * width + u; }
  const BaryRecord& at(int u, int v) const { return records[index(u, v)]; }
  bool operator==(const BaryMap&) const = default;
};

}  // namespace dpm4d
