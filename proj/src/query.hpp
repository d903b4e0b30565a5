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

#include <vector>

#include "archive.hpp"
#include "geometry.hpp"

namespace dpm4d {

// Amodal 3D trajectory of the surface point seen at one pixel. Points are
// reported at every time, whether or not the point is visible then.
struct Track {
  std::vector<Vec3> points;
  PixelKind kind = PixelKind::kInvalid;
  bool amodal = true;
};

// Reference frame of an archive frame's camera.
inline const CameraParams& reference_of(const Archive& archive, int frame) {
  return archive.camera(frame);
}

// Track through pixel (u, v) of `frame`, expressed in `ref`. The Frame
// overload reuses an already decoded frame; lookup is O(1), decode O(T).
Track query_track(const Archive& archive, const Frame& decoded, int frame, int u, int v,
                  const CameraParams& ref);
Track query_track(const Archive& archive, int frame, int u, int v, const CameraParams& ref);

// P_i(ref, t): position at time t of every pixel's surface point of frame i,
// expressed in `ref`. Invalid pixels are masked.
PointMap query_dpm(const Archive& archive, const Frame& decoded, int frame, const CameraParams& ref,
                   int t);
PointMap query_dpm(const Archive& archive, int frame, const CameraParams& ref, int t);

// In-memory variants over ClipData, used by the generator before anything is
// written.
PointMap query_dpm(const ClipData& clip, int frame, const CameraParams& ref, int t);
Track query_track(const ClipData& clip, int frame, int u, int v, const CameraParams& ref);

}  // namespace dpm4d
