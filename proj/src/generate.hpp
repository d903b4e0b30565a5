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
#include "config.hpp"
#include "encoder.hpp"
#include "scene_sim.hpp"
#include "trajectory.hpp"

namespace dpm4d {

struct GeneratedClip {
  ClipData clip;
  std::vector<PlacedObject> objects;
  std::vector<CameraMotionSpec> rig;
  // Rasteriser output per flat frame id, kept for ground-truth checks.
  std::vector<RasterResult> raster;
  EncodeReport report;
};

// Compose, sample the rig, rasterise all T*C frames and encode them from the
// rendered depth and segmentation. Deterministic for a given config.
GeneratedClip generate_clip(const GenerateConfig& config);

}  // namespace dpm4d
