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
#include <string>
#include <vector>

#include "anim_mesh.hpp"
#include "geometry.hpp"

namespace dpm4d {

// Procedural dynamic primitives. kWalker is the human proxy; kTeleporter
// jumps between two spots every frame and exists to exercise curation.
enum class ObjectKind { kSphere, kArm, kFlag, kWalker, kTeleporter };

std::string to_string(ObjectKind kind);
ObjectKind object_kind_from_string(const std::string& name);

struct SceneSpec {
  Vec3 root = Vec3::Zero();
  // Dynamic objects besides the human proxy; 0 draws 1..3 at random.
  int num_objects = 0;
  // Explicit object kinds; overrides num_objects when non-empty.
  std::vector<ObjectKind> objects;
  bool include_human = true;
  // Ground-occupancy grid centred on the root.
  int grid_cells = 8;
  double cell_size = 0.5;
  int placement_retries = 200;
  double ground_half_extent = 8.0;
  bool crates = true;
  std::uint64_t seed = 0;
};

// Footprint rectangle in occupancy-grid cells, [x0, x0 + w) x [y0, y0 + h).
struct Footprint {
  int x0 = 0, y0 = 0, w = 0, h = 0;
  bool overlaps(const Footprint& o) const {
    return x0 < o.x0 + o.w && o.x0 < x0 + w && y0 < o.y0 + o.h && o.y0 < y0 + h;
  }
};

struct PlacedObject {
  std::uint32_t object_id = 0;
  ObjectKind kind = ObjectKind::kSphere;
  Footprint footprint;
  Vec3 centre = Vec3::Zero();  // world centre of the footprint on the ground
};

struct ComposedScene {
  Scene scene;
  std::vector<PlacedObject> objects;
  Vec3 root = Vec3::Zero();
};

// Footprint size (cells) of each kind, for the default 0.5 m cell.
Footprint footprint_size(ObjectKind kind);

// Places objects on the occupancy grid without overlap and bakes their
// motion for T frames. The static environment is object id 0. Throws
// kInvalidArgument when placement fails after the retry budget.
ComposedScene compose_scene(const SceneSpec& spec, int num_frames);

// Builds one object's baked mesh at a given world centre (exposed for tests).
AnimatedMesh make_object(ObjectKind kind, std::uint32_t object_id, const Vec3& centre, double half_x,
                         double half_y, int num_frames, std::uint64_t seed);

struct RasterResult {
  DepthMap depth;
  std::vector<std::uint32_t> seg;
  // Exact hit per pixel: global face (or -1) and unquantised weights.
  std::vector<std::int64_t> face;
  std::vector<Vec3> alpha;
  std::vector<std::uint8_t> rgb;  // flat shaded, only when requested
};

// Z-buffered rasterisation of the scene at time t, sampled at pixel centres.
// Each covered pixel gets the nearest face, its exact barycentric weights,
// the camera-frame depth and the owning object id (0 for the environment).
// Depth ties keep the lower face index.
RasterResult rasterize(const Scene& scene, const CameraParams& cam, int t, bool with_rgb = false);

// Orthographic top-down coverage mask of one mesh at time t over the square
// [centre - half, centre + half]^2 in world xy.
std::vector<std::uint8_t> render_birdseye_mask(const AnimatedMesh& mesh, int t, const Vec3& centre,
                                               double half_extent, int resolution);

}  // namespace dpm4d
