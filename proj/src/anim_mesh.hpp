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
#include <vector>

#include "geometry.hpp"

namespace dpm4d {

using Face = std::array<std::uint32_t, 3>;

// Baked per-frame vertex positions over fixed connectivity. Positions are
// stored vertex-major (all frames of vertex 0, then vertex 1, ...) so a
// vertex trajectory is contiguous. Static meshes keep a single frame that is
// broadcast to every time.
struct AnimatedMesh {
  std::uint32_t object_id = 0;
  bool is_static = false;
  int num_vertices = 0;
  int stored_frames = 0;
  std::vector<Vec3f> positions;
  std::vector<Face> faces;

  Vec3 position(int vertex, int t) const {
    const int frame = is_static ? 0 : t;
    return positions[static_cast<std::size_t>(vertex) * stored_frames + frame].cast<double>();
  }
  Vec3f& at(int vertex, int frame) {
    return positions[static_cast<std::size_t>(vertex) * stored_frames + frame];
  }

  // Index ranges, finiteness, and non-degenerate faces at t = 0.
  void validate() const;
};

struct BaryCoord {
  std::uint32_t face = 0;
  Vec3 alpha = Vec3(1.0, 0.0, 0.0);
};

struct UnionTable {
  std::vector<std::size_t> order;            // mesh indices, ascending object_id
  std::vector<std::uint32_t> vertex_offset;  // per sorted mesh
  std::vector<std::uint32_t> face_offset;    // per sorted mesh, plus total at the end
  std::vector<Face> faces;                   // global vertex indices
};

// Concatenates meshes in ascending object_id order. Throws on duplicate ids.
UnionTable union_faces(const std::vector<AnimatedMesh>& meshes);

// The scene union mesh: every object of a clip behind one global face table.
class Scene {
 public:
  struct FaceRef {
    std::uint32_t mesh = 0;   // index into meshes()
    std::uint32_t local = 0;  // face index inside that mesh
  };

  Scene() = default;
  Scene(std::vector<AnimatedMesh> meshes, int num_frames);

  int num_frames() const { return num_frames_; }
  std::uint32_t num_faces() const { return table_.face_offset.empty() ? 0 : table_.face_offset.back(); }
  std::uint32_t num_vertices() const { return num_vertices_; }
  const std::vector<AnimatedMesh>& meshes() const { return meshes_; }
  const UnionTable& table() const { return table_; }

  FaceRef locate(std::uint32_t global_face) const;
  std::uint32_t global_face(std::uint32_t mesh, std::uint32_t local) const {
    return table_.face_offset[mesh] + local;
  }
  std::uint32_t face_begin(std::uint32_t mesh) const { return table_.face_offset[mesh]; }
  std::uint32_t face_end(std::uint32_t mesh) const { return table_.face_offset[mesh + 1]; }

  // Mesh index of an object id, or -1.
  int find_object(std::uint32_t object_id) const;

  std::array<Vec3, 3> triangle(std::uint32_t global_face, int t) const;

  // Convex combination of the face's vertex trajectories at time t.
  Vec3 eval_point(const BaryCoord& bc, int t) const;
  std::vector<Vec3> eval_track(const BaryCoord& bc) const;
  // Writes the T points of the track to out.
  void eval_track(const BaryCoord& bc, Vec3* out) const;

  // Scalars needed to store every vertex trajectory (3 per vertex and frame).
  std::uint64_t trajectory_scalars() const;

 private:
  void check(const BaryCoord& bc, int t) const;

  std::vector<AnimatedMesh> meshes_;
  UnionTable table_;
  std::uint32_t num_vertices_ = 0;
  int num_frames_ = 0;
};

}  // namespace dpm4d
