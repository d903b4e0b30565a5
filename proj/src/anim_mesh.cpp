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

#include "anim_mesh.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "error.hpp"

namespace dpm4d {

void AnimatedMesh::validate() const {
  std::ostringstream where;
  where << "mesh " << object_id << ": ";
  require(num_vertices >= 0 && stored_frames >= 1, ErrorCode::kInvalidArgument,
          where.str() + "empty frame range");
  require(!is_static || stored_frames == 1, ErrorCode::kInvalidArgument,
          where.str() + "static meshes store exactly one frame");
  require(positions.size() == static_cast<std::size_t>(num_vertices) * stored_frames,
          ErrorCode::kInvalidArgument, where.str() + "position count mismatch");
  for (const auto& p : positions) {
    require(p.allFinite(), ErrorCode::kInvalidArgument, where.str() + "non-finite vertex");
  }
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const Face& face = faces[f];
    for (auto idx : face) {
      require(idx < static_cast<std::uint32_t>(num_vertices), ErrorCode::kInvalidArgument,
              where.str() + "face index out of range");
    }
    const Vec3 a = position(face[0], 0), b = position(face[1], 0), c = position(face[2], 0);
    const double area = 0.5 * (b - a).cross(c - a).norm();
    if (!(area > 1e-12)) {
      std::ostringstream msg;
      msg << where.str() << "face " << f << " is degenerate at t=0";
      fail(ErrorCode::kInvalidArgument, msg.str());
    }
  }
}

UnionTable union_faces(const std::vector<AnimatedMesh>& meshes) {
  UnionTable table;
  table.order.resize(meshes.size());
  std::iota(table.order.begin(), table.order.end(), std::size_t{0});
  std::stable_sort(table.order.begin(), table.order.end(), [&](std::size_t a, std::size_t b) {
    return meshes[a].object_id < meshes[b].object_id;
  });
  for (std::size_t i = 1; i < table.order.size(); ++i) {
    if (meshes[table.order[i]].object_id == meshes[table.order[i - 1]].object_id) {
      fail(ErrorCode::kInvalidArgument,
           "duplicate object_id " + std::to_string(meshes[table.order[i]].object_id));
    }
  }
  std::uint32_t vbase = 0, fbase = 0;
  for (std::size_t idx : table.order) {
    const AnimatedMesh& m = meshes[idx];
    table.vertex_offset.push_back(vbase);
    table.face_offset.push_back(fbase);
    for (const Face& f : m.faces) table.faces.push_back({f[0] + vbase, f[1] + vbase, f[2] + vbase});
    vbase += static_cast<std::uint32_t>(m.num_vertices);
    fbase += static_cast<std::uint32_t>(m.faces.size());
  }
  table.face_offset.push_back(fbase);
  return table;
}

Scene::Scene(std::vector<AnimatedMesh> meshes, int num_frames) : num_frames_(num_frames) {
  require(num_frames >= 1, ErrorCode::kInvalidArgument, "scene needs at least one frame");
  for (const auto& m : meshes) {
    m.validate();
    require(m.is_static || m.stored_frames == num_frames, ErrorCode::kInvalidArgument,
            "animated mesh " + std::to_string(m.object_id) + " frame count differs from clip");
  }
  UnionTable table = union_faces(meshes);
  // Store meshes in union order so mesh index == union slot.
  meshes_.reserve(meshes.size());
  for (std::size_t idx : table.order) meshes_.push_back(std::move(meshes[idx]));
  std::iota(table.order.begin(), table.order.end(), std::size_t{0});
  table_ = std::move(table);
  for (const auto& m : meshes_) num_vertices_ += static_cast<std::uint32_t>(m.num_vertices);
}

Scene::FaceRef Scene::locate(std::uint32_t global_face) const {
  require(global_face < num_faces(), ErrorCode::kOutOfRange,
          "face index " + std::to_string(global_face) + " outside the scene union");
  const auto it = std::upper_bound(table_.face_offset.begin(), table_.face_offset.end(), global_face);
  const auto mesh = static_cast<std::uint32_t>(it - table_.face_offset.begin() - 1);
  return FaceRef{mesh, global_face - table_.face_offset[mesh]};
}

int Scene::find_object(std::uint32_t object_id) const {
  for (std::size_t i = 0; i < meshes_.size(); ++i) {
    if (meshes_[i].object_id == object_id) return static_cast<int>(i);
  }
  return -1;
}

std::array<Vec3, 3> Scene::triangle(std::uint32_t global_face, int t) const {
  const FaceRef ref = locate(global_face);
  const AnimatedMesh& m = meshes_[ref.mesh];
  const Face& f = m.faces[ref.local];
  return {m.position(f[0], t), m.position(f[1], t), m.position(f[2], t)};
}

void Scene::check(const BaryCoord& bc, int t) const {
  require(t >= 0 && t < num_frames_, ErrorCode::kOutOfRange,
          "time " + std::to_string(t) + " outside [0, " + std::to_string(num_frames_) + ")");
  const Vec3& a = bc.alpha;
  const bool simplex = a.minCoeff() >= -1e-6 && std::abs(a.sum() - 1.0) <= 1e-6;
  require(simplex, ErrorCode::kInvalidArgument, "barycentric weights outside the simplex");
}

Vec3 Scene::eval_point(const BaryCoord& bc, int t) const {
  check(bc, t);
  const auto tri = triangle(bc.face, t);
  return bc.alpha[0] * tri[0] + bc.alpha[1] * tri[1] + bc.alpha[2] * tri[2];
}

std::vector<Vec3> Scene::eval_track(const BaryCoord& bc) const {
  std::vector<Vec3> track(static_cast<std::size_t>(num_frames_));
  eval_track(bc, track.data());
  return track;
}

void Scene::eval_track(const BaryCoord& bc, Vec3* out) const {
  check(bc, 0);
  const FaceRef ref = locate(bc.face);
  const AnimatedMesh& m = meshes_[ref.mesh];
  const Face& f = m.faces[ref.local];
  for (int t = 0; t < num_frames_; ++t) {
    out[t] = bc.alpha[0] * m.position(f[0], t) + bc.alpha[1] * m.position(f[1], t) +
             bc.alpha[2] * m.position(f[2], t);
  }
}

std::uint64_t Scene::trajectory_scalars() const {
  std::uint64_t n = 0;
  for (const auto& m : meshes_) n += 3ull * m.num_vertices * m.stored_frames;
  return n;
}

}  // namespace dpm4d
