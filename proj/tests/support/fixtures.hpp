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

// Shared fixtures and independent reference implementations for the tests.
// Nothing here calls the code it is used to check.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include <unistd.h>

#include "anim_mesh.hpp"
#include "archive.hpp"
#include "bary_map.hpp"
#include "config.hpp"
#include "geometry.hpp"

namespace dpm4d::testing {

inline std::string temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("dpm4d_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

inline GenerateConfig small_config(int size, int times, int cameras, std::uint64_t seed) {
  GenerateConfig c;
  c.width = size;
  c.height = size;
  c.num_times = times;
  c.num_cameras = cameras;
  c.seed = seed;
  c.workers = 1;
  return c;
}

// One mesh with the given faces and per-frame vertex positions
// (positions[t][v]).
inline AnimatedMesh make_mesh(std::uint32_t id, const std::vector<std::vector<Vec3>>& positions,
                              const std::vector<Face>& faces) {
  AnimatedMesh m;
  m.object_id = id;
  m.is_static = positions.size() == 1;
  m.num_vertices = static_cast<int>(positions.front().size());
  m.stored_frames = static_cast<int>(positions.size());
  m.positions.resize(static_cast<std::size_t>(m.num_vertices) * m.stored_frames);
  for (int t = 0; t < m.stored_frames; ++t) {
    for (int v = 0; v < m.num_vertices; ++v) m.at(v, t) = positions[t][v].cast<float>();
  }
  m.faces = faces;
  return m;
}

// Scalar point-to-triangle distance by exhaustive candidates: the interior
// projection when it lands inside, otherwise the best edge projection.
inline double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 n = (b - a).cross(c - a);
  const double nn = n.squaredNorm();
  double best = std::numeric_limits<double>::infinity();
  if (nn > 0.0) {
    const Vec3 q = p - n * (n.dot(p - a) / nn);
    const double w0 = n.dot((b - q).cross(c - q));
    const double w1 = n.dot((c - q).cross(a - q));
    const double w2 = n.dot((a - q).cross(b - q));
    if (w0 >= 0 && w1 >= 0 && w2 >= 0) best = (p - q).norm();
  }
  const std::array<std::array<Vec3, 2>, 3> edges{{{a, b}, {b, c}, {c, a}}};
  for (const auto& e : edges) {
    const Vec3 d = e[1] - e[0];
    const double s = std::clamp(d.dot(p - e[0]) / std::max(d.squaredNorm(), 1e-300), 0.0, 1.0);
    best = std::min(best, (p - (e[0] + s * d)).norm());
  }
  return best;
}

// Hand-expanded pinhole model: x_cam = R (x - o), pixel = K x_cam / z - 0.5.
inline std::array<double, 3> scalar_project(const CameraParams& cam, const Vec3& x) {
  const double dx = x[0] - cam.o[0], dy = x[1] - cam.o[1], dz = x[2] - cam.o[2];
  const double cx = cam.R(0, 0) * dx + cam.R(0, 1) * dy + cam.R(0, 2) * dz;
  const double cy = cam.R(1, 0) * dx + cam.R(1, 1) * dy + cam.R(1, 2) * dz;
  const double cz = cam.R(2, 0) * dx + cam.R(2, 1) * dy + cam.R(2, 2) * dz;
  const double u = (cam.K(0, 0) * cx + cam.K(0, 1) * cy + cam.K(0, 2) * cz) / cz - 0.5;
  const double v = (cam.K(1, 1) * cy + cam.K(1, 2) * cz) / cz - 0.5;
  return {u, v, cz};
}

// Materialises Q_i(t) for every time and pixel straight from the stored
// vertex arrays, then maps it into a reference camera. Indexing is
// [t][pixel]; invalid pixels hold NaN.
struct MaterializedFrame {
  std::vector<std::vector<Vec3>> world;  // [t][pixel]
};

inline MaterializedFrame materialize(const ClipData& clip, int frame) {
  const Frame& f = clip.frames[frame];
  const CameraParams& cam = clip.cameras[frame];
  const int T = clip.header.num_times;
  const std::size_t n = f.bary.records.size();
  // Flatten the union mesh: global face -> three (mesh, vertex) pairs.
  std::vector<std::array<std::pair<std::size_t, std::uint32_t>, 3>> faces;
  std::vector<std::size_t> order(clip.scene.meshes().size());
  for (std::size_t m = 0; m < order.size(); ++m) order[m] = m;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return clip.scene.meshes()[a].object_id < clip.scene.meshes()[b].object_id;
  });
  for (std::size_t m : order) {
    for (const Face& face : clip.scene.meshes()[m].faces) faces.push_back({{{m, face[0]}, {m, face[1]}, {m, face[2]}}});
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  MaterializedFrame out;
  out.world.assign(T, std::vector<Vec3>(n, Vec3::Constant(nan)));
  for (std::size_t i = 0; i < n; ++i) {
    const BaryRecord& r = f.bary.records[i];
    if (r.face == BaryRecord::kNoSurface) continue;
    const int u = static_cast<int>(i % f.depth.width), v = static_cast<int>(i / f.depth.width);
    if (r.face == BaryRecord::kStaticFace) {
      const double z = f.depth.z[i];
      const double x = (u + 0.5 - cam.K(0, 2)) * z / cam.K(0, 0);
      const double y = (v + 0.5 - cam.K(1, 2)) * z / cam.K(1, 1);
      const Vec3 w = cam.R.transpose() * Vec3(x, y, z) + cam.o;
      for (int t = 0; t < T; ++t) out.world[t][i] = w;
      continue;
    }
    const double a1 = r.alpha1 / 65535.0, a2 = r.alpha2 / 65535.0;
    const double a3 = (65535.0 - r.alpha1 - r.alpha2) / 65535.0;
    const auto& fv = faces.at(r.face);
    for (int t = 0; t < T; ++t) {
      Vec3 q[3];
      for (int k = 0; k < 3; ++k) {
        const AnimatedMesh& mesh = clip.scene.meshes()[fv[k].first];
        const int stored = mesh.is_static ? 0 : t;
        q[k] = mesh.positions[static_cast<std::size_t>(fv[k].second) * mesh.stored_frames + stored].cast<double>();
      }
      out.world[t][i] = a1 * q[0] + a2 * q[1] + a3 * q[2];
    }
  }
  return out;
}

}  // namespace dpm4d::testing
