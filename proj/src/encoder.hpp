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
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Geometry>

#include "anim_mesh.hpp"
#include "bary_map.hpp"
#include "geometry.hpp"

namespace dpm4d {

// Residuals closer than this to the best one count as ties; the lowest face
// index among tied faces wins.
constexpr double kTieTolerance = 1e-9;

struct TrianglePoint {
  Vec3 alpha;  // exactly on the simplex
  Vec3 point;
  double distance = 0.0;
};

// Closest point of triangle (a, b, c) to p via the seven-region
// classification (three vertex, three edge, one face region). Works for
// degenerate triangles too.
TrianglePoint closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

struct FitResult {
  BaryCoord coord;
  double residual = 0.0;
};

// Bounding-volume hierarchy over a contiguous range of scene-union faces,
// frozen at one time index. One face per leaf.
class FaceAccel {
 public:
  FaceAccel(const Scene& scene, int t, std::uint32_t face_begin, std::uint32_t face_end);
  FaceAccel(const Scene& scene, int t) : FaceAccel(scene, t, 0, scene.num_faces()) {}

  std::optional<FitResult> nearest(const Vec3& p) const;

  int time() const { return time_; }
  std::size_t num_faces() const { return triangles_.size(); }

  struct Node {
    Eigen::AlignedBox3d box;
    std::int32_t left = -1;   // child node index, -1 for leaves
    std::int32_t right = -1;
    std::uint32_t slot = 0;   // leaf: index into triangles_
  };
  const std::vector<Node>& nodes() const { return nodes_; }
  std::uint32_t leaf_face(const Node& leaf) const { return face_begin_ + leaf.slot; }
  const std::array<Vec3, 3>& leaf_triangle(const Node& leaf) const { return triangles_[leaf.slot]; }

 private:
  std::int32_t build(std::vector<std::uint32_t>& slots, std::size_t begin, std::size_t end);

  std::uint32_t face_begin_ = 0;
  int time_ = 0;
  std::vector<std::array<Vec3, 3>> triangles_;
  std::vector<Node> nodes_;
};

// Exhaustive argmin over faces [face_begin, face_end) at time t.
// Throws kInvalidArgument when the range is empty.
FitResult brute_force_fit(const Vec3& p, const Scene& scene, int t, std::uint32_t face_begin,
                          std::uint32_t face_end);
FitResult brute_force_fit(const Vec3& p, const Scene& scene, int t);

// Accelerated argmin; same result as brute_force_fit on the same face range.
FitResult fit_pixel(const Vec3& p, const FaceAccel& accel);

struct EncodeOptions {
  double surface_tolerance = 1e-3;
  unsigned workers = 0;  // 0 = hardware concurrency
};

struct EncodeReport {
  std::uint64_t dynamic_pixels = 0;
  std::uint64_t static_pixels = 0;
  std::uint64_t invalid_pixels = 0;
  // Pixels segmented as dynamic whose best fit missed the surface tolerance;
  // they are stored as static.
  std::uint64_t rejected_pixels = 0;
  double worst_residual = 0.0;
  double worst_rejected_residual = 0.0;
  // Residual histogram over decades: [0,1e-9), [1e-9,1e-8), ... [1e-3, inf).
  std::array<std::uint64_t, 8> histogram{};

  void merge(const EncodeReport& other);
  static std::string bin_label(std::size_t bin);
};

// Builds the barycentric map of one frame. Pixels with seg id 0 are static,
// pixels without depth are invalid, the rest are fitted against the faces of
// the object named by the segmentation map. With no segmentation map every
// valid pixel is fitted against the whole scene and is dynamic iff the best
// face belongs to an animated mesh.
BaryMap encode_frame(const DepthMap& depth, const std::vector<std::uint32_t>* seg,
                     const CameraParams& cam, const Scene& scene, int t,
                     const EncodeOptions& options = {}, EncodeReport* report = nullptr);

}  // namespace dpm4d
