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

#include "geometry.hpp"

namespace dpm4d {

// Binary H x W mask, row-major, nonzero = set.
struct Mask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  Mask() = default;
  Mask(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h, 0) {}

  std::uint8_t& at(int u, int v) { return data[static_cast<std::size_t>(v) * width + u]; }
  std::uint8_t at(int u, int v) const { return data[static_cast<std::size_t>(v) * width + u]; }
  std::uint64_t count() const;
};

// |a & b| / |a | b|; 1.0 when both masks are empty. Throws kInvalidArgument
// on mismatched dimensions.
double mask_iou(const Mask& a, const Mask& b);

struct MotionFilterOptions {
  double iou_threshold = 0.5;
  // Adjacent-frame area ratio outside [min, max] counts as extreme
  // deformation.
  double min_area_ratio = 0.5;
  double max_area_ratio = 2.0;
};

struct MotionReport {
  bool keep = true;
  double min_iou = 1.0;
  double mean_iou = 1.0;
  int worst_pair = -1;  // index t of the lowest-IoU pair (t, t + 1)
  std::string reason;   // empty when kept
};

// Screens one asset's per-frame masks. Throws kInvalidArgument for fewer
// than two frames.
MotionReport motion_filter(const std::vector<Mask>& masks, const MotionFilterOptions& options = {});

struct OcclusionOptions {
  double min_bbox_area = 10000.0;
  double min_visible_ratio = 0.3;
};

enum class OcclusionVerdict { kKeep, kMissingMask, kSmallBox, kLowVisibleRatio };
std::string to_string(OcclusionVerdict verdict);

struct OcclusionDecision {
  OcclusionVerdict verdict = OcclusionVerdict::kKeep;
  std::uint64_t bbox_area = 0;
  std::uint64_t visible = 0;
  double ratio = 0.0;
  bool keep() const { return verdict == OcclusionVerdict::kKeep; }
};

// Frame filter on a person's visibility mask. A null mask, or an empty one,
// is rejected as missing.
OcclusionDecision occlusion_filter(const Mask* visibility, const OcclusionOptions& options = {});

struct CoverageStats {
  double azimuth_span_deg = 0.0;
  double polar_span_deg = 0.0;
  double radial_span = 0.0;
};

// Spherical coverage of camera positions about `root`. The azimuth span is
// the length of the shortest circular arc holding every arc the trajectories
// sweep (consecutive samples joined the shorter way round), i.e. 360 minus
// the largest uncovered gap. A full orbit gives 360, one fixed camera 0 and
// four fixed cameras 90 degrees apart 270. Polar and radial spans are
// max - min over all samples. Throws kDegenerate when a position coincides
// with the root.
CoverageStats coverage_stats(const std::vector<std::vector<Vec3>>& trajectories, const Vec3& root);
CoverageStats coverage_stats(const std::vector<Vec3>& trajectory, const Vec3& root);

}  // namespace dpm4d
