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
#include <utility>
#include <vector>

#include "geometry.hpp"

namespace dpm4d {

struct PointCloud {
  std::vector<Vec3> points;
  std::vector<Vec3> normals;  // empty, or one unit normal per point
};

// Unit normals from a PCA plane fit over each point's k nearest neighbours
// (the point included). Throws kDegenerate for fewer than 3 points.
std::vector<Vec3> estimate_normals(const std::vector<Vec3>& points, int neighbors = 10);

struct ReconMetrics {
  double accuracy = 0.0;            // mean pred -> gt nearest distance
  double completeness = 0.0;        // mean gt -> pred nearest distance
  double normal_consistency = 0.0;  // mean |cos| over both directions
};

// Missing normals are estimated with estimate_normals. Throws
// kInvalidArgument on an empty cloud or a normal count mismatch.
ReconMetrics recon_metrics(const PointCloud& pred, const PointCloud& gt, int neighbors = 10);

// Mutual nearest neighbours between the valid pixels of two point maps of
// the same scene: (u, v) with v the nearest source pixel to target pixel u
// and u the nearest target pixel to source pixel v. Pairs are sorted by u.
std::vector<std::pair<std::uint32_t, std::uint32_t>> mutual_matches(const PointMap& source, const PointMap& target);

struct CorrespondenceResult {
  double error = 0.0;
  std::vector<std::uint64_t> matches;  // |M_i| per frame
  std::vector<int> empty_frames;       // excluded from the average
  std::uint64_t missing = 0;           // matched pixels the prediction leaves invalid
};

// Multiview correspondence error: matches come from the ground-truth source
// and target maps only, and each frame contributes the mean distance between
// predicted and true target points over its matches. Frames with no matches
// are skipped and listed. Throws kInvalidArgument when no frame has matches.
CorrespondenceResult correspondence_error(const std::vector<PointMap>& pred_target,
                                          const std::vector<PointMap>& gt_source,
                                          const std::vector<PointMap>& gt_target);

}  // namespace dpm4d
