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

#include <string>
#include <vector>

#include <json.hpp>

#include "archive.hpp"
#include "curation.hpp"
#include "metrics.hpp"
#include "recon.hpp"
#include "tensor_io.hpp"

namespace dpm4d {

// Size breakdown of an opened archive: sections, pixel kinds, and the
// dense/compact storage estimates for its dimensions.
nlohmann::json archive_stats(const Archive& archive);

struct CurateOptions {
  MotionFilterOptions motion;
  OcclusionOptions occlusion;
  int birdseye_resolution = 64;
};

// Keys: iou_threshold, min_area_ratio, max_area_ratio, min_bbox_area,
// min_visible_ratio, birdseye_resolution. Throws kSchema on unknown keys.
CurateOptions curate_options_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CurateOptions& options);

// Motion screening of every animated object from a top-down view, the
// occlusion filter on every frame that shows the human proxy, and the
// rig's coverage statistics.
nlohmann::json curate_archive(const Archive& archive, const CurateOptions& options);

// Ground truth in the prediction formats accepted by evaluate().
Trajectory ground_truth_trajectory(const Archive& archive, int camera);
TrackSet ground_truth_tracks(const Archive& archive, int frame);
std::vector<DepthMap> ground_truth_depth(const Archive& archive, int camera);
std::vector<Vec3> ground_truth_points(const Archive& archive, int frame, int time);
// World-frame DPMs P_(c,t)(world, t) for t = 0..T-1.
std::vector<PointMap> ground_truth_view_maps(const Archive& archive, int camera);

Tensor tracks_to_tensor(const TrackSet& tracks);
TrackSet tensor_to_tracks(const Tensor& t);
Tensor depth_to_tensor(const std::vector<DepthMap>& depth);
std::vector<DepthMap> tensor_to_depth(const Tensor& t);
Tensor points_to_tensor(const std::vector<Vec3>& points);
std::vector<Vec3> tensor_to_points(const Tensor& t);
Tensor maps_to_tensor(const std::vector<PointMap>& maps);
std::vector<PointMap> tensor_to_maps(const Tensor& t);

// Request: {"task": "pose"|"tracks"|"depth"|"recon"|"correspondence",
// "pred": path, ...task parameters}. Returns the metric table. Bad
// requests throw kSchema; shape mismatches against the archive throw
// kSchema too.
nlohmann::json evaluate(const Archive& archive, const nlohmann::json& request);

// Writes the ground truth a request would be scored against to `out_path`.
// Returns a short description of what was written.
nlohmann::json export_ground_truth(const Archive& archive, const nlohmann::json& request, const std::string& out_path);

}  // namespace dpm4d
