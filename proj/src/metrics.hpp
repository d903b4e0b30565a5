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

// x -> scale * R * x + t
struct Similarity {
  double scale = 1.0;
  Mat3 R = Mat3::Identity();
  Vec3 t = Vec3::Zero();

  Vec3 apply(const Vec3& x) const { return scale * (R * x) + t; }
};

// Least-squares similarity taking `pred` onto `gt` (Umeyama 1991). With
// with_scale false the scale is fixed at 1. Throws kInvalidArgument on size
// mismatch and kDegenerate for fewer than 3 points or collinear input.
Similarity umeyama_align(const std::vector<Vec3>& pred, const std::vector<Vec3>& gt, bool with_scale);

enum class AlignMode { kNone, kRigid, kSimilarity };
std::string to_string(AlignMode mode);
AlignMode align_mode_from_string(const std::string& name);

// Camera-to-world pose: rotation of camera axes into world axes and the
// camera centre.
struct Pose {
  Mat3 R = Mat3::Identity();
  Vec3 t = Vec3::Zero();

  static Pose from_camera(const CameraParams& cam) { return Pose{cam.R.transpose(), cam.o}; }
  Pose inverse() const { return Pose{R.transpose(), -(R.transpose() * t)}; }
  Pose operator*(const Pose& o) const { return Pose{R * o.R, R * o.t + t}; }
};

struct Trajectory {
  std::vector<double> timestamps;
  std::vector<Pose> poses;

  // Orthonormal rotations and strictly increasing timestamps.
  void validate() const;
};

struct AteResult {
  double rmse = 0.0;
  Similarity alignment;
};

// RMS of camera-centre residuals after aligning pred onto gt.
AteResult ate(const Trajectory& pred, const Trajectory& gt, AlignMode align);

struct RpeResult {
  double translation = 0.0;    // mean, scene units
  double rotation_deg = 0.0;   // mean geodesic angle
  std::size_t pairs = 0;
};

// Errors of consecutive relative motions gt_i^-1 gt_{i+1} vs the same for
// pred. Requires equal lengths of at least two poses.
RpeResult rpe(const Trajectory& pred, const Trajectory& gt);

// Geodesic angle of a rotation matrix in degrees.
double rotation_angle_deg(const Mat3& R);

// M tracks x T steps, track-major.
struct TrackSet {
  int num_tracks = 0;
  int num_times = 0;
  std::vector<Vec3> points;
  std::vector<std::uint8_t> valid;

  TrackSet() = default;
  TrackSet(int m, int t)
      : num_tracks(m), num_times(t), points(static_cast<std::size_t>(m) * t, Vec3::Zero()),
        valid(static_cast<std::size_t>(m) * t, 0) {}
  std::size_t index(int track, int time) const { return static_cast<std::size_t>(track) * num_times + time; }
};

enum class ThresholdScale { kAbsolute, kDepth };

struct TrackMetricOptions {
  // Depth mode scales each threshold by |z| of the ground-truth point.
  std::vector<double> thresholds{0.01, 0.02, 0.04, 0.08, 0.16};
  ThresholdScale scale = ThresholdScale::kDepth;
};

struct TrackMetrics {
  double apd = 0.0;            // percent
  double epe = 0.0;            // mean over valid points
  double epe_per_track = 0.0;  // mean of per-track means
  std::vector<double> within;  // percent per threshold
  std::uint64_t points = 0;    // ground-truth-valid points
  std::uint64_t missing = 0;   // of those, invalid in pred (count as misses)
};

// Ground-truth validity decides which points count. A point counts as within
// threshold tau iff its error is strictly below tau. Throws kInvalidArgument
// on shape mismatch or no valid points.
TrackMetrics track_metrics(const TrackSet& pred, const TrackSet& gt, const TrackMetricOptions& options = {});

enum class DepthAlign { kNone, kScale, kScaleShift };
std::string to_string(DepthAlign mode);
DepthAlign depth_align_from_string(const std::string& name);

struct DepthMetrics {
  double abs_rel = 0.0;
  double delta_125 = 0.0;  // percent
  double scale = 1.0;
  double shift = 0.0;
  std::uint64_t pixels = 0;
};

// One least-squares fit per sequence over pixels valid in gt and finite in
// pred. Throws kInvalidArgument on negative gt, shape mismatch, or no pixels.
DepthMetrics depth_metrics(const std::vector<DepthMap>& pred, const std::vector<DepthMap>& gt, DepthAlign align);

}  // namespace dpm4d
