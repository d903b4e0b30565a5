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
#include "rng.hpp"

namespace dpm4d {

constexpr double kMinHfovDeg = 39.6;
constexpr double kMaxHfovDeg = 90.0;

enum class MotionKind { kStatic, kTracking, kDolly, kOrbit };

std::string to_string(MotionKind kind);
MotionKind motion_kind_from_string(const std::string& name);

// Spherical coordinates about a root point; polar is measured from world +z.
struct Spherical {
  double radius = 4.0;
  double polar_deg = 60.0;
  double azimuth_deg = 0.0;
};

Vec3 spherical_to_offset(const Spherical& s);

struct CameraMotionSpec {
  MotionKind kind = MotionKind::kOrbit;
  Vec3 root = Vec3::Zero();
  Spherical start;
  // Orbit: change of (radius, polar, azimuth) between consecutive keyframes.
  std::vector<Spherical> deltas;
  // Normalised keyframe times in [0, 1], strictly increasing, one more than
  // deltas. Empty means evenly spaced.
  std::vector<double> keyframe_times;
  // Dolly: distance travelled along the initial view direction.
  double dolly_distance = 0.0;
  // Tracking: world displacement of camera and look-at target over the shot.
  Vec3 travel = Vec3::Zero();
  // Camera-local shake amplitudes (scene units) and noise frequency in
  // cycles per frame.
  double position_shake = 0.0;
  double target_shake = 0.0;
  double shake_frequency = 0.08;
  double hfov_deg = 60.0;

  void validate() const;
  std::vector<double> resolved_keyframes() const;
};

// Camera centre plus the point it looks at.
struct LookAtPose {
  Vec3 position = Vec3::Zero();
  Vec3 target = Vec3::UnitX();
};

// World->camera rotation looking from `position` at `target` with world +z
// as up. Throws kDegenerate when the two points coincide.
Mat3 look_at(const Vec3& position, const Vec3& target);

// Unshaken look-at poses for T frames.
std::vector<LookAtPose> base_poses(const CameraMotionSpec& spec, int num_frames);

// Adds gradient-noise offsets in each base pose's camera-local axes, one
// independent channel per axis for position and for target. Zero amplitude
// returns the input unchanged, and frame 0 is never moved.
std::vector<LookAtPose> perlin_shake(const std::vector<LookAtPose>& poses, double position_amplitude,
                                     double target_amplitude, double frequency, std::uint64_t seed);

std::vector<CameraParams> sample_trajectory(const CameraMotionSpec& spec, int num_frames,
                                            int width, int height, std::uint64_t seed);

enum class RigPattern { kIndependent, kPairedOrbits, kStaticPlusOrbits };

std::string to_string(RigPattern pattern);
// Throws kInvalidArgument for unknown names.
RigPattern rig_pattern_from_string(const std::string& name);

// Ranges the rig sampler draws from. These are tuned so that an eight-camera
// independent rig sweeps most of the azimuth circle, a wide polar band and
// several units of radius; tracking shots are never drawn.
struct RigRanges {
  double radius_min = 3.0, radius_max = 6.0;
  double radius_delta_min = 0.5, radius_delta_max = 2.5;
  double radius_floor = 2.0;
  double polar_min = 20.0, polar_max = 48.0;
  double polar_delta_min = 32.0, polar_delta_max = 40.0;
  double azimuth_delta_min = 90.0, azimuth_delta_max = 270.0;
  double hfov_min = kMinHfovDeg, hfov_max = kMaxHfovDeg;
  double position_shake_max = 0.02;
  double target_shake_max = 0.05;
  double dolly_fraction = 0.25;
  double dolly_distance_min = 0.5, dolly_distance_max = 1.5;
};

std::vector<CameraMotionSpec> make_rig(RigPattern pattern, int num_cameras, const Vec3& root,
                                       const RigRanges& ranges, Rng& rng);

}  // namespace dpm4d
