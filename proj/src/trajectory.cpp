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

#include "trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "noise.hpp"

namespace dpm4d {

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

Spherical lerp(const Spherical& a, const Spherical& b, double s) {
  return Spherical{a.radius + (b.radius - a.radius) * s, a.polar_deg + (b.polar_deg - a.polar_deg) * s,
                   a.azimuth_deg + (b.azimuth_deg - a.azimuth_deg) * s};
}

Spherical add(const Spherical& a, const Spherical& d) {
  return Spherical{a.radius + d.radius, a.polar_deg + d.polar_deg, a.azimuth_deg + d.azimuth_deg};
}

}  // namespace

std::string to_string(MotionKind kind) {
  switch (kind) {
    case MotionKind::kStatic: return "static";
    case MotionKind::kTracking: return "tracking";
    case MotionKind::kDolly: return "dolly";
    case MotionKind::kOrbit: return "orbit";
  }
  return "unknown";
}

MotionKind motion_kind_from_string(const std::string& name) {
  if (name == "static") return MotionKind::kStatic;
  if (name == "tracking") return MotionKind::kTracking;
  if (name == "dolly") return MotionKind::kDolly;
  if (name == "orbit") return MotionKind::kOrbit;
  fail(ErrorCode::kInvalidArgument, "unknown camera motion '" + name + "'");
}

Vec3 spherical_to_offset(const Spherical& s) {
  const double th = s.polar_deg * kDegToRad;
  const double ph = s.azimuth_deg * kDegToRad;
  return s.radius * Vec3(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
}

std::vector<double> CameraMotionSpec::resolved_keyframes() const {
  if (!keyframe_times.empty()) return keyframe_times;
  const std::size_t n = deltas.size() + 1;
  std::vector<double> kt(n);
  for (std::size_t i = 0; i < n; ++i) kt[i] = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
  return kt;
}

void CameraMotionSpec::validate() const {
  require(hfov_deg >= kMinHfovDeg - 1e-9 && hfov_deg <= kMaxHfovDeg + 1e-9, ErrorCode::kInvalidArgument,
          "hfov must lie in [39.6, 90] degrees");
  require(start.radius > 0.0, ErrorCode::kInvalidArgument, "camera radius must be positive");
  require(position_shake >= 0.0 && target_shake >= 0.0, ErrorCode::kInvalidArgument,
          "shake amplitudes must be non-negative");
  const auto kt = resolved_keyframes();
  require(kt.size() == deltas.size() + 1, ErrorCode::kInvalidArgument,
          "keyframe times must number one more than deltas");
  for (std::size_t i = 1; i < kt.size(); ++i) {
    require(kt[i] > kt[i - 1], ErrorCode::kInvalidArgument, "keyframe times must be strictly increasing");
  }
  Spherical k = start;
  for (const auto& d : deltas) {
    k = add(k, d);
    require(kind != MotionKind::kOrbit || k.radius > 0.0, ErrorCode::kInvalidArgument,
            "orbit radius must stay positive at every keyframe");
  }
}

Mat3 look_at(const Vec3& position, const Vec3& target) {
  const Vec3 dir = target - position;
  if (!(dir.norm() > 1e-9)) fail(ErrorCode::kDegenerate, "camera coincides with its look-at point");
  const Vec3 forward = dir.normalized();
  Vec3 up = Vec3::UnitZ();
  if (forward.cross(up).norm() < 1e-9) up = Vec3::UnitY();
  const Vec3 right = forward.cross(up).normalized();
  const Vec3 down = forward.cross(right);
  Mat3 R;
  R.row(0) = right.transpose();
  R.row(1) = down.transpose();
  R.row(2) = forward.transpose();
  return R;
}

std::vector<LookAtPose> base_poses(const CameraMotionSpec& spec, int num_frames) {
  spec.validate();
  require(num_frames >= 1, ErrorCode::kInvalidArgument, "trajectory needs at least one frame");
  const auto kt = spec.resolved_keyframes();
  std::vector<Spherical> keys{spec.start};
  for (const auto& d : spec.deltas) keys.push_back(add(keys.back(), d));

  const Vec3 p0 = spec.root + spherical_to_offset(spec.start);
  const Vec3 view = spec.root - p0;
  if (!(view.norm() > 1e-9)) fail(ErrorCode::kDegenerate, "camera starts at the root");
  const Vec3 forward = view.normalized();

  std::vector<LookAtPose> poses(static_cast<std::size_t>(num_frames));
  for (int t = 0; t < num_frames; ++t) {
    const double s = num_frames == 1 ? 0.0 : static_cast<double>(t) / (num_frames - 1);
    LookAtPose& pose = poses[t];
    switch (spec.kind) {
      case MotionKind::kStatic:
        pose = {p0, spec.root};
        break;
      case MotionKind::kOrbit: {
        Spherical sph = keys.front();
        if (s <= kt.front()) {
          sph = keys.front();
        } else if (s >= kt.back()) {
          sph = keys.back();
        } else {
          std::size_t seg = 0;
          while (seg + 2 < kt.size() && s > kt[seg + 1]) ++seg;
          sph = lerp(keys[seg], keys[seg + 1], (s - kt[seg]) / (kt[seg + 1] - kt[seg]));
        }
        pose = {spec.root + spherical_to_offset(sph), spec.root};
        break;
      }
      case MotionKind::kDolly:
        pose = {p0 + forward * spec.dolly_distance * s, spec.root + forward * spec.dolly_distance * s};
        break;
      case MotionKind::kTracking:
        pose = {p0 + spec.travel * s, spec.root + spec.travel * s};
        break;
    }
  }
  return poses;
}

std::vector<LookAtPose> perlin_shake(const std::vector<LookAtPose>& poses, double position_amplitude,
                                     double target_amplitude, double frequency, std::uint64_t seed) {
  require(position_amplitude >= 0.0 && target_amplitude >= 0.0, ErrorCode::kInvalidArgument,
          "shake amplitude must be non-negative");
  if (position_amplitude == 0.0 && target_amplitude == 0.0) return poses;
  const char* names[6] = {"pos.x", "pos.y", "pos.z", "tgt.x", "tgt.y", "tgt.z"};
  std::vector<GradientNoise> channels;
  for (const char* n : names) channels.emplace_back(derive_seed(seed, n));

  std::vector<LookAtPose> out = poses;
  for (std::size_t t = 0; t < poses.size(); ++t) {
    const Mat3 R = look_at(poses[t].position, poses[t].target);
    const double x = static_cast<double>(t) * frequency;
    const Vec3 dp(channels[0](x), channels[1](x), channels[2](x));
    const Vec3 dt(channels[3](x), channels[4](x), channels[5](x));
    // Rows of R are the camera axes in world coordinates.
    out[t].position += position_amplitude * (R.transpose() * dp);
    out[t].target += target_amplitude * (R.transpose() * dt);
  }
  return out;
}

std::vector<CameraParams> sample_trajectory(const CameraMotionSpec& spec, int num_frames, int width,
                                            int height, std::uint64_t seed) {
  const auto poses = perlin_shake(base_poses(spec, num_frames), spec.position_shake, spec.target_shake,
                                  spec.shake_frequency, seed);
  std::vector<CameraParams> cams;
  cams.reserve(poses.size());
  for (const auto& p : poses) {
    cams.push_back(CameraParams::from_hfov(width, height, spec.hfov_deg, look_at(p.position, p.target),
                                           p.position));
  }
  return cams;
}

std::string to_string(RigPattern pattern) {
  switch (pattern) {
    case RigPattern::kIndependent: return "independent";
    case RigPattern::kPairedOrbits: return "paired-orbits";
    case RigPattern::kStaticPlusOrbits: return "static-plus-orbits";
  }
  return "unknown";
}

RigPattern rig_pattern_from_string(const std::string& name) {
  if (name == "independent") return RigPattern::kIndependent;
  if (name == "paired-orbits") return RigPattern::kPairedOrbits;
  if (name == "static-plus-orbits") return RigPattern::kStaticPlusOrbits;
  fail(ErrorCode::kInvalidArgument,
       "unknown rig '" + name + "' (expected independent, paired-orbits or static-plus-orbits)");
}

namespace {

Spherical draw_start(const RigRanges& r, Rng& rng) {
  return Spherical{rng.uniform(r.radius_min, r.radius_max), rng.uniform(r.polar_min, r.polar_max),
                   rng.uniform(0.0, 360.0)};
}

void draw_shake(CameraMotionSpec& spec, const RigRanges& r, Rng& rng) {
  spec.position_shake = rng.uniform(0.0, r.position_shake_max);
  spec.target_shake = rng.uniform(0.0, r.target_shake_max);
}

// Orbit deltas from a given start; may move the start along the polar band
// so the sweep stays inside [polar_min, polar_max + polar_delta_max].
CameraMotionSpec draw_orbit(Spherical start, const RigRanges& r, Rng& rng, bool keep_start) {
  CameraMotionSpec spec;
  spec.kind = MotionKind::kOrbit;
  Spherical d;
  d.radius = rng.sign() * rng.uniform(r.radius_delta_min, r.radius_delta_max);
  if (start.radius + d.radius < r.radius_floor) d.radius = -d.radius;
  d.polar_deg = rng.uniform(r.polar_delta_min, r.polar_delta_max);
  const bool upward = rng.chance(0.5);
  if (upward && start.polar_deg - d.polar_deg >= r.polar_min) {
    d.polar_deg = -d.polar_deg;
  } else if (!keep_start && upward) {
    start.polar_deg += d.polar_deg;
    d.polar_deg = -d.polar_deg;
  } else if (start.polar_deg + d.polar_deg > r.polar_max + r.polar_delta_max) {
    d.polar_deg = -d.polar_deg;
  }
  d.azimuth_deg = rng.sign() * rng.uniform(r.azimuth_delta_min, r.azimuth_delta_max);
  spec.start = start;
  spec.deltas = {d};
  return spec;
}

CameraMotionSpec draw_dolly(const RigRanges& r, Rng& rng) {
  CameraMotionSpec spec;
  spec.kind = MotionKind::kDolly;
  spec.start = draw_start(r, rng);
  const double dist = rng.uniform(r.dolly_distance_min, r.dolly_distance_max);
  const double inward_room = spec.start.radius - r.radius_floor;
  spec.dolly_distance = rng.chance(0.5) ? std::min(dist, inward_room) : -dist;
  return spec;
}

}  // namespace

std::vector<CameraMotionSpec> make_rig(RigPattern pattern, int num_cameras, const Vec3& root,
                                       const RigRanges& ranges, Rng& rng) {
  require(num_cameras >= 1, ErrorCode::kInvalidArgument, "rig needs at least one camera");
  std::vector<CameraMotionSpec> specs;
  auto independent = [&] {
    CameraMotionSpec s = rng.chance(ranges.dolly_fraction) ? draw_dolly(ranges, rng)
                                                           : draw_orbit(draw_start(ranges, rng), ranges, rng, false);
    s.hfov_deg = rng.uniform(ranges.hfov_min, ranges.hfov_max);
    draw_shake(s, ranges, rng);
    return s;
  };

  switch (pattern) {
    case RigPattern::kIndependent:
      for (int c = 0; c < num_cameras; ++c) specs.push_back(independent());
      break;
    case RigPattern::kPairedOrbits:
      for (int c = 0; c + 1 < num_cameras; c += 2) {
        const Spherical start = draw_start(ranges, rng);
        const double hfov = rng.uniform(ranges.hfov_min, ranges.hfov_max);
        for (int k = 0; k < 2; ++k) {
          CameraMotionSpec s = draw_orbit(start, ranges, rng, true);
          s.hfov_deg = hfov;
          draw_shake(s, ranges, rng);
          specs.push_back(s);
        }
      }
      if (num_cameras % 2) specs.push_back(independent());
      break;
    case RigPattern::kStaticPlusOrbits: {
      const int half = num_cameras / 2;
      const double base_azimuth = rng.uniform(0.0, 360.0);
      std::vector<CameraMotionSpec> statics;
      for (int k = 0; k < half; ++k) {
        CameraMotionSpec s;
        s.kind = MotionKind::kStatic;
        s.start = draw_start(ranges, rng);
        s.start.azimuth_deg = base_azimuth + 360.0 * k / half;
        s.hfov_deg = rng.uniform(ranges.hfov_min, ranges.hfov_max);
        draw_shake(s, ranges, rng);
        statics.push_back(s);
      }
      specs = statics;
      for (int k = 0; k < half; ++k) {
        CameraMotionSpec s = draw_orbit(statics[k].start, ranges, rng, true);
        s.hfov_deg = statics[k].hfov_deg;
        draw_shake(s, ranges, rng);
        specs.push_back(s);
      }
      if (num_cameras % 2) specs.push_back(independent());
      break;
    }
  }
  for (auto& s : specs) s.root = root;
  return specs;
}

}  // namespace dpm4d
