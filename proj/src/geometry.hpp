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

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace dpm4d {

using Vec3 = Eigen::Vector3d;
using Vec3f = Eigen::Vector3f;
using Mat3 = Eigen::Matrix3d;

// Pinhole camera. R rotates world axes into camera axes and o is the camera
// centre in world coordinates, so x_cam = R (x_world - o). The camera looks
// down +z with +x right and +y down. K maps camera rays to continuous pixel
// coordinates in which the centre of pixel (u, v) sits at (u + 0.5, v + 0.5).
struct CameraParams {
  Mat3 K = Mat3::Identity();
  Mat3 R = Mat3::Identity();
  Vec3 o = Vec3::Zero();
  int width = 0;
  int height = 0;

  // Square pixels, principal point at the image centre.
  static CameraParams from_hfov(int width, int height, double hfov_deg,
                                const Mat3& R = Mat3::Identity(),
                                const Vec3& o = Vec3::Zero());

  // The frame whose camera axes coincide with the world axes.
  static CameraParams world_frame(int width = 0, int height = 0);

  double hfov_deg() const;
  double focal() const { return K(0, 0); }

  // Throws kInvalidArgument when R is not a rotation or K is malformed.
  void validate() const;

  Vec3 to_camera(const Vec3& world) const { return R * (world - o); }
  Vec3 to_world(const Vec3& cam) const { return R.transpose() * cam + o; }
};

struct FrameId {
  int camera = 0;
  int time = 0;

  // Frames are laid out time-major: all cameras of t = 0, then t = 1, ...
  int flat(int num_cameras) const { return time * num_cameras + camera; }
  static FrameId from_flat(int flat, int num_cameras) {
    return FrameId{flat % num_cameras, flat / num_cameras};
  }
  bool operator==(const FrameId&) const = default;
};

struct PointMap {
  int width = 0;
  int height = 0;
  std::vector<Vec3> points;
  std::vector<std::uint8_t> valid;

  PointMap() = default;
  PointMap(int w, int h)
      : width(w), height(h), points(static_cast<std::size_t>(w) * h, Vec3::Zero()),
        valid(static_cast<std::size_t>(w) * h, 0) {}

  std::size_t index(int u, int v) const { return static_cast<std::size_t>(v) * width + u; }
  std::size_t size() const { return points.size(); }
};

// Camera-frame z per pixel. A sample is valid iff it is finite and > 0;
// no-surface pixels store 0.
struct DepthMap {
  int width = 0;
  int height = 0;
  std::vector<float> z;

  DepthMap() = default;
  DepthMap(int w, int h) : width(w), height(h), z(static_cast<std::size_t>(w) * h, 0.0f) {}

  std::size_t index(int u, int v) const { return static_cast<std::size_t>(v) * width + u; }
  bool in_bounds(int u, int v) const { return u >= 0 && v >= 0 && u < width && v < height; }
  bool valid(std::size_t i) const { return std::isfinite(z[i]) && z[i] > 0.0f; }
  bool valid(int u, int v) const { return valid(index(u, v)); }
};

struct Projection {
  Eigen::Vector2d pixel;  // continuous; integer values are pixel centres
  double z = 0.0;
};

// World-frame point seen at pixel (u, v). Throws kOutOfRange for pixels
// outside the image and kNoSurface for invalid depth samples.
Vec3 unproject(const DepthMap& depth, const CameraParams& cam, int u, int v);

// Same as above for an explicit depth value; no validity checks.
Vec3 unproject(const CameraParams& cam, double u, double v, double z);

// Throws kDegenerate when the point is not strictly in front of the camera.
Projection project(const Vec3& point, const CameraParams& cam);

// Re-expresses every valid point of pm, given in the frame of `from`, in the
// frame of `to`. Invalid entries are copied through untouched.
PointMap change_reference(const PointMap& pm, const CameraParams& from, const CameraParams& to);

// Point map of a depth map expressed in its own camera frame.
PointMap depth_to_camera_points(const DepthMap& depth, const CameraParams& cam);

}  // namespace dpm4d
