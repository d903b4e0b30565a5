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

#include "geometry.hpp"

#include <cmath>
#include <sstream>

#include "error.hpp"

namespace dpm4d {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

CameraParams CameraParams::from_hfov(int width, int height, double hfov_deg, const Mat3& R,
                                     const Vec3& o) {
  require(width > 0 && height > 0, ErrorCode::kInvalidArgument, "camera dims must be positive");
  require(hfov_deg > 0.0 && hfov_deg < 180.0, ErrorCode::kInvalidArgument,
          "hfov must lie in (0, 180) degrees");
  CameraParams cam;
  const double f = width / (2.0 * std::tan(hfov_deg * kPi / 360.0));
  cam.K << f, 0.0, width / 2.0,
           0.0, f, height / 2.0,
           0.0, 0.0, 1.0;
  cam.R = R;
  cam.o = o;
  cam.width = width;
  cam.height = height;
  return cam;
}

CameraParams CameraParams::world_frame(int width, int height) {
  CameraParams cam;
  cam.width = width;
  cam.height = height;
  return cam;
}

double CameraParams::hfov_deg() const {
  return 2.0 * std::atan(width / (2.0 * K(0, 0))) * 180.0 / kPi;
}

void CameraParams::validate() const {
  const double orth = (R * R.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (!(orth <= 1e-6) || !(std::abs(R.determinant() - 1.0) <= 1e-6)) {
    std::ostringstream msg;
    msg << "camera rotation is not orthonormal with det +1 (orthogonality error " << orth << ")";
    fail(ErrorCode::kInvalidArgument, msg.str());
  }
  const bool upper = K(1, 0) == 0.0 && K(2, 0) == 0.0 && K(2, 1) == 0.0 && K(2, 2) == 1.0;
  require(upper && K(0, 1) == 0.0, ErrorCode::kInvalidArgument,
          "intrinsics must be upper-triangular with zero skew");
  require(K(0, 0) > 0.0 && K(1, 1) > 0.0, ErrorCode::kInvalidArgument,
          "focal lengths must be positive");
  require(o.allFinite(), ErrorCode::kInvalidArgument, "camera centre must be finite");
}

Vec3 unproject(const CameraParams& cam, double u, double v, double z) {
  const Vec3 pix(u + 0.5, v + 0.5, 1.0);
  const Vec3 ray = cam.K.triangularView<Eigen::Upper>().solve(pix);
  return cam.R.transpose() * (z * ray) + cam.o;
}

Vec3 unproject(const DepthMap& depth, const CameraParams& cam, int u, int v) {
  if (!depth.in_bounds(u, v)) {
    std::ostringstream msg;
    msg << "pixel (" << u << ", " << v << ") outside " << depth.width << "x" << depth.height;
    fail(ErrorCode::kOutOfRange, msg.str());
  }
  if (!depth.valid(u, v)) {
    std::ostringstream msg;
    msg << "no surface at pixel (" << u << ", " << v << ")";
    fail(ErrorCode::kNoSurface, msg.str());
  }
  return unproject(cam, u, v, depth.z[depth.index(u, v)]);
}

Projection project(const Vec3& point, const CameraParams& cam) {
  const Vec3 pc = cam.to_camera(point);
  if (!(pc.z() > 0.0)) fail(ErrorCode::kDegenerate, "point is behind the camera");
  const Vec3 h = cam.K * pc;
  Projection p;
  p.pixel = Eigen::Vector2d(h.x() / h.z() - 0.5, h.y() / h.z() - 0.5);
  p.z = pc.z();
  return p;
}

PointMap change_reference(const PointMap& pm, const CameraParams& from, const CameraParams& to) {
  // x_to = R_to (R_from^T x + o_from - o_to)
  const Mat3 rot = to.R * from.R.transpose();
  const Vec3 shift = to.R * (from.o - to.o);
  PointMap out = pm;
  for (std::size_t i = 0; i < pm.size(); ++i) {
    if (pm.valid[i]) out.points[i] = rot * pm.points[i] + shift;
  }
  return out;
}

PointMap depth_to_camera_points(const DepthMap& depth, const CameraParams& cam) {
  PointMap pm(depth.width, depth.height);
  for (int v = 0; v < depth.height; ++v) {
    for (int u = 0; u < depth.width; ++u) {
      const std::size_t i = depth.index(u, v);
      if (!depth.valid(i)) continue;
      pm.points[i] = cam.to_camera(unproject(cam, u, v, depth.z[i]));
      pm.valid[i] = 1;
    }
  }
  return pm;
}

}  // namespace dpm4d
