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

#include "encoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"
#include "parallel.hpp"

namespace dpm4d {

namespace {

TrianglePoint make_point(const Vec3& p, const Vec3& alpha, const Vec3& a, const Vec3& b,
                         const Vec3& c) {
  TrianglePoint tp;
  tp.alpha = alpha;
  tp.point = alpha[0] * a + alpha[1] * b + alpha[2] * c;
  tp.distance = (p - tp.point).norm();
  return tp;
}

// Parameter of the closest point on segment [a, b], 0 for zero-length segments.
double segment_param(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (!(len2 > 0.0)) return 0.0;
  return std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
}

TrianglePoint closest_on_edges(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const double s_ab = segment_param(p, a, b);
  const double s_bc = segment_param(p, b, c);
  const double s_ca = segment_param(p, c, a);
  TrianglePoint best = make_point(p, Vec3(1.0 - s_ab, s_ab, 0.0), a, b, c);
  TrianglePoint cand = make_point(p, Vec3(0.0, 1.0 - s_bc, s_bc), a, b, c);
  if (cand.distance < best.distance) best = cand;
  cand = make_point(p, Vec3(s_ca, 0.0, 1.0 - s_ca), a, b, c);
  if (cand.distance < best.distance) best = cand;
  return best;
}

}  // namespace

TrianglePoint closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const double scale = std::max(ab.squaredNorm(), ac.squaredNorm());
  if (!(ab.cross(ac).squaredNorm() > 1e-24 * scale * scale)) return closest_on_edges(p, a, b, c);

  const Vec3 ap = p - a;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return make_point(p, Vec3(1, 0, 0), a, b, c);

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return make_point(p, Vec3(0, 1, 0), a, b, c);

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    return make_point(p, Vec3(1.0 - v, v, 0.0), a, b, c);
  }

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return make_point(p, Vec3(0, 0, 1), a, b, c);

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    return make_point(p, Vec3(1.0 - w, 0.0, w), a, b, c);
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return make_point(p, Vec3(0.0, 1.0 - w, w), a, b, c);
  }

  const double sum = va + vb + vc;
  return make_point(p, Vec3(va, vb, vc) / sum, a, b, c);
}

FaceAccel::FaceAccel(const Scene& scene, int t, std::uint32_t face_begin, std::uint32_t face_end)
    : face_begin_(face_begin), time_(t) {
  require(face_begin <= face_end && face_end <= scene.num_faces(), ErrorCode::kInvalidArgument,
          "face range outside the scene union");
  triangles_.reserve(face_end - face_begin);
  for (std::uint32_t f = face_begin; f < face_end; ++f) triangles_.push_back(scene.triangle(f, t));
  if (triangles_.empty()) return;
  std::vector<std::uint32_t> slots(triangles_.size());
  for (std::uint32_t i = 0; i < slots.size(); ++i) slots[i] = i;
  nodes_.reserve(2 * triangles_.size());
  build(slots, 0, slots.size());
}

std::int32_t FaceAccel::build(std::vector<std::uint32_t>& slots, std::size_t begin, std::size_t end) {
  const auto index = static_cast<std::int32_t>(nodes_.size());
  nodes_.emplace_back();
  Eigen::AlignedBox3d box;
  Eigen::AlignedBox3d centroids;
  for (std::size_t i = begin; i < end; ++i) {
    const auto& tri = triangles_[slots[i]];
    for (const auto& v : tri) box.extend(v);
    centroids.extend((tri[0] + tri[1] + tri[2]) / 3.0);
  }
  nodes_[index].box = box;
  if (end - begin == 1) {
    nodes_[index].slot = slots[begin];
    return index;
  }
  int axis = 0;
  centroids.sizes().maxCoeff(&axis);
  const std::size_t mid = begin + (end - begin) / 2;
  auto key = [&](std::uint32_t s) {
    const auto& tri = triangles_[s];
    return tri[0][axis] + tri[1][axis] + tri[2][axis];
  };
  std::nth_element(slots.begin() + begin, slots.begin() + mid, slots.begin() + end,
                   [&](std::uint32_t x, std::uint32_t y) {
                     const double kx = key(x), ky = key(y);
                     return kx < ky || (kx == ky && x < y);
                   });
  const std::int32_t left = build(slots, begin, mid);
  const std::int32_t right = build(slots, mid, end);
  nodes_[index].left = left;
  nodes_[index].right = right;
  return index;
}

std::optional<FitResult> FaceAccel::nearest(const Vec3& p) const {
  if (nodes_.empty()) return std::nullopt;
  struct Candidate {
    std::uint32_t face;
    double residual;
    Vec3 alpha;
  };
  std::vector<Candidate> candidates;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::int32_t> stack{0};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (node.box.exteriorDistance(p) > best + kTieTolerance) continue;
    if (node.left < 0) {
      const auto& tri = triangles_[node.slot];
      const TrianglePoint tp = closest_point_on_triangle(p, tri[0], tri[1], tri[2]);
      if (tp.distance <= best + kTieTolerance) {
        candidates.push_back({face_begin_ + node.slot, tp.distance, tp.alpha});
        best = std::min(best, tp.distance);
      }
      continue;
    }
    const double dl = nodes_[node.left].box.exteriorDistance(p);
    const double dr = nodes_[node.right].box.exteriorDistance(p);
    // Nearer child last so it is popped first.
    if (dl <= dr) {
      stack.push_back(node.right);
      stack.push_back(node.left);
    } else {
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }
  const Candidate* pick = nullptr;
  for (const auto& c : candidates) {
    if (c.residual <= best + kTieTolerance && (!pick || c.face < pick->face)) pick = &c;
  }
  FitResult r;
  r.coord.face = pick->face;
  r.coord.alpha = pick->alpha;
  r.residual = pick->residual;
  return r;
}

FitResult brute_force_fit(const Vec3& p, const Scene& scene, int t, std::uint32_t face_begin,
                          std::uint32_t face_end) {
  require(face_begin < face_end && face_end <= scene.num_faces(), ErrorCode::kInvalidArgument,
          "no faces to fit against");
  std::vector<TrianglePoint> fits;
  fits.reserve(face_end - face_begin);
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t f = face_begin; f < face_end; ++f) {
    const auto tri = scene.triangle(f, t);
    fits.push_back(closest_point_on_triangle(p, tri[0], tri[1], tri[2]));
    best = std::min(best, fits.back().distance);
  }
  for (std::uint32_t f = face_begin; f < face_end; ++f) {
    const TrianglePoint& tp = fits[f - face_begin];
    if (tp.distance <= best + kTieTolerance) return FitResult{BaryCoord{f, tp.alpha}, tp.distance};
  }
  fail(ErrorCode::kInternal, "brute-force fit found no face");
}

FitResult brute_force_fit(const Vec3& p, const Scene& scene, int t) {
  return brute_force_fit(p, scene, t, 0, scene.num_faces());
}

FitResult fit_pixel(const Vec3& p, const FaceAccel& accel) {
  require(p.allFinite(), ErrorCode::kInvalidArgument, "query point is not finite");
  auto r = accel.nearest(p);
  if (!r) fail(ErrorCode::kInvalidArgument, "no faces to fit against");
  return *r;
}

void EncodeReport::merge(const EncodeReport& other) {
  dynamic_pixels += other.dynamic_pixels;
  static_pixels += other.static_pixels;
  invalid_pixels += other.invalid_pixels;
  rejected_pixels += other.rejected_pixels;
  worst_residual = std::max(worst_residual, other.worst_residual);
  worst_rejected_residual = std::max(worst_rejected_residual, other.worst_rejected_residual);
  for (std::size_t i = 0; i < histogram.size(); ++i) histogram[i] += other.histogram[i];
}

std::string EncodeReport::bin_label(std::size_t bin) {
  if (bin == 0) return "<1e-9";
  if (bin + 1 == std::tuple_size_v<decltype(histogram)>) return ">=1e-3";
  return "<1e-" + std::to_string(9 - bin);
}

namespace {

std::size_t residual_bin(double r) {
  double edge = 1e-9;
  for (std::size_t bin = 0; bin < 7; ++bin, edge *= 10.0) {
    if (r < edge) return bin;
  }
  return 7;
}

}  // namespace

BaryMap encode_frame(const DepthMap& depth, const std::vector<std::uint32_t>* seg,
                     const CameraParams& cam, const Scene& scene, int t,
                     const EncodeOptions& options, EncodeReport* report) {
  require(depth.width == cam.width && depth.height == cam.height, ErrorCode::kInvalidArgument,
          "depth and camera dims differ");
  require(!seg || seg->size() == depth.z.size(), ErrorCode::kInvalidArgument,
          "segmentation and depth dims differ");
  require(t >= 0 && t < scene.num_frames(), ErrorCode::kOutOfRange, "encode time out of range");

  // Per-object accelerators for the segmented path, one whole-scene
  // accelerator otherwise.
  std::vector<std::optional<FaceAccel>> per_mesh(scene.meshes().size());
  std::optional<FaceAccel> whole;
  if (seg) {
    for (std::uint32_t id : *seg) {
      if (id == 0) continue;
      const int m = scene.find_object(id);
      require(m >= 0, ErrorCode::kCorrupt, "segmentation id " + std::to_string(id) + " has no mesh");
      if (!per_mesh[m]) per_mesh[m].emplace(scene, t, scene.face_begin(m), scene.face_end(m));
    }
  } else if (scene.num_faces() > 0) {
    whole.emplace(scene, t);
  }

  BaryMap out(depth.width, depth.height);
  std::vector<EncodeReport> row_reports(static_cast<std::size_t>(depth.height));
  parallel_for(static_cast<std::size_t>(depth.height), [&](std::size_t row) {
    const int v = static_cast<int>(row);
    EncodeReport& rep = row_reports[row];
    for (int u = 0; u < depth.width; ++u) {
      const std::size_t i = depth.index(u, v);
      if (!depth.valid(i)) {
        out.records[i] = BaryRecord::invalid();
        ++rep.invalid_pixels;
        continue;
      }
      const FaceAccel* accel = nullptr;
      if (seg) {
        const std::uint32_t id = (*seg)[i];
        if (id != 0) accel = &*per_mesh[scene.find_object(id)];
      } else if (whole) {
        accel = &*whole;
      }
      if (!accel || accel->num_faces() == 0) {
        out.records[i] = BaryRecord::static_pixel();
        ++rep.static_pixels;
        continue;
      }
      const Vec3 qbar = unproject(cam, u, v, depth.z[i]);
      const FitResult fit = fit_pixel(qbar, *accel);
      const bool animated = !scene.meshes()[scene.locate(fit.coord.face).mesh].is_static;
      if (!seg && !animated) {
        out.records[i] = BaryRecord::static_pixel();
        ++rep.static_pixels;
        continue;
      }
      ++rep.histogram[residual_bin(fit.residual)];
      if (fit.residual <= options.surface_tolerance) {
        out.records[i] = BaryRecord::dynamic(fit.coord);
        ++rep.dynamic_pixels;
        rep.worst_residual = std::max(rep.worst_residual, fit.residual);
      } else {
        out.records[i] = BaryRecord::static_pixel();
        ++rep.static_pixels;
        ++rep.rejected_pixels;
        rep.worst_rejected_residual = std::max(rep.worst_rejected_residual, fit.residual);
      }
    }
  }, options.workers);

  if (report) {
    for (const auto& r : row_reports) report->merge(r);
  }
  return out;
}

}  // namespace dpm4d
