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

#include "recon.hpp"

#include <Eigen/Eigenvalues>

#include "error.hpp"
#include "kdtree.hpp"

namespace dpm4d {

std::vector<Vec3> estimate_normals(const std::vector<Vec3>& points, int neighbors) {
  require(points.size() >= 3, ErrorCode::kDegenerate, "normal estimation needs at least three points");
  require(neighbors >= 3, ErrorCode::kInvalidArgument, "normal estimation needs at least three neighbours");
  const KdTree tree(points);
  std::vector<Vec3> normals(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto nn = tree.k_nearest(points[i], static_cast<std::size_t>(neighbors));
    Vec3 mean = Vec3::Zero();
    for (const auto& n : nn) mean += points[n.index];
    mean /= static_cast<double>(nn.size());
    Mat3 cov = Mat3::Zero();
    for (const auto& n : nn) {
      const Vec3 d = points[n.index] - mean;
      cov += d * d.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
    normals[i] = eig.eigenvectors().col(0).normalized();
  }
  return normals;
}

namespace {

struct Directed {
  double mean_distance = 0.0;
  double mean_cos = 0.0;
};

Directed directed(const std::vector<Vec3>& from, const std::vector<Vec3>& from_normals, const KdTree& to_tree,
                  const std::vector<Vec3>& to_normals) {
  Directed d;
  for (std::size_t i = 0; i < from.size(); ++i) {
    const Neighbor n = to_tree.nearest(from[i]);
    d.mean_distance += std::sqrt(n.squared_distance);
    d.mean_cos += std::abs(from_normals[i].dot(to_normals[n.index]));
  }
  d.mean_distance /= static_cast<double>(from.size());
  d.mean_cos /= static_cast<double>(from.size());
  return d;
}

}  // namespace

ReconMetrics recon_metrics(const PointCloud& pred, const PointCloud& gt, int neighbors) {
  require(!pred.points.empty() && !gt.points.empty(), ErrorCode::kInvalidArgument, "empty point cloud");
  for (const PointCloud* c : {&pred, &gt}) {
    require(c->normals.empty() || c->normals.size() == c->points.size(), ErrorCode::kInvalidArgument,
            "normal count differs from point count");
  }
  const std::vector<Vec3> pn = pred.normals.empty() ? estimate_normals(pred.points, neighbors) : pred.normals;
  const std::vector<Vec3> gn = gt.normals.empty() ? estimate_normals(gt.points, neighbors) : gt.normals;
  const KdTree pred_tree(pred.points), gt_tree(gt.points);
  const Directed acc = directed(pred.points, pn, gt_tree, gn);
  const Directed comp = directed(gt.points, gn, pred_tree, pn);
  return ReconMetrics{acc.mean_distance, comp.mean_distance, 0.5 * (acc.mean_cos + comp.mean_cos)};
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> mutual_matches(const PointMap& source, const PointMap& target) {
  std::vector<Vec3> src, tgt;
  std::vector<std::uint32_t> src_pixel, tgt_pixel;
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (!source.valid[i]) continue;
    src.push_back(source.points[i]);
    src_pixel.push_back(static_cast<std::uint32_t>(i));
  }
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (!target.valid[i]) continue;
    tgt.push_back(target.points[i]);
    tgt_pixel.push_back(static_cast<std::uint32_t>(i));
  }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  if (src.empty() || tgt.empty()) return out;
  const KdTree src_tree(src), tgt_tree(tgt);
  for (std::size_t k = 0; k < tgt.size(); ++k) {
    const std::uint32_t v = src_tree.nearest(tgt[k]).index;
    if (tgt_tree.nearest(src[v]).index == k) out.emplace_back(tgt_pixel[k], src_pixel[v]);
  }
  return out;
}

CorrespondenceResult correspondence_error(const std::vector<PointMap>& pred_target,
                                          const std::vector<PointMap>& gt_source,
                                          const std::vector<PointMap>& gt_target) {
  require(pred_target.size() == gt_source.size() && gt_source.size() == gt_target.size(),
          ErrorCode::kInvalidArgument, "point map sequences differ in length");
  CorrespondenceResult r;
  double total = 0.0;
  int frames = 0;
  for (std::size_t f = 0; f < gt_target.size(); ++f) {
    require(pred_target[f].size() == gt_target[f].size() && pred_target[f].width == gt_target[f].width,
            ErrorCode::kInvalidArgument, "predicted and true target maps differ in size");
    const auto matches = mutual_matches(gt_source[f], gt_target[f]);
    double sum = 0.0;
    std::uint64_t used = 0;
    for (const auto& [u, v] : matches) {
      (void)v;
      if (!pred_target[f].valid[u] || !pred_target[f].points[u].allFinite()) {
        ++r.missing;
        continue;
      }
      sum += (gt_target[f].points[u] - pred_target[f].points[u]).norm();
      ++used;
    }
    r.matches.push_back(used);
    if (used == 0) {
      r.empty_frames.push_back(static_cast<int>(f));
      continue;
    }
    total += sum / static_cast<double>(used);
    ++frames;
  }
  require(frames > 0, ErrorCode::kInvalidArgument, "no frame has mutual correspondences");
  r.error = total / frames;
  return r;
}

}  // namespace dpm4d
