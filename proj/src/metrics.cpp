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

#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "error.hpp"

namespace dpm4d {

namespace {

constexpr double kRadToDeg = 57.29577951308232;

}  // namespace

Similarity umeyama_align(const std::vector<Vec3>& pred, const std::vector<Vec3>& gt, bool with_scale) {
  require(pred.size() == gt.size(), ErrorCode::kInvalidArgument, "alignment sets differ in size");
  require(pred.size() >= 3, ErrorCode::kDegenerate, "alignment needs at least three correspondences");
  const double n = static_cast<double>(pred.size());
  Vec3 mu_x = Vec3::Zero(), mu_y = Vec3::Zero();
  for (std::size_t i = 0; i < pred.size(); ++i) {
    mu_x += pred[i];
    mu_y += gt[i];
  }
  mu_x /= n;
  mu_y /= n;
  Mat3 cov = Mat3::Zero(), scatter_x = Mat3::Zero(), scatter_y = Mat3::Zero();
  double var_x = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const Vec3 x = pred[i] - mu_x, y = gt[i] - mu_y;
    cov += y * x.transpose();
    scatter_x += x * x.transpose();
    scatter_y += y * y.transpose();
    var_x += x.squaredNorm();
  }
  cov /= n;
  var_x /= n;
  auto collinear = [](const Mat3& s) {
    const Vec3 sv = Eigen::JacobiSVD<Mat3>(s).singularValues();
    return !(sv[0] > 0.0) || sv[1] <= 1e-12 * sv[0];
  };
  require(!collinear(scatter_x) && !collinear(scatter_y), ErrorCode::kDegenerate,
          "alignment input is collinear or coincident");

  Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 S = Mat3::Identity();
  if (svd.matrixU().determinant() * svd.matrixV().determinant() < 0.0) S(2, 2) = -1.0;
  Similarity out;
  out.R = svd.matrixU() * S * svd.matrixV().transpose();
  out.scale = with_scale ? (svd.singularValues().asDiagonal() * S).trace() / var_x : 1.0;
  out.t = mu_y - out.scale * out.R * mu_x;
  return out;
}

std::string to_string(AlignMode mode) {
  switch (mode) {
    case AlignMode::kNone: return "none";
    case AlignMode::kRigid: return "se3";
    case AlignMode::kSimilarity: return "sim3";
  }
  return "unknown";
}

AlignMode align_mode_from_string(const std::string& name) {
  if (name == "none") return AlignMode::kNone;
  if (name == "se3") return AlignMode::kRigid;
  if (name == "sim3") return AlignMode::kSimilarity;
  fail(ErrorCode::kInvalidArgument, "unknown alignment '" + name + "' (expected none, se3 or sim3)");
}

void Trajectory::validate() const {
  require(timestamps.size() == poses.size(), ErrorCode::kInvalidArgument, "timestamp and pose counts differ");
  for (std::size_t i = 0; i < poses.size(); ++i) {
    const Mat3& R = poses[i].R;
    require((R * R.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-6 &&
                std::abs(R.determinant() - 1.0) < 1e-6,
            ErrorCode::kInvalidArgument, "pose " + std::to_string(i) + " has a non-rotation matrix");
    require(poses[i].t.allFinite(), ErrorCode::kInvalidArgument, "pose " + std::to_string(i) + " is not finite");
    if (i > 0) {
      require(timestamps[i] > timestamps[i - 1], ErrorCode::kInvalidArgument,
              "timestamps must increase strictly");
    }
  }
}

AteResult ate(const Trajectory& pred, const Trajectory& gt, AlignMode align) {
  pred.validate();
  gt.validate();
  require(pred.poses.size() == gt.poses.size(), ErrorCode::kInvalidArgument, "trajectory lengths differ");
  require(!gt.poses.empty(), ErrorCode::kInvalidArgument, "empty trajectory");
  std::vector<Vec3> p, g;
  for (std::size_t i = 0; i < gt.poses.size(); ++i) {
    p.push_back(pred.poses[i].t);
    g.push_back(gt.poses[i].t);
  }
  AteResult r;
  if (align != AlignMode::kNone) r.alignment = umeyama_align(p, g, align == AlignMode::kSimilarity);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += (r.alignment.apply(p[i]) - g[i]).squaredNorm();
  r.rmse = std::sqrt(sum / static_cast<double>(p.size()));
  return r;
}

double rotation_angle_deg(const Mat3& R) {
  const double c = 0.5 * (R.trace() - 1.0);
  const Vec3 axis(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
  return std::atan2(0.5 * axis.norm(), c) * kRadToDeg;
}

RpeResult rpe(const Trajectory& pred, const Trajectory& gt) {
  pred.validate();
  gt.validate();
  require(pred.poses.size() == gt.poses.size(), ErrorCode::kInvalidArgument, "trajectory lengths differ");
  require(gt.poses.size() >= 2, ErrorCode::kInvalidArgument, "relative pose error needs two poses");
  RpeResult r;
  for (std::size_t i = 0; i + 1 < gt.poses.size(); ++i) {
    const Pose dg = gt.poses[i].inverse() * gt.poses[i + 1];
    const Pose dp = pred.poses[i].inverse() * pred.poses[i + 1];
    const Pose e = dg.inverse() * dp;
    r.translation += e.t.norm();
    r.rotation_deg += rotation_angle_deg(e.R);
    ++r.pairs;
  }
  r.translation /= static_cast<double>(r.pairs);
  r.rotation_deg /= static_cast<double>(r.pairs);
  return r;
}

TrackMetrics track_metrics(const TrackSet& pred, const TrackSet& gt, const TrackMetricOptions& options) {
  require(pred.num_tracks == gt.num_tracks && pred.num_times == gt.num_times &&
              pred.points.size() == gt.points.size() && pred.valid.size() == gt.valid.size() &&
              gt.points.size() == gt.valid.size(),
          ErrorCode::kInvalidArgument, "track sets differ in shape");
  require(!options.thresholds.empty(), ErrorCode::kInvalidArgument, "no APD thresholds");
  TrackMetrics m;
  std::vector<std::uint64_t> hits(options.thresholds.size(), 0);
  double err_sum = 0.0;
  std::uint64_t matched = 0;
  double track_sum = 0.0;
  std::uint64_t tracks = 0;
  for (int k = 0; k < gt.num_tracks; ++k) {
    double sum = 0.0;
    std::uint64_t n = 0;
    for (int t = 0; t < gt.num_times; ++t) {
      const std::size_t i = gt.index(k, t);
      if (!gt.valid[i]) continue;
      ++m.points;
      if (!pred.valid[i] || !pred.points[i].allFinite()) {
        ++m.missing;
        continue;
      }
      const double e = (pred.points[i] - gt.points[i]).norm();
      const double unit = options.scale == ThresholdScale::kDepth ? std::abs(gt.points[i].z()) : 1.0;
      for (std::size_t j = 0; j < options.thresholds.size(); ++j) hits[j] += e < options.thresholds[j] * unit;
      sum += e;
      ++n;
    }
    err_sum += sum;
    matched += n;
    if (n > 0) {
      track_sum += sum / static_cast<double>(n);
      ++tracks;
    }
  }
  require(m.points > 0, ErrorCode::kInvalidArgument, "no valid ground-truth track points");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  m.epe = matched ? err_sum / static_cast<double>(matched) : nan;
  m.epe_per_track = tracks ? track_sum / static_cast<double>(tracks) : nan;
  for (auto h : hits) m.within.push_back(100.0 * static_cast<double>(h) / static_cast<double>(m.points));
  double total = 0.0;
  for (double w : m.within) total += w;
  m.apd = total / static_cast<double>(m.within.size());
  return m;
}

std::string to_string(DepthAlign mode) {
  switch (mode) {
    case DepthAlign::kNone: return "none";
    case DepthAlign::kScale: return "scale";
    case DepthAlign::kScaleShift: return "scale-shift";
  }
  return "unknown";
}

DepthAlign depth_align_from_string(const std::string& name) {
  if (name == "none") return DepthAlign::kNone;
  if (name == "scale") return DepthAlign::kScale;
  if (name == "scale-shift") return DepthAlign::kScaleShift;
  fail(ErrorCode::kInvalidArgument, "unknown depth alignment '" + name + "' (expected none, scale or scale-shift)");
}

DepthMetrics depth_metrics(const std::vector<DepthMap>& pred, const std::vector<DepthMap>& gt, DepthAlign align) {
  require(pred.size() == gt.size() && !gt.empty(), ErrorCode::kInvalidArgument, "depth sequences differ in length");
  std::vector<std::pair<double, double>> samples;  // (pred, gt)
  for (std::size_t f = 0; f < gt.size(); ++f) {
    require(pred[f].width == gt[f].width && pred[f].height == gt[f].height && pred[f].z.size() == gt[f].z.size(),
            ErrorCode::kInvalidArgument, "depth maps differ in size");
    for (std::size_t i = 0; i < gt[f].z.size(); ++i) {
      const float g = gt[f].z[i];
      require(!(std::isfinite(g) && g < 0.0f), ErrorCode::kInvalidArgument, "negative ground-truth depth");
      if (!gt[f].valid(i) || !std::isfinite(pred[f].z[i])) continue;
      samples.emplace_back(pred[f].z[i], g);
    }
  }
  require(!samples.empty(), ErrorCode::kInvalidArgument, "no valid depth pixels");
  DepthMetrics m;
  m.pixels = samples.size();
  if (align == DepthAlign::kScale) {
    double pg = 0.0, pp = 0.0;
    for (auto [p, g] : samples) {
      pg += p * g;
      pp += p * p;
    }
    require(pp > 0.0, ErrorCode::kDegenerate, "predicted depth is identically zero");
    m.scale = pg / pp;
  } else if (align == DepthAlign::kScaleShift) {
    double mp = 0.0, mg = 0.0;
    for (auto [p, g] : samples) {
      mp += p;
      mg += g;
    }
    mp /= static_cast<double>(samples.size());
    mg /= static_cast<double>(samples.size());
    double pg = 0.0, pp = 0.0;
    for (auto [p, g] : samples) {
      pg += (p - mp) * (g - mg);
      pp += (p - mp) * (p - mp);
    }
    require(pp > 0.0, ErrorCode::kDegenerate, "predicted depth is constant");
    m.scale = pg / pp;
    m.shift = mg - m.scale * mp;
  }
  double rel = 0.0;
  std::uint64_t good = 0;
  for (auto [p, g] : samples) {
    const double a = m.scale * p + m.shift;
    rel += std::abs(a - g) / g;
    if (a > 0.0 && std::max(a / g, g / a) < 1.25) ++good;
  }
  m.abs_rel = rel / static_cast<double>(samples.size());
  m.delta_125 = 100.0 * static_cast<double>(good) / static_cast<double>(samples.size());
  return m;
}

}  // namespace dpm4d
