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

#include "curation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "error.hpp"

namespace dpm4d {

namespace {

constexpr double kRadToDeg = 57.29577951308232;

struct Box {
  int u0 = std::numeric_limits<int>::max(), v0 = std::numeric_limits<int>::max();
  int u1 = -1, v1 = -1;
  std::uint64_t area() const {
    return u1 < u0 ? 0 : static_cast<std::uint64_t>(u1 - u0 + 1) * static_cast<std::uint64_t>(v1 - v0 + 1);
  }
};

Box bounding_box(const Mask& m) {
  Box b;
  for (int v = 0; v < m.height; ++v) {
    for (int u = 0; u < m.width; ++u) {
      if (!m.at(u, v)) continue;
      b.u0 = std::min(b.u0, u);
      b.u1 = std::max(b.u1, u);
      b.v0 = std::min(b.v0, v);
      b.v1 = std::max(b.v1, v);
    }
  }
  return b;
}

}  // namespace

std::uint64_t Mask::count() const {
  return static_cast<std::uint64_t>(std::count_if(data.begin(), data.end(), [](std::uint8_t x) { return x != 0; }));
}

double mask_iou(const Mask& a, const Mask& b) {
  require(a.width == b.width && a.height == b.height && a.data.size() == b.data.size(),
          ErrorCode::kInvalidArgument, "mask dimensions differ");
  std::uint64_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const bool x = a.data[i] != 0, y = b.data[i] != 0;
    inter += (x && y);
    uni += (x || y);
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

MotionReport motion_filter(const std::vector<Mask>& masks, const MotionFilterOptions& options) {
  require(masks.size() >= 2, ErrorCode::kInvalidArgument, "motion filter needs at least two frames");
  MotionReport r;
  double sum = 0.0;
  for (std::size_t t = 0; t + 1 < masks.size(); ++t) {
    const double iou = mask_iou(masks[t], masks[t + 1]);
    sum += iou;
    if (iou < r.min_iou || r.worst_pair < 0) {
      r.min_iou = iou;
      r.worst_pair = static_cast<int>(t);
    }
    const auto a0 = masks[t].count(), a1 = masks[t + 1].count();
    if (r.keep && (a0 > 0 || a1 > 0)) {
      const double ratio = a0 == 0 ? std::numeric_limits<double>::infinity()
                                   : static_cast<double>(a1) / static_cast<double>(a0);
      if (ratio < options.min_area_ratio || ratio > options.max_area_ratio) {
        r.keep = false;
        r.reason = "area ratio " + std::to_string(ratio) + " between frames " + std::to_string(t) + " and " +
                   std::to_string(t + 1);
      }
    }
  }
  r.mean_iou = sum / static_cast<double>(masks.size() - 1);
  if (r.min_iou < options.iou_threshold) {
    r.keep = false;
    r.reason = "iou " + std::to_string(r.min_iou) + " between frames " + std::to_string(r.worst_pair) + " and " +
               std::to_string(r.worst_pair + 1);
  }
  return r;
}

std::string to_string(OcclusionVerdict verdict) {
  switch (verdict) {
    case OcclusionVerdict::kKeep: return "keep";
    case OcclusionVerdict::kMissingMask: return "missing-mask";
    case OcclusionVerdict::kSmallBox: return "small-bbox";
    case OcclusionVerdict::kLowVisibleRatio: return "low-visible-ratio";
  }
  return "unknown";
}

OcclusionDecision occlusion_filter(const Mask* visibility, const OcclusionOptions& options) {
  OcclusionDecision d;
  if (visibility == nullptr) {
    d.verdict = OcclusionVerdict::kMissingMask;
    return d;
  }
  d.visible = visibility->count();
  if (d.visible == 0) {
    d.verdict = OcclusionVerdict::kMissingMask;
    return d;
  }
  d.bbox_area = bounding_box(*visibility).area();
  d.ratio = static_cast<double>(d.visible) / static_cast<double>(d.bbox_area);
  if (static_cast<double>(d.bbox_area) < options.min_bbox_area) {
    d.verdict = OcclusionVerdict::kSmallBox;
  } else if (d.ratio < options.min_visible_ratio) {
    d.verdict = OcclusionVerdict::kLowVisibleRatio;
  }
  return d;
}

CoverageStats coverage_stats(const std::vector<std::vector<Vec3>>& trajectories, const Vec3& root) {
  double polar_lo = std::numeric_limits<double>::infinity(), polar_hi = -polar_lo;
  double radius_lo = polar_lo, radius_hi = -polar_lo;
  std::vector<std::pair<double, double>> arcs;
  bool full_turn = false;
  bool any = false;
  for (const auto& path : trajectories) {
    double prev_raw = 0.0, unwrapped = 0.0;
    for (std::size_t k = 0; k < path.size(); ++k) {
      const Vec3 d = path[k] - root;
      const double r = d.norm();
      require(r > 1e-12, ErrorCode::kDegenerate, "camera position coincides with the root");
      any = true;
      radius_lo = std::min(radius_lo, r);
      radius_hi = std::max(radius_hi, r);
      const double polar = std::acos(std::clamp(d.z() / r, -1.0, 1.0)) * kRadToDeg;
      polar_lo = std::min(polar_lo, polar);
      polar_hi = std::max(polar_hi, polar);
      const double raw = std::atan2(d.y(), d.x()) * kRadToDeg;
      if (k == 0) {
        unwrapped = raw;
        arcs.push_back({raw, raw});
      } else {
        double step = std::remainder(raw - prev_raw, 360.0);
        const double next = unwrapped + step;
        arcs.push_back({std::min(unwrapped, next), std::max(unwrapped, next)});
        unwrapped = next;
      }
      prev_raw = raw;
    }
    // Sweep extent of the whole path, not just single steps.
    if (!path.empty()) {
      double lo = arcs[arcs.size() - path.size()].first, hi = lo;
      for (std::size_t k = arcs.size() - path.size(); k < arcs.size(); ++k) {
        lo = std::min(lo, arcs[k].first);
        hi = std::max(hi, arcs[k].second);
      }
      if (hi - lo >= 360.0) full_turn = true;
    }
  }
  require(any, ErrorCode::kInvalidArgument, "coverage needs at least one pose");

  CoverageStats s;
  s.polar_span_deg = polar_hi - polar_lo;
  s.radial_span = radius_hi - radius_lo;
  if (full_turn) {
    s.azimuth_span_deg = 360.0;
    return s;
  }
  // Fold every arc into [0, 360) and split at the wrap.
  std::vector<std::pair<double, double>> folded;
  for (auto [lo, hi] : arcs) {
    const double len = hi - lo;
    double start = std::fmod(lo, 360.0);
    if (start < 0.0) start += 360.0;
    if (start + len <= 360.0) {
      folded.push_back({start, start + len});
    } else {
      folded.push_back({start, 360.0});
      folded.push_back({0.0, start + len - 360.0});
    }
  }
  std::sort(folded.begin(), folded.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& a : folded) {
    if (!merged.empty() && a.first <= merged.back().second) {
      merged.back().second = std::max(merged.back().second, a.second);
    } else {
      merged.push_back(a);
    }
  }
  double largest_gap = merged.front().first + 360.0 - merged.back().second;
  for (std::size_t k = 1; k < merged.size(); ++k) {
    largest_gap = std::max(largest_gap, merged[k].first - merged[k - 1].second);
  }
  s.azimuth_span_deg = std::clamp(360.0 - largest_gap, 0.0, 360.0);
  return s;
}

CoverageStats coverage_stats(const std::vector<Vec3>& trajectory, const Vec3& root) {
  return coverage_stats(std::vector<std::vector<Vec3>>{trajectory}, root);
}

}  // namespace dpm4d
