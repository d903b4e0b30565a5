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

#include "query.hpp"

#include <string>

#include "error.hpp"

namespace dpm4d {

namespace {

struct ClipView {
  const ClipHeader& header;
  const Scene& scene;
  const CameraParams& cam;
  const Frame& frame;
};

void check_time(const ClipHeader& h, int t) {
  require(t >= 0 && t < h.num_times, ErrorCode::kOutOfRange,
          "time " + std::to_string(t) + " outside [0, " + std::to_string(h.num_times) + ")");
}

Track track_at(const ClipView& view, int u, int v, const CameraParams& ref) {
  const DepthMap& depth = view.frame.depth;
  if (!depth.in_bounds(u, v)) {
    fail(ErrorCode::kOutOfRange, "pixel (" + std::to_string(u) + ", " + std::to_string(v) + ") out of bounds");
  }
  const BaryRecord& rec = view.frame.bary.at(u, v);
  Track track;
  track.kind = rec.kind();
  const auto T = static_cast<std::size_t>(view.header.num_times);
  switch (rec.kind()) {
    case PixelKind::kInvalid:
      fail(ErrorCode::kNoSurface,
           "no surface at pixel (" + std::to_string(u) + ", " + std::to_string(v) + ")");
    case PixelKind::kStatic:
      track.points.assign(T, ref.to_camera(unproject(depth, view.cam, u, v)));
      break;
    case PixelKind::kDynamic: {
      track.points = view.scene.eval_track(rec.decode());
      for (auto& p : track.points) p = ref.to_camera(p);
      break;
    }
  }
  return track;
}

PointMap dpm_at(const ClipView& view, const CameraParams& ref, int t) {
  check_time(view.header, t);
  const DepthMap& depth = view.frame.depth;
  PointMap pm(depth.width, depth.height);
  for (int v = 0; v < depth.height; ++v) {
    for (int u = 0; u < depth.width; ++u) {
      const std::size_t i = pm.index(u, v);
      const BaryRecord& rec = view.frame.bary.records[i];
      switch (rec.kind()) {
        case PixelKind::kInvalid:
          continue;
        case PixelKind::kStatic:
          pm.points[i] = ref.to_camera(unproject(view.cam, u, v, depth.z[i]));
          break;
        case PixelKind::kDynamic:
          pm.points[i] = ref.to_camera(view.scene.eval_point(rec.decode(), t));
          break;
      }
      pm.valid[i] = 1;
    }
  }
  return pm;
}

void check_frame(const ClipData& clip, int frame) {
  require(frame >= 0 && frame < clip.header.num_frames(), ErrorCode::kOutOfRange,
          "frame " + std::to_string(frame) + " out of range");
}

}  // namespace

Track query_track(const Archive& archive, const Frame& decoded, int frame, int u, int v,
                  const CameraParams& ref) {
  return track_at({archive.header(), archive.scene(), archive.camera(frame), decoded}, u, v, ref);
}

Track query_track(const Archive& archive, int frame, int u, int v, const CameraParams& ref) {
  const Frame f = archive.load_frame(frame);
  return query_track(archive, f, frame, u, v, ref);
}

PointMap query_dpm(const Archive& archive, const Frame& decoded, int frame, const CameraParams& ref,
                   int t) {
  return dpm_at({archive.header(), archive.scene(), archive.camera(frame), decoded}, ref, t);
}

PointMap query_dpm(const Archive& archive, int frame, const CameraParams& ref, int t) {
  const Frame f = archive.load_frame(frame);
  return query_dpm(archive, f, frame, ref, t);
}

PointMap query_dpm(const ClipData& clip, int frame, const CameraParams& ref, int t) {
  check_frame(clip, frame);
  return dpm_at({clip.header, clip.scene, clip.cameras[frame], clip.frames[frame]}, ref, t);
}

Track query_track(const ClipData& clip, int frame, int u, int v, const CameraParams& ref) {
  check_frame(clip, frame);
  return track_at({clip.header, clip.scene, clip.cameras[frame], clip.frames[frame]}, u, v, ref);
}

}  // namespace dpm4d
