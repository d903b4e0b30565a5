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

#include "generate.hpp"

#include "error.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace dpm4d {

using nlohmann::json;

namespace {

json spec_json(const CameraMotionSpec& s) {
  json deltas = json::array();
  for (const auto& d : s.deltas) deltas.push_back({d.radius, d.polar_deg, d.azimuth_deg});
  return json{{"motion", to_string(s.kind)},
              {"start", {s.start.radius, s.start.polar_deg, s.start.azimuth_deg}},
              {"deltas", deltas},
              {"dolly_distance", s.dolly_distance},
              {"position_shake", s.position_shake},
              {"target_shake", s.target_shake},
              {"hfov_deg", s.hfov_deg}};
}

}  // namespace

GeneratedClip generate_clip(const GenerateConfig& config) {
  config.validate();
  const int T = config.num_times, C = config.num_cameras, N = T * C;

  SceneSpec scene_spec = config.scene;
  scene_spec.seed = derive_seed(config.seed, "scene");
  ComposedScene composed = compose_scene(scene_spec, T);

  Rng camera_rng(derive_seed(config.seed, "cameras"));
  GeneratedClip out;
  out.rig = make_rig(config.rig, C, composed.root, config.ranges, camera_rng);
  const std::uint64_t shake_seed = derive_seed(config.seed, "shake");
  std::vector<std::vector<CameraParams>> paths(C);
  for (int c = 0; c < C; ++c) {
    paths[c] = sample_trajectory(out.rig[c], T, config.width, config.height, shake_seed + static_cast<std::uint64_t>(c));
  }

  ClipData& clip = out.clip;
  clip.header.width = config.width;
  clip.header.height = config.height;
  clip.header.num_times = T;
  clip.header.num_cameras = C;
  clip.header.has_rgb = config.with_rgb;
  clip.cameras.resize(N);
  for (int i = 0; i < N; ++i) {
    const FrameId id = FrameId::from_flat(i, C);
    clip.cameras[i] = paths[id.camera][id.time];
  }
  clip.scene = std::move(composed.scene);
  out.objects = composed.objects;

  out.raster.resize(N);
  clip.frames.resize(N);
  std::vector<EncodeReport> reports(N);
  EncodeOptions per_frame = config.encode;
  per_frame.workers = 1;
  parallel_for(
      static_cast<std::size_t>(N),
      [&](std::size_t i) {
        const int t = FrameId::from_flat(static_cast<int>(i), C).time;
        out.raster[i] = rasterize(clip.scene, clip.cameras[i], t, config.with_rgb);
        Frame& f = clip.frames[i];
        f.depth = out.raster[i].depth;
        f.seg = out.raster[i].seg;
        f.rgb = out.raster[i].rgb;
        f.bary = encode_frame(f.depth, &f.seg, clip.cameras[i], clip.scene, t, per_frame, &reports[i]);
      },
      config.workers);
  for (const auto& r : reports) out.report.merge(r);

  json objects = json::array();
  for (const auto& o : out.objects) {
    objects.push_back({{"id", o.object_id},
                       {"kind", to_string(o.kind)},
                       {"footprint", {o.footprint.x0, o.footprint.y0, o.footprint.w, o.footprint.h}},
                       {"centre", {o.centre.x(), o.centre.y(), o.centre.z()}}});
  }
  json cameras = json::array();
  for (const auto& s : out.rig) cameras.push_back(spec_json(s));
  json meta{{"generator", "dpm4d"},
            {"config", to_json(config)},
            {"root", {composed.root.x(), composed.root.y(), composed.root.z()}},
            {"objects", objects},
            {"rig", cameras},
            {"encode_report", to_json(out.report)},
            {"captions", json::array()}};
  clip.metadata_json = meta.dump();
  clip.validate();
  return out;
}

}  // namespace dpm4d
