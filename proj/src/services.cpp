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

#include "services.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "error.hpp"
#include "query.hpp"
#include "scene_sim.hpp"

namespace dpm4d {

using nlohmann::json;

namespace {

const float kNaN = std::numeric_limits<float>::quiet_NaN();

json estimate_json(const StorageEstimate& e) {
  return json{{"pixel_bytes", e.pixel_bytes}, {"vertex_bytes", e.vertex_bytes}, {"total_bytes", e.total()}};
}

json parse_metadata(const Archive& archive) {
  json meta = json::parse(archive.metadata_json(), nullptr, false);
  return meta.is_discarded() || !meta.is_object() ? json::object() : meta;
}

// Request field access with type checks; every key a task reads is listed
// so unknown keys can be rejected.
class Request {
 public:
  Request(const json& j, std::set<std::string> allowed) : j_(j) {
    if (!j.is_object()) fail(ErrorCode::kSchema, "request must be a JSON object");
    allowed.insert("task");
    for (const auto& [key, value] : j.items()) {
      (void)value;
      if (!allowed.count(key)) fail(ErrorCode::kSchema, "request: unknown key '" + key + "'");
    }
  }

  int integer(const std::string& key, int fallback) const {
    if (!j_.contains(key)) return fallback;
    if (!j_[key].is_number_integer()) fail(ErrorCode::kSchema, "request: '" + key + "' must be an integer");
    return j_[key].get<int>();
  }
  double number(const std::string& key, double fallback) const {
    if (!j_.contains(key)) return fallback;
    if (!j_[key].is_number()) fail(ErrorCode::kSchema, "request: '" + key + "' must be a number");
    return j_[key].get<double>();
  }
  std::string string(const std::string& key, const std::string& fallback) const {
    if (!j_.contains(key)) {
      if (fallback.empty()) fail(ErrorCode::kSchema, "request: missing '" + key + "'");
      return fallback;
    }
    if (!j_[key].is_string()) fail(ErrorCode::kSchema, "request: '" + key + "' must be a string");
    return j_[key].get<std::string>();
  }
  bool has(const std::string& key) const { return j_.contains(key); }
  const json& raw(const std::string& key) const { return j_.at(key); }

 private:
  const json& j_;
};

void check_camera(const Archive& a, int camera) {
  require(camera >= 0 && camera < a.header().num_cameras, ErrorCode::kOutOfRange,
          "camera " + std::to_string(camera) + " out of range");
}

void check_frame(const Archive& a, int frame) {
  require(frame >= 0 && frame < a.header().num_frames(), ErrorCode::kOutOfRange,
          "frame " + std::to_string(frame) + " out of range");
}

void expect_shape(const Tensor& t, const std::vector<std::uint64_t>& shape, const std::string& what) {
  if (t.shape != shape) {
    std::string want, got;
    for (auto d : shape) want += (want.empty() ? "" : "x") + std::to_string(d);
    for (auto d : t.shape) got += (got.empty() ? "" : "x") + std::to_string(d);
    fail(ErrorCode::kSchema, what + ": expected shape " + want + ", got " + got);
  }
}

std::string task_of(const json& request) {
  if (!request.is_object() || !request.contains("task") || !request["task"].is_string()) {
    fail(ErrorCode::kSchema, "request: missing string 'task'");
  }
  return request["task"].get<std::string>();
}

}  // namespace

json archive_stats(const Archive& a) {
  const ClipHeader& h = a.header();
  json sections = json::object();
  for (const SectionInfo& s : a.sections()) {
    const std::string tag(s.tag, 4);
    json& e = sections[tag];
    if (e.is_null()) e = json{{"count", 0}, {"stored_bytes", 0}, {"raw_bytes", 0}};
    e["count"] = e["count"].get<std::uint64_t>() + 1;
    e["stored_bytes"] = e["stored_bytes"].get<std::uint64_t>() + s.stored_size;
    e["raw_bytes"] = e["raw_bytes"].get<std::uint64_t>() + s.raw_size;
  }
  std::uint64_t kinds[3] = {0, 0, 0};
  for (int i = 0; i < h.num_frames(); ++i) {
    for (const BaryRecord& r : a.load_bary(i).records) ++kinds[static_cast<int>(r.kind())];
  }
  const Scene& scene = a.scene();
  const std::uint64_t V = scene.num_vertices();
  const auto dense = storage_estimate(h.height, h.width, h.num_times, h.num_cameras, V, StorageMode::kDense);
  const auto compact = storage_estimate(h.height, h.width, h.num_times, h.num_cameras, V, StorageMode::kCompact);
  const double file = static_cast<double>(a.file_size());
  const json meta = parse_metadata(a);
  return json{{"format_version", h.version},
              {"config", meta.contains("config") ? meta["config"] : json(nullptr)},
              {"encode_report", meta.contains("encode_report") ? meta["encode_report"] : json(nullptr)},
              {"width", h.width},
              {"height", h.height},
              {"times", h.num_times},
              {"cameras", h.num_cameras},
              {"frames", h.num_frames()},
              {"has_rgb", h.has_rgb},
              {"file_bytes", a.file_size()},
              {"sections", sections},
              {"pixels", {{"dynamic", kinds[2]}, {"static", kinds[1]}, {"invalid", kinds[0]}}},
              {"scene",
               {{"meshes", scene.meshes().size()},
                {"vertices", V},
                {"faces", scene.num_faces()},
                {"trajectory_scalars", scene.trajectory_scalars()},
                {"trajectory_bytes", 4 * scene.trajectory_scalars()}}},
              {"storage",
               {{"dense", estimate_json(dense)},
                {"compact", estimate_json(compact)},
                {"raw_rgb_bytes", raw_rgb_bytes(h.height, h.width, h.num_times, h.num_cameras)},
                {"dense_over_file", static_cast<double>(dense.total()) / file},
                {"compact_over_file", static_cast<double>(compact.total()) / file}}}};
}

CurateOptions curate_options_from_json(const json& j) {
  CurateOptions o;
  if (j.is_null()) return o;
  if (!j.is_object()) fail(ErrorCode::kSchema, "curation options must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "birdseye_resolution") {
      if (!value.is_number_integer() || value.get<int>() <= 0) {
        fail(ErrorCode::kSchema, "curation: birdseye_resolution must be a positive integer");
      }
      o.birdseye_resolution = value.get<int>();
      continue;
    }
    double* target = nullptr;
    if (key == "iou_threshold") target = &o.motion.iou_threshold;
    else if (key == "min_area_ratio") target = &o.motion.min_area_ratio;
    else if (key == "max_area_ratio") target = &o.motion.max_area_ratio;
    else if (key == "min_bbox_area") target = &o.occlusion.min_bbox_area;
    else if (key == "min_visible_ratio") target = &o.occlusion.min_visible_ratio;
    else fail(ErrorCode::kSchema, "curation: unknown key '" + key + "'");
    if (!value.is_number()) fail(ErrorCode::kSchema, "curation: '" + key + "' must be a number");
    *target = value.get<double>();
  }
  return o;
}

json to_json(const CurateOptions& o) {
  return json{{"iou_threshold", o.motion.iou_threshold},
              {"min_area_ratio", o.motion.min_area_ratio},
              {"max_area_ratio", o.motion.max_area_ratio},
              {"min_bbox_area", o.occlusion.min_bbox_area},
              {"min_visible_ratio", o.occlusion.min_visible_ratio},
              {"birdseye_resolution", o.birdseye_resolution}};
}

json curate_archive(const Archive& a, const CurateOptions& options) {
  const ClipHeader& h = a.header();
  const Scene& scene = a.scene();
  const json meta = parse_metadata(a);
  std::map<std::uint32_t, std::string> kinds;
  if (meta.contains("objects") && meta["objects"].is_array()) {
    for (const auto& o : meta["objects"]) {
      if (o.contains("id") && o.contains("kind")) kinds[o["id"].get<std::uint32_t>()] = o["kind"].get<std::string>();
    }
  }

  json assets = json::array();
  std::uint64_t rejected_assets = 0;
  for (const AnimatedMesh& m : scene.meshes()) {
    if (m.is_static) continue;
    Eigen::AlignedBox3d box;
    for (const auto& p : m.positions) box.extend(p.cast<double>());
    const Vec3 centre = box.center();
    const double half = 0.55 * std::max(box.sizes().x(), box.sizes().y()) + 0.05;
    std::vector<Mask> masks;
    for (int t = 0; t < h.num_times; ++t) {
      Mask mk(options.birdseye_resolution, options.birdseye_resolution);
      mk.data = render_birdseye_mask(m, t, centre, half, options.birdseye_resolution);
      masks.push_back(std::move(mk));
    }
    json entry{{"object_id", m.object_id}, {"kind", kinds.count(m.object_id) ? kinds[m.object_id] : "unknown"}};
    if (masks.size() < 2) {
      entry["keep"] = true;
      entry["reason"] = "single frame";
    } else {
      const MotionReport r = motion_filter(masks, options.motion);
      entry["keep"] = r.keep;
      entry["min_iou"] = r.min_iou;
      entry["mean_iou"] = r.mean_iou;
      entry["reason"] = r.reason;
      rejected_assets += !r.keep;
    }
    assets.push_back(entry);
  }

  json occlusion = json::array();
  std::uint64_t kept_frames = 0, person_frames = 0;
  for (const auto& [id, kind] : kinds) {
    if (kind != to_string(ObjectKind::kWalker)) continue;
    for (int i = 0; i < h.num_frames(); ++i) {
      const auto seg = a.load_seg(i);
      Mask mk(h.width, h.height);
      for (std::size_t p = 0; p < seg.size(); ++p) mk.data[p] = seg[p] == id;
      const OcclusionDecision d = occlusion_filter(&mk, options.occlusion);
      ++person_frames;
      kept_frames += d.keep();
      occlusion.push_back({{"object_id", id},
                           {"frame", i},
                           {"verdict", to_string(d.verdict)},
                           {"bbox_area", d.bbox_area},
                           {"visible", d.visible},
                           {"ratio", d.ratio}});
    }
  }

  Vec3 root = Vec3::Zero();
  if (meta.contains("root") && meta["root"].is_array() && meta["root"].size() == 3) {
    for (int k = 0; k < 3; ++k) root[k] = meta["root"][k].get<double>();
  }
  std::vector<std::vector<Vec3>> paths(h.num_cameras);
  for (int i = 0; i < h.num_frames(); ++i) paths[FrameId::from_flat(i, h.num_cameras).camera].push_back(a.camera(i).o);
  const CoverageStats cov = coverage_stats(paths, root);
  double hfov_lo = 360.0, hfov_hi = 0.0;
  for (const auto& c : a.cameras()) {
    hfov_lo = std::min(hfov_lo, c.hfov_deg());
    hfov_hi = std::max(hfov_hi, c.hfov_deg());
  }

  return json{{"options", to_json(options)},
              {"assets", assets},
              {"rejected_assets", rejected_assets},
              {"occlusion", {{"frames", occlusion}, {"person_frames", person_frames}, {"kept_frames", kept_frames}}},
              {"coverage",
               {{"azimuth_span_deg", cov.azimuth_span_deg},
                {"polar_span_deg", cov.polar_span_deg},
                {"radial_span", cov.radial_span},
                {"hfov_min_deg", hfov_lo},
                {"hfov_max_deg", hfov_hi}}}};
}

Trajectory ground_truth_trajectory(const Archive& a, int camera) {
  check_camera(a, camera);
  Trajectory traj;
  for (int t = 0; t < a.header().num_times; ++t) {
    traj.timestamps.push_back(t);
    traj.poses.push_back(Pose::from_camera(a.camera(FrameId{camera, t}.flat(a.header().num_cameras))));
  }
  return traj;
}

TrackSet ground_truth_tracks(const Archive& a, int frame) {
  check_frame(a, frame);
  const ClipHeader& h = a.header();
  const Frame f = a.load_frame(frame);
  const CameraParams& ref = a.camera(frame);
  TrackSet ts(h.width * h.height, h.num_times);
  for (int v = 0; v < h.height; ++v) {
    for (int u = 0; u < h.width; ++u) {
      if (f.bary.at(u, v).kind() == PixelKind::kInvalid) continue;
      const Track tr = query_track(a, f, frame, u, v, ref);
      const int m = v * h.width + u;
      for (int t = 0; t < h.num_times; ++t) {
        ts.points[ts.index(m, t)] = tr.points[t];
        ts.valid[ts.index(m, t)] = 1;
      }
    }
  }
  return ts;
}

std::vector<DepthMap> ground_truth_depth(const Archive& a, int camera) {
  check_camera(a, camera);
  std::vector<DepthMap> out;
  for (int t = 0; t < a.header().num_times; ++t) out.push_back(a.load_depth(FrameId{camera, t}.flat(a.header().num_cameras)));
  return out;
}

std::vector<Vec3> ground_truth_points(const Archive& a, int frame, int time) {
  check_frame(a, frame);
  const PointMap pm = query_dpm(a, frame, CameraParams::world_frame(), time);
  std::vector<Vec3> out;
  for (std::size_t i = 0; i < pm.size(); ++i) {
    if (pm.valid[i]) out.push_back(pm.points[i]);
  }
  return out;
}

std::vector<PointMap> ground_truth_view_maps(const Archive& a, int camera) {
  check_camera(a, camera);
  std::vector<PointMap> out;
  for (int t = 0; t < a.header().num_times; ++t) {
    out.push_back(query_dpm(a, FrameId{camera, t}.flat(a.header().num_cameras), CameraParams::world_frame(), t));
  }
  return out;
}

Tensor tracks_to_tensor(const TrackSet& tracks) {
  Tensor t;
  t.shape = {static_cast<std::uint64_t>(tracks.num_tracks), static_cast<std::uint64_t>(tracks.num_times), 3};
  t.data.resize(tracks.points.size() * 3);
  for (std::size_t i = 0; i < tracks.points.size(); ++i) {
    for (int k = 0; k < 3; ++k) t.data[3 * i + k] = tracks.valid[i] ? static_cast<float>(tracks.points[i][k]) : kNaN;
  }
  return t;
}

TrackSet tensor_to_tracks(const Tensor& t) {
  require(t.shape.size() == 3 && t.shape[2] == 3, ErrorCode::kSchema, "tracks tensor must be M x T x 3");
  TrackSet ts(static_cast<int>(t.shape[0]), static_cast<int>(t.shape[1]));
  for (std::size_t i = 0; i < ts.points.size(); ++i) {
    const Vec3 p(t.data[3 * i], t.data[3 * i + 1], t.data[3 * i + 2]);
    ts.valid[i] = p.allFinite();
    ts.points[i] = ts.valid[i] ? p : Vec3::Zero();
  }
  return ts;
}

Tensor depth_to_tensor(const std::vector<DepthMap>& depth) {
  require(!depth.empty(), ErrorCode::kInvalidArgument, "empty depth sequence");
  Tensor t;
  t.shape = {depth.size(), static_cast<std::uint64_t>(depth[0].height), static_cast<std::uint64_t>(depth[0].width)};
  for (const auto& d : depth) {
    for (std::size_t i = 0; i < d.z.size(); ++i) t.data.push_back(d.valid(i) ? d.z[i] : kNaN);
  }
  return t;
}

std::vector<DepthMap> tensor_to_depth(const Tensor& t) {
  require(t.shape.size() == 3, ErrorCode::kSchema, "depth tensor must be T x H x W");
  std::vector<DepthMap> out;
  const auto px = t.shape[1] * t.shape[2];
  for (std::uint64_t f = 0; f < t.shape[0]; ++f) {
    DepthMap d(static_cast<int>(t.shape[2]), static_cast<int>(t.shape[1]));
    std::copy(t.data.begin() + f * px, t.data.begin() + (f + 1) * px, d.z.begin());
    out.push_back(std::move(d));
  }
  return out;
}

Tensor points_to_tensor(const std::vector<Vec3>& points) {
  Tensor t;
  t.shape = {points.size(), 3};
  for (const auto& p : points) {
    for (int k = 0; k < 3; ++k) t.data.push_back(static_cast<float>(p[k]));
  }
  return t;
}

std::vector<Vec3> tensor_to_points(const Tensor& t) {
  require(t.shape.size() == 2 && t.shape[1] == 3, ErrorCode::kSchema, "point tensor must be P x 3");
  std::vector<Vec3> out;
  for (std::uint64_t i = 0; i < t.shape[0]; ++i) {
    const Vec3 p(t.data[3 * i], t.data[3 * i + 1], t.data[3 * i + 2]);
    require(p.allFinite(), ErrorCode::kSchema, "point tensor holds non-finite values");
    out.push_back(p);
  }
  return out;
}

Tensor maps_to_tensor(const std::vector<PointMap>& maps) {
  require(!maps.empty(), ErrorCode::kInvalidArgument, "empty point map sequence");
  Tensor t;
  t.shape = {maps.size(), static_cast<std::uint64_t>(maps[0].height), static_cast<std::uint64_t>(maps[0].width), 3};
  for (const auto& m : maps) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (int k = 0; k < 3; ++k) t.data.push_back(m.valid[i] ? static_cast<float>(m.points[i][k]) : kNaN);
    }
  }
  return t;
}

std::vector<PointMap> tensor_to_maps(const Tensor& t) {
  require(t.shape.size() == 4 && t.shape[3] == 3, ErrorCode::kSchema, "point map tensor must be T x H x W x 3");
  std::vector<PointMap> out;
  std::size_t j = 0;
  for (std::uint64_t f = 0; f < t.shape[0]; ++f) {
    PointMap m(static_cast<int>(t.shape[2]), static_cast<int>(t.shape[1]));
    for (std::size_t i = 0; i < m.size(); ++i, j += 3) {
      const Vec3 p(t.data[j], t.data[j + 1], t.data[j + 2]);
      m.valid[i] = p.allFinite();
      if (m.valid[i]) m.points[i] = p;
    }
    out.push_back(std::move(m));
  }
  return out;
}

namespace {

// Round-trips ground truth through the exchange precision so a prediction
// that is the exported ground truth scores exactly.
template <typename T, typename To, typename From>
T at_exchange_precision(const T& value, To to_tensor, From from_tensor) {
  return from_tensor(to_tensor(value));
}

json evaluate_pose(const Archive& a, const Request& r) {
  const int camera = r.integer("camera", 0);
  const AlignMode align = align_mode_from_string(r.string("align", "sim3"));
  const Trajectory gt = ground_truth_trajectory(a, camera);
  const Trajectory pred = read_tum(r.string("pred", ""));
  require(pred.poses.size() == gt.poses.size(), ErrorCode::kSchema,
          "trajectory has " + std::to_string(pred.poses.size()) + " poses, expected " +
              std::to_string(gt.poses.size()));
  const AteResult at = ate(pred, gt, align);
  const RpeResult rp = rpe(pred, gt);
  return json{{"ate", at.rmse},
              {"rpe_t", rp.translation},
              {"rpe_r_deg", rp.rotation_deg},
              {"alignment_scale", at.alignment.scale},
              {"params", {{"camera", camera}, {"align", to_string(align)}}}};
}

json evaluate_tracks(const Archive& a, const Request& r) {
  const int frame = r.integer("frame", 0);
  TrackMetricOptions opt;
  if (r.has("thresholds")) {
    const json& th = r.raw("thresholds");
    if (!th.is_array() || th.empty()) fail(ErrorCode::kSchema, "request: 'thresholds' must be a non-empty array");
    opt.thresholds.clear();
    for (const auto& x : th) {
      if (!x.is_number() || !(x.get<double>() > 0.0)) fail(ErrorCode::kSchema, "request: thresholds must be positive");
      opt.thresholds.push_back(x.get<double>());
    }
  }
  const std::string scale = r.string("threshold_scale", "depth");
  if (scale == "depth") opt.scale = ThresholdScale::kDepth;
  else if (scale == "absolute") opt.scale = ThresholdScale::kAbsolute;
  else fail(ErrorCode::kSchema, "request: threshold_scale must be 'depth' or 'absolute'");

  const TrackSet gt = at_exchange_precision(ground_truth_tracks(a, frame), tracks_to_tensor, tensor_to_tracks);
  const Tensor pt = read_tensor(r.string("pred", ""));
  expect_shape(pt, {static_cast<std::uint64_t>(gt.num_tracks), static_cast<std::uint64_t>(gt.num_times), 3}, "tracks");
  const TrackMetrics m = track_metrics(tensor_to_tracks(pt), gt, opt);
  return json{{"apd", m.apd},
              {"epe", m.epe},
              {"epe_per_track", m.epe_per_track},
              {"apd_per_threshold", m.within},
              {"points", m.points},
              {"missing", m.missing},
              {"params", {{"frame", frame}, {"thresholds", opt.thresholds}, {"threshold_scale", scale}}}};
}

json evaluate_depth(const Archive& a, const Request& r) {
  const int camera = r.integer("camera", 0);
  const auto gt = ground_truth_depth(a, camera);
  const Tensor pt = read_tensor(r.string("pred", ""));
  const ClipHeader& h = a.header();
  expect_shape(pt, {static_cast<std::uint64_t>(h.num_times), static_cast<std::uint64_t>(h.height),
                    static_cast<std::uint64_t>(h.width)}, "depth");
  const auto pred = tensor_to_depth(pt);
  std::vector<std::string> modes;
  if (r.has("align")) modes.push_back(r.string("align", ""));
  else modes = {"scale", "scale-shift"};
  json out{{"params", {{"camera", camera}}}};
  for (const auto& name : modes) {
    const DepthMetrics m = depth_metrics(pred, gt, depth_align_from_string(name));
    out[name] = {{"abs_rel", m.abs_rel}, {"delta_1_25", m.delta_125}, {"scale", m.scale},
                 {"shift", m.shift}, {"pixels", m.pixels}};
  }
  return out;
}

json evaluate_recon(const Archive& a, const Request& r) {
  const int frame = r.integer("frame", 0);
  check_frame(a, frame);
  const int time = r.integer("time", FrameId::from_flat(frame, a.header().num_cameras).time);
  const int neighbors = r.integer("neighbors", 10);
  const auto gt = at_exchange_precision(ground_truth_points(a, frame, time), points_to_tensor, tensor_to_points);
  const auto pred = tensor_to_points(read_tensor(r.string("pred", "")));
  const ReconMetrics m = recon_metrics(PointCloud{pred, {}}, PointCloud{gt, {}}, neighbors);
  return json{{"accuracy", m.accuracy},
              {"completeness", m.completeness},
              {"normal_consistency", m.normal_consistency},
              {"pred_points", pred.size()},
              {"gt_points", gt.size()},
              {"params", {{"frame", frame}, {"time", time}, {"neighbors", neighbors}}}};
}

json evaluate_correspondence(const Archive& a, const Request& r) {
  const int source = r.integer("source", 0);
  const int target = r.integer("target", 1);
  const auto gt_source = at_exchange_precision(ground_truth_view_maps(a, source), maps_to_tensor, tensor_to_maps);
  const auto gt_target = at_exchange_precision(ground_truth_view_maps(a, target), maps_to_tensor, tensor_to_maps);
  const Tensor pt = read_tensor(r.string("pred", ""));
  const ClipHeader& h = a.header();
  expect_shape(pt, {static_cast<std::uint64_t>(h.num_times), static_cast<std::uint64_t>(h.height),
                    static_cast<std::uint64_t>(h.width), 3}, "point maps");
  const CorrespondenceResult c = correspondence_error(tensor_to_maps(pt), gt_source, gt_target);
  return json{{"l_cor", c.error},
              {"matches_per_frame", c.matches},
              {"empty_frames", c.empty_frames},
              {"missing", c.missing},
              {"params", {{"source", source}, {"target", target}}}};
}

}  // namespace

json evaluate(const Archive& a, const json& request) {
  const std::string task = task_of(request);
  json out;
  if (task == "pose") {
    out = evaluate_pose(a, Request(request, {"pred", "camera", "align"}));
  } else if (task == "tracks") {
    out = evaluate_tracks(a, Request(request, {"pred", "frame", "thresholds", "threshold_scale"}));
  } else if (task == "depth") {
    out = evaluate_depth(a, Request(request, {"pred", "camera", "align"}));
  } else if (task == "recon") {
    out = evaluate_recon(a, Request(request, {"pred", "frame", "time", "neighbors"}));
  } else if (task == "correspondence") {
    out = evaluate_correspondence(a, Request(request, {"pred", "source", "target"}));
  } else {
    fail(ErrorCode::kSchema, "unknown task '" + task + "' (expected pose, tracks, depth, recon or correspondence)");
  }
  out["task"] = task;
  return out;
}

json export_ground_truth(const Archive& a, const json& request, const std::string& out_path) {
  const std::string task = task_of(request);
  json out{{"task", task}, {"path", out_path}};
  if (task == "pose") {
    const Request r(request, {"pred", "camera", "align"});
    write_tum(out_path, ground_truth_trajectory(a, r.integer("camera", 0)));
    out["format"] = "tum";
  } else if (task == "tracks") {
    const Request r(request, {"pred", "frame", "thresholds", "threshold_scale"});
    const Tensor t = tracks_to_tensor(ground_truth_tracks(a, r.integer("frame", 0)));
    write_tensor(out_path, t);
    out["shape"] = t.shape;
  } else if (task == "depth") {
    const Request r(request, {"pred", "camera", "align"});
    const Tensor t = depth_to_tensor(ground_truth_depth(a, r.integer("camera", 0)));
    write_tensor(out_path, t);
    out["shape"] = t.shape;
  } else if (task == "recon") {
    const Request r(request, {"pred", "frame", "time", "neighbors"});
    const int frame = r.integer("frame", 0);
    check_frame(a, frame);
    const int time = r.integer("time", FrameId::from_flat(frame, a.header().num_cameras).time);
    const Tensor t = points_to_tensor(ground_truth_points(a, frame, time));
    write_tensor(out_path, t);
    out["shape"] = t.shape;
  } else if (task == "correspondence") {
    const Request r(request, {"pred", "source", "target"});
    const Tensor t = maps_to_tensor(ground_truth_view_maps(a, r.integer("target", 1)));
    write_tensor(out_path, t);
    out["shape"] = t.shape;
  } else {
    fail(ErrorCode::kSchema, "unknown task '" + task + "' (expected pose, tracks, depth, recon or correspondence)");
  }
  return out;
}

}  // namespace dpm4d
