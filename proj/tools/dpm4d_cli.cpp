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

// dpm4d command-line driver. Talks to the library only through the C API.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dpm4d/dpm4d.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitVersion = 3;
constexpr int kExitCorrupt = 4;
constexpr int kExitSchema = 5;
constexpr int kOutputSchemaVersion = 1;

struct CliFailure {
  int exit_code;
  std::string status;
  std::string message;
};

CliFailure usage_error(const std::string& message) { return {kExitUsage, "invalid-argument", message}; }

int exit_code_for(dpm4d_status s) {
  switch (s) {
    case DPM4D_OK: return kExitOk;
    case DPM4D_ERR_VERSION_MISMATCH: return kExitVersion;
    case DPM4D_ERR_CHECKSUM:
    case DPM4D_ERR_TRUNCATED:
    case DPM4D_ERR_CORRUPT: return kExitCorrupt;
    case DPM4D_ERR_SCHEMA: return kExitSchema;
    case DPM4D_ERR_OUT_OF_RANGE: return kExitUsage;
    default: return kExitRuntime;
  }
}

void check(dpm4d_status s) {
  if (s != DPM4D_OK) {
    throw CliFailure{exit_code_for(s), dpm4d_status_name(s), dpm4d_last_error()};
  }
}

// Takes ownership of a library-allocated string.
std::string take(char* s) {
  std::unique_ptr<char, void (*)(char*)> owned(s, dpm4d_free_string);
  return s ? std::string(s) : std::string();
}

struct ArchiveHandle {
  dpm4d_archive* ptr = nullptr;
  explicit ArchiveHandle(const std::string& path) { check(dpm4d_open(path.c_str(), &ptr)); }
  ~ArchiveHandle() { dpm4d_close(ptr); }
  ArchiveHandle(const ArchiveHandle&) = delete;
  ArchiveHandle& operator=(const ArchiveHandle&) = delete;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliFailure{kExitRuntime, "io", "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// The resolved generator config stored with an archive.
json archive_config(const dpm4d_archive* archive) {
  char* s = nullptr;
  check(dpm4d_metadata(archive, &s));
  const json meta = json::parse(take(s), nullptr, false);
  return meta.is_object() && meta.contains("config") ? meta["config"] : json(nullptr);
}

void emit(const json& j, bool as_json, const std::function<void()>& table, const json& config = nullptr) {
  if (as_json) {
    json out = j;
    out["schema_version"] = kOutputSchemaVersion;
    if (!config.is_null()) out["config"] = config;
    std::cout << out.dump(2) << '\n';
  } else {
    table();
  }
}

std::string human_bytes(double b) {
  const char* units[] = {"B", "KiB", "MiB", "GiB", "TiB"};
  int u = 0;
  while (b >= 1024.0 && u < 4) {
    b /= 1024.0;
    ++u;
  }
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(u ? 2 : 0) << b << ' ' << units[u];
  return ss.str();
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string config_path, out;
  std::optional<std::uint64_t> seed;
  std::optional<int> width, height, frames, cameras, num_objects, workers;
  std::optional<std::string> rig;
  std::vector<std::string> objects;
  bool no_human = false, rgb = false, no_env = false, as_json = false;
  std::optional<double> tolerance;
};

int run_generate(const GenerateArgs& a) {
  json flags = json::object();
  if (a.seed) flags["seed"] = *a.seed;
  if (a.width) flags["width"] = *a.width;
  if (a.height) flags["height"] = *a.height;
  if (a.frames) flags["frames"] = *a.frames;
  if (a.cameras) flags["cameras"] = *a.cameras;
  if (a.workers) flags["workers"] = *a.workers;
  if (a.rig) flags["rig"] = *a.rig;
  if (a.rgb) flags["rgb"] = true;
  if (a.tolerance) flags["encode"] = {{"surface_tolerance", *a.tolerance}};
  json scene = json::object();
  if (!a.objects.empty()) scene["objects"] = a.objects;
  if (a.num_objects) scene["num_objects"] = *a.num_objects;
  if (a.no_human) scene["include_human"] = false;
  if (!scene.empty()) flags["scene"] = scene;

  const std::string file = a.config_path.empty() ? std::string() : read_file(a.config_path);
  char* resolved = nullptr;
  check(dpm4d_resolve_config(file.empty() ? nullptr : file.c_str(), a.no_env ? 0 : 1, flags.dump().c_str(), &resolved));
  const std::string config = take(resolved);
  char* report = nullptr;
  check(dpm4d_generate(config.c_str(), a.out.c_str(), &report));
  const json r = json::parse(take(report));
  emit(r, a.as_json, [&] {
    const json& e = r["encode_report"];
    std::cout << "wrote " << a.out << " (" << human_bytes(r["file_bytes"].get<double>()) << ", "
              << r["frames"] << " frames)\n"
              << "pixels: dynamic " << e["dynamic_pixels"] << ", static " << e["static_pixels"] << ", invalid "
              << e["invalid_pixels"] << ", rejected " << e["rejected_pixels"] << '\n'
              << "worst fit residual " << e["worst_residual"].get<double>() << '\n';
  });
  return kExitOk;
}

// ------------------------------------------------------------------- query

struct QueryArgs {
  std::string archive;
  std::optional<int> frame, camera, time;
  std::vector<int> pixel;
  bool all = false;
  std::string ref = "world";
  std::optional<int> at_time;
  bool as_json = false;
};

dpm4d_ref parse_ref(const std::string& text, const dpm4d_info& info, int frame) {
  dpm4d_ref ref{};
  if (text == "world") {
    ref.kind = DPM4D_REF_WORLD;
  } else if (text == "self") {
    ref.kind = DPM4D_REF_FRAME;
    ref.frame = frame;
  } else if (text.rfind("frame:", 0) == 0) {
    ref.kind = DPM4D_REF_FRAME;
    ref.frame = std::stoi(text.substr(6));
  } else if (text.rfind("camera:", 0) == 0) {
    // Camera c at the queried frame's time.
    ref.kind = DPM4D_REF_FRAME;
    const int camera = std::stoi(text.substr(7));
    if (camera < 0 || camera >= info.cameras) throw usage_error("--ref camera " + std::to_string(camera) + " out of range");
    ref.frame = (frame / info.cameras) * info.cameras + camera;
  } else {
    throw usage_error("--ref must be world, self, frame:<i> or camera:<c>");
  }
  return ref;
}

int run_query(const QueryArgs& q) {
  ArchiveHandle h(q.archive);
  dpm4d_info info{};
  check(dpm4d_get_info(h.ptr, &info));
  int frame = 0;
  if (q.frame) {
    frame = *q.frame;
  } else if (q.camera && q.time) {
    frame = *q.time * info.cameras + *q.camera;
  } else {
    throw usage_error("give --frame, or --camera with --time");
  }
  dpm4d_ref ref;
  try {
    ref = parse_ref(q.ref, info, frame);
  } catch (const std::invalid_argument&) {
    throw usage_error("bad --ref index");
  }
  json out{{"archive", q.archive}, {"frame", frame}, {"ref", q.ref}};
  if (!q.all) {
    if (q.pixel.size() != 2) throw usage_error("--pixel takes u,v (or use --all)");
    std::vector<double> pts(static_cast<std::size_t>(info.times) * 3);
    int32_t kind = 0;
    check(dpm4d_query_track(h.ptr, frame, q.pixel[0], q.pixel[1], &ref, pts.data(), pts.size(), &kind));
    json points = json::array();
    for (int t = 0; t < info.times; ++t) points.push_back({pts[3 * t], pts[3 * t + 1], pts[3 * t + 2]});
    const char* kinds[] = {"invalid", "static", "dynamic"};
    out["pixel"] = q.pixel;
    out["kind"] = kinds[kind];
    out["track"] = points;
    emit(out, q.as_json, [&] {
      std::cout << "frame " << frame << " pixel (" << q.pixel[0] << ", " << q.pixel[1] << ") " << kinds[kind]
                << ", ref " << q.ref << '\n';
      std::cout << std::setprecision(17);
      for (int t = 0; t < info.times; ++t) {
        std::cout << t << ' ' << pts[3 * t] << ' ' << pts[3 * t + 1] << ' ' << pts[3 * t + 2] << '\n';
      }
    }, archive_config(h.ptr));
    return kExitOk;
  }
  const int t = q.at_time ? *q.at_time : frame / info.cameras;
  const std::size_t n = static_cast<std::size_t>(info.width) * info.height;
  std::vector<double> pts(3 * n);
  std::vector<uint8_t> valid(n);
  check(dpm4d_query_dpm(h.ptr, frame, &ref, t, pts.data(), valid.data(), n));
  json points = json::array();
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (valid[i]) {
      points.push_back({pts[3 * i], pts[3 * i + 1], pts[3 * i + 2]});
      ++count;
    } else {
      points.push_back(nullptr);
    }
  }
  out["time"] = t;
  out["width"] = info.width;
  out["height"] = info.height;
  out["points"] = points;
  emit(out, q.as_json, [&] {
    std::cout << "frame " << frame << " at time " << t << ", ref " << q.ref << ": " << count << " of " << n
              << " pixels valid\n";
    std::cout << std::setprecision(17);
    for (std::size_t i = 0; i < n; ++i) {
      if (!valid[i]) continue;
      std::cout << i % info.width << ' ' << i / info.width << ' ' << pts[3 * i] << ' ' << pts[3 * i + 1] << ' '
                << pts[3 * i + 2] << '\n';
    }
  }, archive_config(h.ptr));
  return kExitOk;
}

// ------------------------------------------------------------------- stats

int run_stats(const std::string& path, bool as_json) {
  ArchiveHandle h(path);
  char* s = nullptr;
  check(dpm4d_stats(h.ptr, &s));
  const json j = json::parse(take(s));
  emit(j, as_json, [&] {
    const json& st = j["storage"];
    std::cout << path << ": " << j["width"] << "x" << j["height"] << ", T=" << j["times"] << ", C=" << j["cameras"]
              << " (" << j["frames"] << " frames), format v" << j["format_version"] << '\n';
    std::cout << std::left << std::setw(10) << "section" << std::setw(8) << "count" << std::setw(14) << "stored"
              << "raw\n";
    for (const auto& [tag, e] : j["sections"].items()) {
      std::cout << std::setw(10) << tag << std::setw(8) << e["count"].get<int>() << std::setw(14)
                << human_bytes(e["stored_bytes"].get<double>()) << human_bytes(e["raw_bytes"].get<double>()) << '\n';
    }
    std::cout << "pixels: dynamic " << j["pixels"]["dynamic"] << ", static " << j["pixels"]["static"]
              << ", invalid " << j["pixels"]["invalid"] << '\n';
    std::cout << "file: " << human_bytes(j["file_bytes"].get<double>()) << '\n';
    std::cout << "dense estimate: " << human_bytes(st["dense"]["total_bytes"].get<double>()) << " ("
              << std::setprecision(4) << st["dense_over_file"].get<double>() << "x file)\n";
    std::cout << "compact estimate: " << human_bytes(st["compact"]["pixel_bytes"].get<double>()) << " pixel records + "
              << human_bytes(st["compact"]["vertex_bytes"].get<double>()) << " vertex trajectories\n";
  });
  return kExitOk;
}

// ------------------------------------------------------------------ curate

struct CurateArgs {
  std::string archive, options_path;
  std::optional<double> iou, min_area, min_ratio;
  bool as_json = false;
};

int run_curate(const CurateArgs& c) {
  json options = c.options_path.empty() ? json::object() : json::parse(read_file(c.options_path), nullptr, false);
  if (options.is_discarded()) throw CliFailure{kExitSchema, "schema", "options file is not valid JSON"};
  if (c.iou) options["iou_threshold"] = *c.iou;
  if (c.min_area) options["min_bbox_area"] = *c.min_area;
  if (c.min_ratio) options["min_visible_ratio"] = *c.min_ratio;
  ArchiveHandle h(c.archive);
  char* s = nullptr;
  check(dpm4d_curate(h.ptr, options.dump().c_str(), &s));
  const json j = json::parse(take(s));
  emit(j, c.as_json, [&] {
    std::cout << "assets (iou threshold " << j["options"]["iou_threshold"] << "):\n";
    for (const auto& a : j["assets"]) {
      std::cout << "  object " << a["object_id"] << " " << a["kind"].get<std::string>() << ": "
                << (a["keep"].get<bool>() ? "keep" : "reject");
      if (a.contains("min_iou")) std::cout << " (min iou " << a["min_iou"].get<double>() << ")";
      if (!a["reason"].get<std::string>().empty()) std::cout << " - " << a["reason"].get<std::string>();
      std::cout << '\n';
    }
    std::cout << "person frames kept: " << j["occlusion"]["kept_frames"] << " of "
              << j["occlusion"]["person_frames"] << '\n';
    const json& cov = j["coverage"];
    std::cout << "coverage: azimuth " << cov["azimuth_span_deg"].get<double>() << " deg, polar "
              << cov["polar_span_deg"].get<double>() << " deg, radial " << cov["radial_span"].get<double>() << '\n';
  }, archive_config(h.ptr));
  return kExitOk;
}

// ------------------------------------------------------------ eval / export

struct TaskArgs {
  std::string archive, task, path;
  std::optional<int> camera, frame, time, source, target, neighbors;
  std::optional<std::string> align, threshold_scale;
  std::vector<double> thresholds;
  bool as_json = false;
};

json task_request(const TaskArgs& a, const char* path_key) {
  json r{{"task", a.task}};
  if (path_key) r[path_key] = a.path;
  if (a.camera) r["camera"] = *a.camera;
  if (a.frame) r["frame"] = *a.frame;
  if (a.time) r["time"] = *a.time;
  if (a.source) r["source"] = *a.source;
  if (a.target) r["target"] = *a.target;
  if (a.neighbors) r["neighbors"] = *a.neighbors;
  if (a.align) r["align"] = *a.align;
  if (a.threshold_scale) r["threshold_scale"] = *a.threshold_scale;
  if (!a.thresholds.empty()) r["thresholds"] = a.thresholds;
  return r;
}

void print_metrics(const json& j, const std::string& indent) {
  for (const auto& [k, v] : j.items()) {
    if (k == "params" || k == "task" || k == "schema_version") continue;
    if (v.is_object()) {
      std::cout << indent << k << ":\n";
      print_metrics(v, indent + "  ");
    } else {
      std::cout << indent << std::left << std::setw(20) << k << v.dump() << '\n';
    }
  }
}

int run_eval(const TaskArgs& a) {
  ArchiveHandle h(a.archive);
  char* s = nullptr;
  check(dpm4d_evaluate(h.ptr, task_request(a, "pred").dump().c_str(), &s));
  const json j = json::parse(take(s));
  emit(j, a.as_json, [&] {
    std::cout << "task " << a.task << " " << j["params"].dump() << '\n';
    print_metrics(j, "  ");
  }, archive_config(h.ptr));
  return kExitOk;
}

int run_export(const TaskArgs& a) {
  ArchiveHandle h(a.archive);
  char* s = nullptr;
  check(dpm4d_export(h.ptr, task_request(a, nullptr).dump().c_str(), a.path.c_str(), &s));
  const json j = json::parse(take(s));
  emit(
      j, a.as_json, [&] { std::cout << "wrote " << a.task << " ground truth to " << a.path << '\n'; },
      archive_config(h.ptr));
  return kExitOk;
}

void add_task_options(CLI::App* cmd, TaskArgs& a) {
  cmd->add_option("archive", a.archive, "Clip archive")->required();
  cmd->add_option("--task", a.task, "pose, tracks, depth, recon or correspondence")
      ->required()
      ->check(CLI::IsMember({"pose", "tracks", "depth", "recon", "correspondence"}));
  cmd->add_option("--camera", a.camera, "Camera index (pose, depth)");
  cmd->add_option("--frame", a.frame, "Flat frame index (tracks, recon)");
  cmd->add_option("--time", a.time, "Time index (recon)");
  cmd->add_option("--source", a.source, "Source camera (correspondence)");
  cmd->add_option("--target", a.target, "Target camera (correspondence)");
  cmd->add_option("--neighbors", a.neighbors, "Neighbours for normal estimation (recon)");
  cmd->add_option("--align", a.align, "none|se3|sim3 (pose), none|scale|scale-shift (depth)");
  cmd->add_option("--thresholds", a.thresholds, "APD thresholds (tracks)")->delimiter(',');
  cmd->add_option("--threshold-scale", a.threshold_scale, "depth|absolute (tracks)");
  cmd->add_flag("--json", a.as_json, "Machine-readable output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dpm4d: barycentric dynamic point maps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(dpm4d_version()));

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Simulate, encode and write a clip archive");
  g->add_option("-o,--out", gen.out, "Output archive path")->required();
  g->add_option("-c,--config", gen.config_path, "JSON config file")->check(CLI::ExistingFile);
  g->add_option("--seed", gen.seed, "Root seed");
  g->add_option("--width", gen.width, "Image width")->check(CLI::PositiveNumber);
  g->add_option("--height", gen.height, "Image height")->check(CLI::PositiveNumber);
  g->add_option("--frames", gen.frames, "Time steps T")->check(CLI::PositiveNumber);
  g->add_option("--cameras", gen.cameras, "Cameras C")->check(CLI::PositiveNumber);
  g->add_option("--rig", gen.rig, "Rig pattern")
      ->check(CLI::IsMember({"independent", "paired-orbits", "static-plus-orbits"}));
  g->add_option("--objects", gen.objects, "Object kinds, comma separated")
      ->delimiter(',')
      ->check(CLI::IsMember({"sphere", "arm", "flag", "walker", "teleporter"}));
  g->add_option("--num-objects", gen.num_objects, "Random dynamic objects (0 = 1..3)")->check(CLI::Range(0, 3));
  g->add_flag("--no-human", gen.no_human, "Leave out the human proxy");
  g->add_flag("--rgb", gen.rgb, "Store flat-shaded RGB");
  g->add_option("--tolerance", gen.tolerance, "Encoder surface tolerance")->check(CLI::PositiveNumber);
  g->add_option("--workers", gen.workers, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  g->add_flag("--no-env", gen.no_env, "Ignore DPM4D_* environment variables");
  g->add_flag("--json", gen.as_json, "Machine-readable output");

  QueryArgs query;
  auto* q = app.add_subcommand("query", "Track a pixel or decode a whole DPM");
  q->add_option("archive", query.archive, "Clip archive")->required();
  q->add_option("--frame", query.frame, "Flat frame index (time * C + camera)");
  q->add_option("--camera", query.camera, "Camera index, with --time");
  q->add_option("--time", query.time, "Time index, with --camera");
  q->add_option("--pixel", query.pixel, "Pixel u,v")->delimiter(',')->expected(2);
  q->add_flag("--all", query.all, "Decode every pixel of the frame");
  q->add_option("--ref", query.ref, "world, self, frame:<i> or camera:<c>");
  q->add_option("--at", query.at_time, "Target time for --all (default: the frame's time)");
  q->add_flag("--json", query.as_json, "Machine-readable output");

  std::string stats_path;
  bool stats_json = false;
  auto* st = app.add_subcommand("stats", "Size breakdown and compression report");
  st->add_option("archive", stats_path, "Clip archive")->required();
  st->add_flag("--json", stats_json, "Machine-readable output");

  CurateArgs cur;
  auto* cu = app.add_subcommand("curate", "Motion and occlusion filters, camera coverage");
  cu->add_option("archive", cur.archive, "Clip archive")->required();
  cu->add_option("--options", cur.options_path, "JSON thresholds file")->check(CLI::ExistingFile);
  cu->add_option("--iou-threshold", cur.iou, "Adjacent-frame IoU threshold");
  cu->add_option("--min-bbox-area", cur.min_area, "Occlusion filter box area (pixels)");
  cu->add_option("--min-visible-ratio", cur.min_ratio, "Occlusion filter visible ratio");
  cu->add_flag("--json", cur.as_json, "Machine-readable output");

  TaskArgs ev;
  auto* e = app.add_subcommand("eval", "Score a prediction against an archive's ground truth");
  add_task_options(e, ev);
  e->add_option("--pred", ev.path, "Prediction file")->required()->check(CLI::ExistingFile);

  TaskArgs ex;
  auto* x = app.add_subcommand("export", "Write ground truth in the prediction formats");
  add_task_options(x, ex);
  x->add_option("-o,--out", ex.path, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*g) return run_generate(gen);
    if (*q) return run_query(query);
    if (*st) return run_stats(stats_path, stats_json);
    if (*cu) return run_curate(cur);
    if (*e) return run_eval(ev);
    if (*x) return run_export(ex);
  } catch (const CliFailure& f) {
    std::cerr << "dpm4d: error: " << f.status << ": " << f.message << '\n';
    return f.exit_code;
  } catch (const std::exception& ex_) {
    std::cerr << "dpm4d: error: internal: " << ex_.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
