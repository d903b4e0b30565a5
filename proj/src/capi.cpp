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

#include "dpm4d/dpm4d.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <new>
#include <string>

#include <json.hpp>

#include "archive.hpp"
#include "config.hpp"
#include "error.hpp"
#include "generate.hpp"
#include "query.hpp"
#include "services.hpp"

struct dpm4d_archive {
  dpm4d::Archive archive;
};

namespace {

using dpm4d::ErrorCode;
using nlohmann::json;

thread_local std::string g_last_error;

dpm4d_status set_error(dpm4d_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename Body>
dpm4d_status guarded(Body&& body) {
  try {
    body();
    g_last_error.clear();
    return DPM4D_OK;
  } catch (const dpm4d::Error& e) {
    return set_error(static_cast<dpm4d_status>(e.code()), e.what());
  } catch (const json::exception& e) {
    return set_error(DPM4D_ERR_SCHEMA, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(DPM4D_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(DPM4D_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(DPM4D_ERR_INTERNAL, "unknown error");
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) dpm4d::fail(ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json parse(const char* text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    dpm4d::fail(ErrorCode::kSchema, std::string(what) + " is not valid JSON: " + e.what());
  }
}

dpm4d_camera to_c(const dpm4d::CameraParams& cam) {
  dpm4d_camera c{};
  for (int r = 0; r < 3; ++r) {
    for (int k = 0; k < 3; ++k) {
      c.K[3 * r + k] = cam.K(r, k);
      c.R[3 * r + k] = cam.R(r, k);
    }
    c.o[r] = cam.o[r];
  }
  c.width = cam.width;
  c.height = cam.height;
  return c;
}

dpm4d::CameraParams from_c(const dpm4d_camera& c) {
  dpm4d::CameraParams cam;
  for (int r = 0; r < 3; ++r) {
    for (int k = 0; k < 3; ++k) {
      cam.K(r, k) = c.K[3 * r + k];
      cam.R(r, k) = c.R[3 * r + k];
    }
    cam.o[r] = c.o[r];
  }
  cam.width = c.width;
  cam.height = c.height;
  cam.validate();
  return cam;
}

dpm4d::CameraParams resolve_ref(const dpm4d::Archive& a, const dpm4d_ref* ref) {
  if (ref == nullptr || ref->kind == DPM4D_REF_WORLD) return dpm4d::CameraParams::world_frame();
  if (ref->kind == DPM4D_REF_FRAME) return a.camera(ref->frame);
  if (ref->kind == DPM4D_REF_EXPLICIT) return from_c(ref->camera);
  dpm4d::fail(ErrorCode::kInvalidArgument, "unknown reference kind " + std::to_string(ref->kind));
}

}  // namespace

extern "C" {

const char* dpm4d_version(void) { return "1.0.0"; }

uint32_t dpm4d_format_version(void) { return dpm4d::kArchiveVersion; }

const char* dpm4d_status_name(dpm4d_status status) {
  switch (status) {
    case DPM4D_OK: return "ok";
    case DPM4D_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case DPM4D_ERR_IO: return "io";
    case DPM4D_ERR_VERSION_MISMATCH: return "version-mismatch";
    case DPM4D_ERR_CHECKSUM: return "checksum";
    case DPM4D_ERR_TRUNCATED: return "truncated";
    case DPM4D_ERR_CORRUPT: return "corrupt";
    case DPM4D_ERR_OUT_OF_RANGE: return "out-of-range";
    case DPM4D_ERR_NO_SURFACE: return "no-surface";
    case DPM4D_ERR_SCHEMA: return "schema";
    case DPM4D_ERR_DEGENERATE: return "degenerate";
    case DPM4D_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* dpm4d_last_error(void) { return g_last_error.c_str(); }

void dpm4d_free_string(char* s) { std::free(s); }

dpm4d_status dpm4d_open(const char* path, dpm4d_archive** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    *out = new dpm4d_archive{dpm4d::Archive::open(path)};
  });
}

void dpm4d_close(dpm4d_archive* archive) { delete archive; }

dpm4d_status dpm4d_get_info(const dpm4d_archive* archive, dpm4d_info* out) {
  return guarded([&] {
    need(archive, "archive");
    need(out, "out");
    const auto& a = archive->archive;
    const auto& h = a.header();
    *out = dpm4d_info{};
    out->format_version = h.version;
    out->width = h.width;
    out->height = h.height;
    out->times = h.num_times;
    out->cameras = h.num_cameras;
    out->frames = h.num_frames();
    out->has_rgb = h.has_rgb ? 1 : 0;
    out->num_meshes = static_cast<uint32_t>(a.scene().meshes().size());
    out->num_faces = a.scene().num_faces();
    out->num_vertices = a.scene().num_vertices();
    out->file_bytes = a.file_size();
  });
}

dpm4d_status dpm4d_get_camera(const dpm4d_archive* archive, int32_t frame, dpm4d_camera* out) {
  return guarded([&] {
    need(archive, "archive");
    need(out, "out");
    *out = to_c(archive->archive.camera(frame));
  });
}

dpm4d_status dpm4d_query_track(const dpm4d_archive* archive, int32_t frame, int32_t u, int32_t v,
                               const dpm4d_ref* ref, double* out_points, size_t capacity, int32_t* out_kind) {
  return guarded([&] {
    need(archive, "archive");
    need(out_points, "out_points");
    const auto& a = archive->archive;
    const size_t want = static_cast<size_t>(a.header().num_times) * 3;
    if (capacity < want) {
      dpm4d::fail(ErrorCode::kInvalidArgument, "track buffer holds " + std::to_string(capacity) + " doubles, need " +
                                                   std::to_string(want));
    }
    const dpm4d::CameraParams ref_cam = resolve_ref(a, ref);
    const dpm4d::Track track = dpm4d::query_track(a, frame, u, v, ref_cam);
    for (size_t t = 0; t < track.points.size(); ++t) {
      for (int k = 0; k < 3; ++k) out_points[3 * t + k] = track.points[t][k];
    }
    if (out_kind != nullptr) *out_kind = static_cast<int32_t>(track.kind);
  });
}

dpm4d_status dpm4d_query_dpm(const dpm4d_archive* archive, int32_t frame, const dpm4d_ref* ref, int32_t time,
                             double* out_points, uint8_t* out_valid, size_t capacity_pixels) {
  return guarded([&] {
    need(archive, "archive");
    need(out_points, "out_points");
    need(out_valid, "out_valid");
    const auto& a = archive->archive;
    const size_t want = static_cast<size_t>(a.header().width) * static_cast<size_t>(a.header().height);
    if (capacity_pixels < want) {
      dpm4d::fail(ErrorCode::kInvalidArgument, "DPM buffer holds " + std::to_string(capacity_pixels) +
                                                   " pixels, need " + std::to_string(want));
    }
    const dpm4d::CameraParams ref_cam = resolve_ref(a, ref);
    const dpm4d::PointMap pm = dpm4d::query_dpm(a, frame, ref_cam, time);
    for (size_t i = 0; i < pm.size(); ++i) {
      out_valid[i] = pm.valid[i];
      for (int k = 0; k < 3; ++k) out_points[3 * i + k] = pm.valid[i] ? pm.points[i][k] : 0.0;
    }
  });
}

dpm4d_status dpm4d_resolve_config(const char* file_json, int32_t use_env, const char* flags_json, char** out_json) {
  return guarded([&] {
    need(out_json, "out_json");
    *out_json = nullptr;
    dpm4d::GenerateConfig config;
    if (file_json != nullptr) dpm4d::merge_json(config, parse(file_json, "config file"));
    if (use_env) dpm4d::merge_env(config, dpm4d::process_env());
    if (flags_json != nullptr) dpm4d::merge_json(config, parse(flags_json, "flag overrides"));
    config.validate();
    json resolved = dpm4d::to_json(config);
    resolved["workers"] = config.workers;
    *out_json = copy_string(resolved.dump());
  });
}

dpm4d_status dpm4d_generate(const char* config_json, const char* out_path, char** out_report_json) {
  return guarded([&] {
    need(config_json, "config_json");
    need(out_path, "out_path");
    if (out_report_json != nullptr) *out_report_json = nullptr;
    dpm4d::GenerateConfig config;
    dpm4d::merge_json(config, parse(config_json, "config"));
    const dpm4d::GeneratedClip g = dpm4d::generate_clip(config);
    dpm4d::write_archive(g.clip, out_path);
    if (out_report_json != nullptr) {
      json objects = json::array();
      for (const auto& o : g.objects) objects.push_back({{"id", o.object_id}, {"kind", dpm4d::to_string(o.kind)}});
      const json report{{"path", out_path},
                        {"file_bytes", std::filesystem::file_size(out_path)},
                        {"frames", g.clip.header.num_frames()},
                        {"objects", objects},
                        {"config", dpm4d::to_json(config)},
                        {"encode_report", dpm4d::to_json(g.report)}};
      *out_report_json = copy_string(report.dump());
    }
  });
}

dpm4d_status dpm4d_metadata(const dpm4d_archive* archive, char** out_json) {
  return guarded([&] {
    need(archive, "archive");
    need(out_json, "out_json");
    *out_json = copy_string(archive->archive.metadata_json());
  });
}

dpm4d_status dpm4d_stats(const dpm4d_archive* archive, char** out_json) {
  return guarded([&] {
    need(archive, "archive");
    need(out_json, "out_json");
    *out_json = copy_string(dpm4d::archive_stats(archive->archive).dump());
  });
}

dpm4d_status dpm4d_curate(const dpm4d_archive* archive, const char* options_json, char** out_json) {
  return guarded([&] {
    need(archive, "archive");
    need(out_json, "out_json");
    const json options = options_json != nullptr ? parse(options_json, "curation options") : json();
    *out_json = copy_string(dpm4d::curate_archive(archive->archive, dpm4d::curate_options_from_json(options)).dump());
  });
}

dpm4d_status dpm4d_evaluate(const dpm4d_archive* archive, const char* request_json, char** out_json) {
  return guarded([&] {
    need(archive, "archive");
    need(request_json, "request_json");
    need(out_json, "out_json");
    *out_json = copy_string(dpm4d::evaluate(archive->archive, parse(request_json, "request")).dump());
  });
}

dpm4d_status dpm4d_export(const dpm4d_archive* archive, const char* request_json, const char* out_path,
                          char** out_json) {
  return guarded([&] {
    need(archive, "archive");
    need(request_json, "request_json");
    need(out_path, "out_path");
    const json result = dpm4d::export_ground_truth(archive->archive, parse(request_json, "request"), out_path);
    if (out_json != nullptr) *out_json = copy_string(result.dump());
  });
}

dpm4d_status dpm4d_storage_estimate(uint64_t height, uint64_t width, uint64_t times, uint64_t cameras,
                                    uint64_t vertices, int32_t mode, uint64_t* out_pixel_bytes,
                                    uint64_t* out_vertex_bytes) {
  return guarded([&] {
    need(out_pixel_bytes, "out_pixel_bytes");
    need(out_vertex_bytes, "out_vertex_bytes");
    if (mode != 0 && mode != 1) dpm4d::fail(ErrorCode::kInvalidArgument, "storage mode must be 0 or 1");
    const auto e = dpm4d::storage_estimate(height, width, times, cameras, vertices,
                                           mode == 0 ? dpm4d::StorageMode::kDense : dpm4d::StorageMode::kCompact);
    *out_pixel_bytes = e.pixel_bytes;
    *out_vertex_bytes = e.vertex_bytes;
  });
}

uint64_t dpm4d_raw_rgb_bytes(uint64_t height, uint64_t width, uint64_t times, uint64_t cameras) {
  return dpm4d::raw_rgb_bytes(height, width, times, cameras);
}

}  // extern "C"
