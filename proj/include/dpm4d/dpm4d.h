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

#ifndef DPM4D_DPM4D_H_
#define DPM4D_DPM4D_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(DPM4D_BUILDING_LIBRARY)
#define DPM4D_API __declspec(dllexport)
#else
#define DPM4D_API __declspec(dllimport)
#endif
#else
#define DPM4D_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dpm4d_status {
  DPM4D_OK = 0,
  DPM4D_ERR_INVALID_ARGUMENT = 1,
  DPM4D_ERR_IO = 2,
  DPM4D_ERR_VERSION_MISMATCH = 3,
  DPM4D_ERR_CHECKSUM = 4,
  DPM4D_ERR_TRUNCATED = 5,
  DPM4D_ERR_CORRUPT = 6,
  DPM4D_ERR_OUT_OF_RANGE = 7,
  DPM4D_ERR_NO_SURFACE = 8,
  DPM4D_ERR_SCHEMA = 9,
  DPM4D_ERR_DEGENERATE = 10,
  DPM4D_ERR_INTERNAL = 11
} dpm4d_status;

// Opaque read-only archive handle. Safe to share between threads.
typedef struct dpm4d_archive dpm4d_archive;

typedef struct dpm4d_info {
  uint32_t format_version;
  int32_t width;
  int32_t height;
  int32_t times;
  int32_t cameras;
  int32_t frames;
  int32_t has_rgb;
  uint32_t num_meshes;
  uint32_t num_faces;
  uint32_t num_vertices;
  uint64_t file_bytes;
} dpm4d_info;

// Row-major K and R; x_cam = R (x_world - o).
typedef struct dpm4d_camera {
  double K[9];
  double R[9];
  double o[3];
  int32_t width;
  int32_t height;
} dpm4d_camera;

typedef enum dpm4d_ref_kind {
  DPM4D_REF_WORLD = 0,
  DPM4D_REF_FRAME = 1,
  DPM4D_REF_EXPLICIT = 2
} dpm4d_ref_kind;

// Reference frame for query results: the world, the camera of an archive
// frame, or an explicit camera.
typedef struct dpm4d_ref {
  int32_t kind;
  int32_t frame;
  dpm4d_camera camera;
} dpm4d_ref;

typedef enum dpm4d_pixel_kind {
  DPM4D_PIXEL_INVALID = 0,
  DPM4D_PIXEL_STATIC = 1,
  DPM4D_PIXEL_DYNAMIC = 2
} dpm4d_pixel_kind;

DPM4D_API const char* dpm4d_version(void);
DPM4D_API uint32_t dpm4d_format_version(void);
DPM4D_API const char* dpm4d_status_name(dpm4d_status status);

// Message of the last failed call on this thread; empty after success.
DPM4D_API const char* dpm4d_last_error(void);

// Strings returned through char** out-parameters are owned by the caller.
DPM4D_API void dpm4d_free_string(char* s);

DPM4D_API dpm4d_status dpm4d_open(const char* path, dpm4d_archive** out);
DPM4D_API void dpm4d_close(dpm4d_archive* archive);
DPM4D_API dpm4d_status dpm4d_get_info(const dpm4d_archive* archive, dpm4d_info* out);
DPM4D_API dpm4d_status dpm4d_get_camera(const dpm4d_archive* archive, int32_t frame, dpm4d_camera* out);

// Amodal track through pixel (u, v) of `frame`: times x 3 doubles written
// to out_points (capacity counted in doubles). out_kind may be NULL.
DPM4D_API dpm4d_status dpm4d_query_track(const dpm4d_archive* archive, int32_t frame, int32_t u, int32_t v,
                                         const dpm4d_ref* ref, double* out_points, size_t capacity,
                                         int32_t* out_kind);

// DPM of `frame` at time t: height x width x 3 doubles and height x width
// validity bytes (capacity counted in pixels).
DPM4D_API dpm4d_status dpm4d_query_dpm(const dpm4d_archive* archive, int32_t frame, const dpm4d_ref* ref,
                                       int32_t time, double* out_points, uint8_t* out_valid,
                                       size_t capacity_pixels);

// Merges a config file's JSON, the DPM4D_* environment (when use_env is
// nonzero) and flag overrides, in that order. Either JSON may be NULL.
// Writes the fully resolved config.
DPM4D_API dpm4d_status dpm4d_resolve_config(const char* file_json, int32_t use_env, const char* flags_json,
                                            char** out_json);

// Generates a clip from a config JSON and writes it to out_path. The report
// (encode statistics, objects, sizes) goes to out_report_json if non-NULL.
DPM4D_API dpm4d_status dpm4d_generate(const char* config_json, const char* out_path, char** out_report_json);

// The archive's metadata JSON: generator config, placed objects, rig specs
// and the encode report.
DPM4D_API dpm4d_status dpm4d_metadata(const dpm4d_archive* archive, char** out_json);

DPM4D_API dpm4d_status dpm4d_stats(const dpm4d_archive* archive, char** out_json);
DPM4D_API dpm4d_status dpm4d_curate(const dpm4d_archive* archive, const char* options_json, char** out_json);
DPM4D_API dpm4d_status dpm4d_evaluate(const dpm4d_archive* archive, const char* request_json, char** out_json);
DPM4D_API dpm4d_status dpm4d_export(const dpm4d_archive* archive, const char* request_json, const char* out_path,
                                    char** out_json);

// mode 0 = dense, 1 = compact.
DPM4D_API dpm4d_status dpm4d_storage_estimate(uint64_t height, uint64_t width, uint64_t times, uint64_t cameras,
                                              uint64_t vertices, int32_t mode, uint64_t* out_pixel_bytes,
                                              uint64_t* out_vertex_bytes);
DPM4D_API uint64_t dpm4d_raw_rgb_bytes(uint64_t height, uint64_t width, uint64_t times, uint64_t cameras);

#ifdef __cplusplus
}
#endif

#endif  // DPM4D_DPM4D_H_
