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

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "anim_mesh.hpp"
#include "bary_map.hpp"
#include "geometry.hpp"

namespace dpm4d {

constexpr std::uint32_t kArchiveVersion = 1;

// Bits of ClipHeader::conventions. Readers reject archives that do not set
// exactly kAllConventions.
enum Convention : std::uint32_t {
  kRotationWorldToCamera = 1u << 0,  // x_cam = R (x_world - o)
  kPixelCentreHalfOffset = 1u << 1,  // pixel (u, v) samples (u + 0.5, v + 0.5)
  kDepthIsCameraZ = 1u << 2,         // depth stores camera-frame z, not ray length
  kCameraLooksPlusZ = 1u << 3,       // right-handed, +x right, +y down, +z forward
  kWorldZUp = 1u << 4,
  kAllConventions = 0x1Fu,
};

struct ClipHeader {
  std::uint32_t version = kArchiveVersion;
  int width = 0;
  int height = 0;
  int num_times = 0;    // T
  int num_cameras = 0;  // C
  std::uint32_t conventions = kAllConventions;
  bool has_rgb = false;

  int num_frames() const { return num_times * num_cameras; }
  bool operator==(const ClipHeader&) const = default;
};

// Per-frame payload; seg holds instance ids (0 = static background).
struct Frame {
  DepthMap depth;
  std::vector<std::uint32_t> seg;
  BaryMap bary;
  std::vector<std::uint8_t> rgb;  // empty unless the clip carries RGB
};

// Everything a ClipArchive holds, in memory. Frames and cameras are indexed
// by flat frame id (time-major).
struct ClipData {
  ClipHeader header;
  std::vector<CameraParams> cameras;
  std::vector<Frame> frames;
  Scene scene;
  std::string metadata_json = "{}";

  // Dimension and cross-reference checks; throws kInvalidArgument.
  void validate() const;
};

std::vector<std::uint8_t> serialize_archive(const ClipData& clip);
void write_archive(const ClipData& clip, const std::string& path);

struct SectionInfo {
  char tag[4];
  std::uint32_t key = 0;
  std::uint64_t offset = 0;
  std::uint64_t stored_size = 0;
  std::uint64_t raw_size = 0;
  std::uint32_t codec = 0;  // 0 raw, 1 zlib
  std::uint32_t crc = 0;
};

// A read-only archive. Header, cameras, meshes and metadata are loaded on
// open; frames are read on demand with positional reads, so one Archive can
// serve any number of threads.
class Archive {
 public:
  static Archive open(const std::string& path);

  Archive(Archive&&) noexcept;
  Archive& operator=(Archive&&) noexcept;
  Archive(const Archive&) = delete;
  Archive& operator=(const Archive&) = delete;
  ~Archive();

  const ClipHeader& header() const { return header_; }
  const Scene& scene() const { return scene_; }
  const std::string& metadata_json() const { return metadata_; }
  const std::vector<CameraParams>& cameras() const { return cameras_; }
  const CameraParams& camera(int frame) const;
  const std::vector<SectionInfo>& sections() const { return sections_; }
  std::uint64_t file_size() const { return file_size_; }

  Frame load_frame(int frame) const;
  DepthMap load_depth(int frame) const;
  BaryMap load_bary(int frame) const;
  std::vector<std::uint32_t> load_seg(int frame) const;

  // Loads every frame; the result re-serializes to the same bytes.
  ClipData read_all() const;

 private:
  Archive() = default;
  std::vector<std::uint8_t> read_section(const char* tag, std::uint32_t key) const;
  std::vector<std::uint8_t> read_section(const SectionInfo& info) const;
  void check_frame(int frame) const;

  int fd_ = -1;
  std::string path_;
  std::uint64_t file_size_ = 0;
  ClipHeader header_;
  std::vector<CameraParams> cameras_;
  Scene scene_;
  std::string metadata_;
  std::vector<SectionInfo> sections_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> lookup_;
};

enum class StorageMode { kDense, kCompact };

struct StorageEstimate {
  std::uint64_t pixel_bytes = 0;
  std::uint64_t vertex_bytes = 0;
  std::uint64_t total() const { return pixel_bytes + vertex_bytes; }
};

// Bytes needed to store every DPM of a clip at 4 bytes per scalar. Dense
// stores 3 scalars per pixel for each of the N = T*C images at each of the T
// times, with viewpoints folded into one reference frame. Compact stores 4
// scalars per pixel of each image (face + 3 weights) plus 3*V*T vertex
// scalars.
StorageEstimate storage_estimate(std::uint64_t height, std::uint64_t width, std::uint64_t times,
                                 std::uint64_t cameras, std::uint64_t vertices, StorageMode mode);

// Raw RGB frames at 4 bytes per scalar.
std::uint64_t raw_rgb_bytes(std::uint64_t height, std::uint64_t width, std::uint64_t times,
                            std::uint64_t cameras);

}  // namespace dpm4d
