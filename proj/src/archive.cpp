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

#include "archive.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>
#include <zlib.h>

#include <bit>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace dpm4d {

static_assert(std::endian::native == std::endian::little,
              "archive I/O assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'D', 'P', 'M', '4', 'D', 'C', 'L', 'P'};
constexpr char kEndMagic[8] = {'D', 'P', 'M', '4', 'D', 'E', 'N', 'D'};
constexpr std::size_t kHeaderSize = 64;
constexpr std::size_t kFooterSize = 24;
constexpr std::size_t kIndexEntrySize = 40;
constexpr std::size_t kCameraRecordSize = 21 * 8;
constexpr std::uint32_t kCodecRaw = 0;
constexpr std::uint32_t kCodecZlib = 1;
constexpr std::uint32_t kAllKeys = 0;

std::uint32_t crc(const std::uint8_t* data, std::size_t n) {
  return static_cast<std::uint32_t>(::crc32(0L, data, static_cast<uInt>(n)));
}

class ByteWriter {
 public:
  std::vector<std::uint8_t> bytes;

  template <typename T>
  void put(T value) {
    const auto* p = reinterpret_cast<const std::uint8_t*>(&value);
    bytes.insert(bytes.end(), p, p + sizeof(T));
  }
  void put_raw(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    bytes.insert(bytes.end(), p, p + n);
  }
};

class ByteReader {
 public:
  ByteReader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

  template <typename T>
  T get() {
    T value;
    get_raw(&value, sizeof(T));
    return value;
  }
  void get_raw(void* out, std::size_t n) {
    if (n > size_ - pos_) fail(ErrorCode::kCorrupt, "section shorter than its declared layout");
    std::memcpy(out, data_ + pos_, n);
    pos_ += n;
  }
  bool done() const { return pos_ == size_; }

 private:
  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

std::vector<std::uint8_t> deflate_bytes(const std::vector<std::uint8_t>& raw) {
  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> out(bound);
  const int rc = compress2(out.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 6);
  if (rc != Z_OK) fail(ErrorCode::kInternal, "zlib compression failed");
  out.resize(bound);
  return out;
}

std::vector<std::uint8_t> inflate_bytes(const std::vector<std::uint8_t>& stored, std::uint64_t raw_size) {
  std::vector<std::uint8_t> out(raw_size);
  uLongf len = static_cast<uLongf>(raw_size);
  const int rc = uncompress(out.data(), &len, stored.data(), static_cast<uLong>(stored.size()));
  if (rc != Z_OK || len != raw_size) fail(ErrorCode::kCorrupt, "zlib stream does not decode to the declared size");
  return out;
}

template <typename T>
std::vector<std::uint8_t> as_bytes(const std::vector<T>& v) {
  std::vector<std::uint8_t> out(v.size() * sizeof(T));
  if (!v.empty()) std::memcpy(out.data(), v.data(), out.size());
  return out;
}

template <typename T>
std::vector<T> from_bytes(const std::vector<std::uint8_t>& b, std::size_t expected_count) {
  if (b.size() != expected_count * sizeof(T)) fail(ErrorCode::kCorrupt, "section size does not match dims");
  std::vector<T> out(expected_count);
  if (!b.empty()) std::memcpy(out.data(), b.data(), b.size());
  return out;
}

struct PendingSection {
  SectionInfo info;
  std::vector<std::uint8_t> stored;
};

PendingSection make_section(const char (&tag)[5], std::uint32_t key, std::vector<std::uint8_t> raw,
                            std::uint32_t codec) {
  PendingSection s;
  std::memcpy(s.info.tag, tag, 4);
  s.info.key = key;
  s.info.raw_size = raw.size();
  s.info.codec = codec;
  s.stored = codec == kCodecZlib ? deflate_bytes(raw) : std::move(raw);
  s.info.stored_size = s.stored.size();
  s.info.crc = crc(s.stored.data(), s.stored.size());
  return s;
}

std::vector<std::uint8_t> encode_cameras(const std::vector<CameraParams>& cams) {
  ByteWriter w;
  for (const auto& c : cams) {
    for (int r = 0; r < 3; ++r)
      for (int k = 0; k < 3; ++k) w.put<double>(c.K(r, k));
    for (int r = 0; r < 3; ++r)
      for (int k = 0; k < 3; ++k) w.put<double>(c.R(r, k));
    for (int k = 0; k < 3; ++k) w.put<double>(c.o[k]);
  }
  return w.bytes;
}

std::vector<CameraParams> decode_cameras(const std::vector<std::uint8_t>& bytes, const ClipHeader& h) {
  const std::size_t n = static_cast<std::size_t>(h.num_frames());
  if (bytes.size() != n * kCameraRecordSize) fail(ErrorCode::kCorrupt, "camera section size mismatch");
  ByteReader r(bytes.data(), bytes.size());
  std::vector<CameraParams> cams(n);
  for (auto& c : cams) {
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) c.K(i, k) = r.get<double>();
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) c.R(i, k) = r.get<double>();
    for (int k = 0; k < 3; ++k) c.o[k] = r.get<double>();
    c.width = h.width;
    c.height = h.height;
  }
  return cams;
}

std::vector<std::uint8_t> encode_mesh(const AnimatedMesh& m) {
  ByteWriter w;
  w.put<std::uint32_t>(m.object_id);
  w.put<std::uint8_t>(m.is_static ? 1 : 0);
  w.put<std::uint8_t>(0);
  w.put<std::uint16_t>(0);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(m.num_vertices));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(m.stored_frames));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(m.faces.size()));
  w.put_raw(m.faces.data(), m.faces.size() * sizeof(Face));
  for (const auto& p : m.positions) w.put_raw(p.data(), 3 * sizeof(float));
  return w.bytes;
}

AnimatedMesh decode_mesh(const std::vector<std::uint8_t>& bytes) {
  ByteReader r(bytes.data(), bytes.size());
  AnimatedMesh m;
  m.object_id = r.get<std::uint32_t>();
  m.is_static = r.get<std::uint8_t>() != 0;
  r.get<std::uint8_t>();
  r.get<std::uint16_t>();
  m.num_vertices = static_cast<int>(r.get<std::uint32_t>());
  m.stored_frames = static_cast<int>(r.get<std::uint32_t>());
  const std::uint32_t nf = r.get<std::uint32_t>();
  const std::uint64_t need = static_cast<std::uint64_t>(nf) * sizeof(Face) +
                             static_cast<std::uint64_t>(m.num_vertices) * m.stored_frames * 12ull;
  if (bytes.size() < 20 || need != bytes.size() - 20) fail(ErrorCode::kCorrupt, "mesh section size mismatch");
  m.faces.resize(nf);
  r.get_raw(m.faces.data(), nf * sizeof(Face));
  m.positions.resize(static_cast<std::size_t>(m.num_vertices) * m.stored_frames);
  for (auto& p : m.positions) r.get_raw(p.data(), 3 * sizeof(float));
  return m;
}

void put_header(ByteWriter& w, const ClipHeader& h, std::uint32_t num_meshes) {
  const std::size_t start = w.bytes.size();
  w.put_raw(kMagic, 8);
  w.put<std::uint32_t>(h.version);
  w.put<std::uint32_t>(kHeaderSize);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(h.width));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(h.height));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(h.num_times));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(h.num_cameras));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(h.num_frames()));
  w.put<std::uint32_t>(num_meshes);
  w.put<std::uint32_t>(h.conventions);
  w.put<std::uint32_t>(h.has_rgb ? 1u : 0u);
  w.put<std::uint64_t>(0);
  w.put<std::uint32_t>(0);
  w.put<std::uint32_t>(crc(w.bytes.data() + start, kHeaderSize - 4));
}

}  // namespace

void ClipData::validate() const {
  const ClipHeader& h = header;
  require(h.width > 0 && h.height > 0 && h.num_times > 0 && h.num_cameras > 0,
          ErrorCode::kInvalidArgument, "clip dims must be positive");
  require(scene.num_frames() == h.num_times, ErrorCode::kInvalidArgument,
          "scene frame count differs from header T");
  const std::size_t n = static_cast<std::size_t>(h.num_frames());
  require(cameras.size() == n && frames.size() == n, ErrorCode::kInvalidArgument,
          "camera/frame count differs from T*C");
  const std::size_t px = static_cast<std::size_t>(h.width) * h.height;
  for (std::size_t i = 0; i < n; ++i) {
    const Frame& f = frames[i];
    require(cameras[i].width == h.width && cameras[i].height == h.height,
            ErrorCode::kInvalidArgument, "camera dims differ from header");
    cameras[i].validate();
    require(f.depth.width == h.width && f.depth.height == h.height && f.depth.z.size() == px,
            ErrorCode::kInvalidArgument, "depth dims differ from header");
    require(f.seg.size() == px, ErrorCode::kInvalidArgument, "segmentation dims differ from header");
    require(f.bary.width == h.width && f.bary.height == h.height && f.bary.records.size() == px,
            ErrorCode::kInvalidArgument, "bary dims differ from header");
    require(h.has_rgb ? f.rgb.size() == 3 * px : f.rgb.empty(), ErrorCode::kInvalidArgument,
            "rgb payload does not match the header flag");
    for (std::size_t p = 0; p < px; ++p) {
      const std::uint32_t id = f.seg[p];
      if (id != 0 && scene.find_object(id) < 0)
        fail(ErrorCode::kInvalidArgument, "segmentation id " + std::to_string(id) + " has no mesh");
      const BaryRecord& rec = f.bary.records[p];
      if (rec.kind() == PixelKind::kDynamic && rec.face >= scene.num_faces())
        fail(ErrorCode::kInvalidArgument, "bary face index outside the scene union");
      if (rec.kind() != PixelKind::kInvalid && !f.depth.valid(p))
        fail(ErrorCode::kInvalidArgument, "surface pixel without a valid depth sample");
    }
  }
}

std::vector<std::uint8_t> serialize_archive(const ClipData& clip) {
  clip.validate();
  const ClipHeader& h = clip.header;
  std::vector<PendingSection> sections;
  sections.push_back(make_section("META", kAllKeys,
                                  std::vector<std::uint8_t>(clip.metadata_json.begin(), clip.metadata_json.end()),
                                  kCodecRaw));
  sections.push_back(make_section("CAMS", kAllKeys, encode_cameras(clip.cameras), kCodecRaw));
  const auto& meshes = clip.scene.meshes();
  for (std::size_t m = 0; m < meshes.size(); ++m) {
    sections.push_back(make_section("MESH", static_cast<std::uint32_t>(m), encode_mesh(meshes[m]), kCodecRaw));
  }
  for (std::size_t i = 0; i < clip.frames.size(); ++i) {
    const Frame& f = clip.frames[i];
    const auto key = static_cast<std::uint32_t>(i);
    sections.push_back(make_section("DPTH", key, as_bytes(f.depth.z), kCodecZlib));
    sections.push_back(make_section("SEGM", key, as_bytes(f.seg), kCodecZlib));
    sections.push_back(make_section("BARY", key, as_bytes(f.bary.records), kCodecZlib));
    if (h.has_rgb) sections.push_back(make_section("RGB8", key, f.rgb, kCodecZlib));
  }

  ByteWriter w;
  put_header(w, h, static_cast<std::uint32_t>(meshes.size()));
  for (auto& s : sections) {
    s.info.offset = w.bytes.size();
    w.put_raw(s.stored.data(), s.stored.size());
  }
  const std::uint64_t index_offset = w.bytes.size();
  w.put<std::uint32_t>(static_cast<std::uint32_t>(sections.size()));
  for (const auto& s : sections) {
    w.put_raw(s.info.tag, 4);
    w.put<std::uint32_t>(s.info.key);
    w.put<std::uint64_t>(s.info.offset);
    w.put<std::uint64_t>(s.info.stored_size);
    w.put<std::uint64_t>(s.info.raw_size);
    w.put<std::uint32_t>(s.info.codec);
    w.put<std::uint32_t>(s.info.crc);
  }
  const std::uint64_t index_size = w.bytes.size() - index_offset;
  const std::uint32_t index_crc = crc(w.bytes.data() + index_offset, index_size);
  w.put<std::uint64_t>(index_offset);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(index_size));
  w.put<std::uint32_t>(index_crc);
  w.put_raw(kEndMagic, 8);
  return w.bytes;
}

void write_archive(const ClipData& clip, const std::string& path) {
  const auto bytes = serialize_archive(clip);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::kIo, "short write to " + path);
}

namespace {

void pread_exact(int fd, void* out, std::size_t n, std::uint64_t offset, const std::string& path) {
  auto* dst = static_cast<std::uint8_t*>(out);
  std::size_t done = 0;
  while (done < n) {
    const ssize_t got = ::pread(fd, dst + done, n - done, static_cast<off_t>(offset + done));
    if (got < 0) {
      if (errno == EINTR) continue;
      fail(ErrorCode::kIo, "read error on " + path + ": " + std::strerror(errno));
    }
    if (got == 0) fail(ErrorCode::kTruncated, path + " ends before a declared section");
    done += static_cast<std::size_t>(got);
  }
}

}  // namespace

Archive::Archive(Archive&& other) noexcept { *this = std::move(other); }

Archive& Archive::operator=(Archive&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = other.fd_;
    other.fd_ = -1;
    path_ = std::move(other.path_);
    file_size_ = other.file_size_;
    header_ = other.header_;
    cameras_ = std::move(other.cameras_);
    scene_ = std::move(other.scene_);
    metadata_ = std::move(other.metadata_);
    sections_ = std::move(other.sections_);
    lookup_ = std::move(other.lookup_);
  }
  return *this;
}

Archive::~Archive() {
  if (fd_ >= 0) ::close(fd_);
}

Archive Archive::open(const std::string& path) {
  Archive a;
  a.path_ = path;
  a.fd_ = ::open(path.c_str(), O_RDONLY | O_CLOEXEC);
  if (a.fd_ < 0) fail(ErrorCode::kIo, "cannot open " + path + ": " + std::strerror(errno));
  struct stat st {};
  if (::fstat(a.fd_, &st) != 0) fail(ErrorCode::kIo, "cannot stat " + path);
  a.file_size_ = static_cast<std::uint64_t>(st.st_size);

  if (a.file_size_ < 8) fail(ErrorCode::kTruncated, path + " is too short to be an archive");
  std::uint8_t head[kHeaderSize];
  pread_exact(a.fd_, head, 8, 0, path);
  if (std::memcmp(head, kMagic, 8) != 0) fail(ErrorCode::kCorrupt, path + " is not a dpm4d archive");
  if (a.file_size_ < kHeaderSize + kFooterSize) fail(ErrorCode::kTruncated, path + " is truncated");
  pread_exact(a.fd_, head, kHeaderSize, 0, path);
  ByteReader hr(head, kHeaderSize);
  std::uint8_t magic[8];
  hr.get_raw(magic, 8);
  ClipHeader& h = a.header_;
  h.version = hr.get<std::uint32_t>();
  if (h.version != kArchiveVersion) {
    fail(ErrorCode::kVersionMismatch, "archive version " + std::to_string(h.version) +
                                          " is not supported (expected " +
                                          std::to_string(kArchiveVersion) + ")");
  }
  const std::uint32_t stored_crc = [&] {
    std::uint32_t v;
    std::memcpy(&v, head + kHeaderSize - 4, 4);
    return v;
  }();
  if (stored_crc != crc(head, kHeaderSize - 4)) fail(ErrorCode::kChecksum, "header checksum mismatch");
  if (hr.get<std::uint32_t>() != kHeaderSize) fail(ErrorCode::kCorrupt, "unexpected header size");
  h.width = static_cast<int>(hr.get<std::uint32_t>());
  h.height = static_cast<int>(hr.get<std::uint32_t>());
  h.num_times = static_cast<int>(hr.get<std::uint32_t>());
  h.num_cameras = static_cast<int>(hr.get<std::uint32_t>());
  const std::uint32_t num_frames = hr.get<std::uint32_t>();
  const std::uint32_t num_meshes = hr.get<std::uint32_t>();
  h.conventions = hr.get<std::uint32_t>();
  h.has_rgb = (hr.get<std::uint32_t>() & 1u) != 0;
  if (h.conventions != kAllConventions) fail(ErrorCode::kCorrupt, "archive uses unknown conventions");
  if (h.width <= 0 || h.height <= 0 || h.num_times <= 0 || h.num_cameras <= 0 ||
      num_frames != static_cast<std::uint32_t>(h.num_frames())) {
    fail(ErrorCode::kCorrupt, "inconsistent header dims");
  }

  std::uint8_t foot[kFooterSize];
  pread_exact(a.fd_, foot, kFooterSize, a.file_size_ - kFooterSize, path);
  if (std::memcmp(foot + 16, kEndMagic, 8) != 0) fail(ErrorCode::kTruncated, path + " is truncated (no footer)");
  ByteReader fr(foot, kFooterSize);
  const auto index_offset = fr.get<std::uint64_t>();
  const auto index_size = fr.get<std::uint32_t>();
  const auto index_crc = fr.get<std::uint32_t>();
  if (index_offset < kHeaderSize || index_offset + index_size + kFooterSize != a.file_size_) {
    fail(ErrorCode::kCorrupt, "index location is inconsistent with the file size");
  }
  std::vector<std::uint8_t> index(index_size);
  pread_exact(a.fd_, index.data(), index_size, index_offset, path);
  if (crc(index.data(), index.size()) != index_crc) fail(ErrorCode::kChecksum, "index checksum mismatch");
  ByteReader ir(index.data(), index.size());
  const auto count = ir.get<std::uint32_t>();
  if (index_size != 4 + static_cast<std::uint64_t>(count) * kIndexEntrySize)
    fail(ErrorCode::kCorrupt, "index size mismatch");
  for (std::uint32_t k = 0; k < count; ++k) {
    SectionInfo s;
    ir.get_raw(s.tag, 4);
    s.key = ir.get<std::uint32_t>();
    s.offset = ir.get<std::uint64_t>();
    s.stored_size = ir.get<std::uint64_t>();
    s.raw_size = ir.get<std::uint64_t>();
    s.codec = ir.get<std::uint32_t>();
    s.crc = ir.get<std::uint32_t>();
    if (s.offset < kHeaderSize || s.offset + s.stored_size > index_offset || s.codec > kCodecZlib)
      fail(ErrorCode::kCorrupt, "section entry out of bounds");
    std::uint32_t tag;
    std::memcpy(&tag, s.tag, 4);
    a.lookup_[{tag, s.key}] = a.sections_.size();
    a.sections_.push_back(s);
  }

  const auto meta = a.read_section("META", kAllKeys);
  a.metadata_.assign(meta.begin(), meta.end());
  a.cameras_ = decode_cameras(a.read_section("CAMS", kAllKeys), h);
  std::vector<AnimatedMesh> meshes;
  for (std::uint32_t m = 0; m < num_meshes; ++m) meshes.push_back(decode_mesh(a.read_section("MESH", m)));
  try {
    a.scene_ = Scene(std::move(meshes), h.num_times);
  } catch (const Error& e) {
    fail(ErrorCode::kCorrupt, std::string("mesh block invalid: ") + e.what());
  }
  return a;
}

std::vector<std::uint8_t> Archive::read_section(const SectionInfo& s) const {
  std::vector<std::uint8_t> stored(s.stored_size);
  pread_exact(fd_, stored.data(), stored.size(), s.offset, path_);
  if (crc(stored.data(), stored.size()) != s.crc) {
    fail(ErrorCode::kChecksum, "checksum mismatch in section " + std::string(s.tag, 4) + "/" +
                                   std::to_string(s.key));
  }
  if (s.codec == kCodecZlib) return inflate_bytes(stored, s.raw_size);
  if (stored.size() != s.raw_size) fail(ErrorCode::kCorrupt, "raw section size mismatch");
  return stored;
}

std::vector<std::uint8_t> Archive::read_section(const char* tag, std::uint32_t key) const {
  std::uint32_t t;
  std::memcpy(&t, tag, 4);
  const auto it = lookup_.find({t, key});
  if (it == lookup_.end()) {
    fail(ErrorCode::kCorrupt, "missing section " + std::string(tag, 4) + "/" + std::to_string(key));
  }
  return read_section(sections_[it->second]);
}

void Archive::check_frame(int frame) const {
  require(frame >= 0 && frame < header_.num_frames(), ErrorCode::kOutOfRange,
          "frame " + std::to_string(frame) + " outside [0, " + std::to_string(header_.num_frames()) + ")");
}

const CameraParams& Archive::camera(int frame) const {
  check_frame(frame);
  return cameras_[static_cast<std::size_t>(frame)];
}

DepthMap Archive::load_depth(int frame) const {
  check_frame(frame);
  DepthMap d;
  d.width = header_.width;
  d.height = header_.height;
  d.z = from_bytes<float>(read_section("DPTH", static_cast<std::uint32_t>(frame)),
                          static_cast<std::size_t>(d.width) * d.height);
  return d;
}

BaryMap Archive::load_bary(int frame) const {
  check_frame(frame);
  BaryMap b;
  b.width = header_.width;
  b.height = header_.height;
  b.records = from_bytes<BaryRecord>(read_section("BARY", static_cast<std::uint32_t>(frame)),
                                     static_cast<std::size_t>(b.width) * b.height);
  for (const auto& r : b.records) {
    if (r.kind() == PixelKind::kDynamic &&
        (r.face >= scene_.num_faces() || static_cast<std::uint32_t>(r.alpha1) + r.alpha2 > 65535u)) {
      fail(ErrorCode::kCorrupt, "bary record does not resolve in the scene union");
    }
  }
  return b;
}

std::vector<std::uint32_t> Archive::load_seg(int frame) const {
  check_frame(frame);
  return from_bytes<std::uint32_t>(read_section("SEGM", static_cast<std::uint32_t>(frame)),
                                   static_cast<std::size_t>(header_.width) * header_.height);
}

Frame Archive::load_frame(int frame) const {
  Frame f;
  f.depth = load_depth(frame);
  f.seg = load_seg(frame);
  f.bary = load_bary(frame);
  if (header_.has_rgb) {
    f.rgb = from_bytes<std::uint8_t>(read_section("RGB8", static_cast<std::uint32_t>(frame)),
                                     3ull * header_.width * header_.height);
  }
  return f;
}

ClipData Archive::read_all() const {
  ClipData clip;
  clip.header = header_;
  clip.cameras = cameras_;
  clip.scene = scene_;
  clip.metadata_json = metadata_;
  clip.frames.reserve(static_cast<std::size_t>(header_.num_frames()));
  for (int i = 0; i < header_.num_frames(); ++i) clip.frames.push_back(load_frame(i));
  return clip;
}

StorageEstimate storage_estimate(std::uint64_t height, std::uint64_t width, std::uint64_t times,
                                 std::uint64_t cameras, std::uint64_t vertices, StorageMode mode) {
  require(height > 0 && width > 0 && times > 0 && cameras > 0, ErrorCode::kInvalidArgument,
          "storage dims must be positive");
  StorageEstimate e;
  const std::uint64_t images = times * cameras;
  if (mode == StorageMode::kDense) {
    e.pixel_bytes = 3ull * 4ull * height * width * times * images;
  } else {
    e.pixel_bytes = 4ull * 4ull * height * width * images;
    e.vertex_bytes = 3ull * 4ull * vertices * times;
  }
  return e;
}

std::uint64_t raw_rgb_bytes(std::uint64_t height, std::uint64_t width, std::uint64_t times,
                            std::uint64_t cameras) {
  return 3ull * 4ull * height * width * times * cameras;
}

}  // namespace dpm4d
