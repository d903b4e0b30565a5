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

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "archive.hpp"
#include "error.hpp"
#include "fixtures.hpp"
#include "generate.hpp"
#include "query.hpp"
#include "rng.hpp"

using namespace dpm4d;
using dpm4d::testing::small_config;
using dpm4d::testing::temp_path;

namespace {

struct Demo {
  GeneratedClip gen;
  std::string path;
};

const Demo& demo() {
  static const Demo d = [] {
    Demo out{generate_clip(small_config(32, 8, 2, 17)), temp_path("codec_demo.dpm")};
    write_archive(out.gen.clip, out.path);
    return out;
  }();
  return d;
}

std::vector<char> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const std::string& path, const std::vector<char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

ErrorCode open_error(const std::string& path) {
  try {
    Archive a = Archive::open(path);
    for (int f = 0; f < a.header().num_frames(); ++f) a.load_frame(f);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

double max_edge(const Scene& scene, std::uint32_t face, int t) {
  const auto tri = scene.triangle(face, t);
  return std::max({(tri[1] - tri[0]).norm(), (tri[2] - tri[1]).norm(), (tri[0] - tri[2]).norm()});
}

}  // namespace

TEST_CASE("storage formulas") {
  const auto dense = storage_estimate(512, 512, 300, 8, 0, StorageMode::kDense);
  CHECK(dense.pixel_bytes == 12ull * 512 * 512 * 300 * 300 * 8);
  CHECK(dense.vertex_bytes == 0);
  const auto compact = storage_estimate(512, 512, 300, 8, 100000, StorageMode::kCompact);
  CHECK(compact.pixel_bytes == 16ull * 512 * 512 * 300 * 8);
  CHECK(compact.vertex_bytes == 12ull * 100000 * 300);
  CHECK(raw_rgb_bytes(512, 512, 300, 8) == 12ull * 512 * 512 * 300 * 8);
}

TEST_CASE("write, read, write is byte identical") {
  const Demo& d = demo();
  const Archive a = Archive::open(d.path);
  CHECK(a.header().width == 32);
  CHECK(a.header().num_frames() == 16);
  const ClipData back = a.read_all();
  CHECK(serialize_archive(back) == serialize_archive(d.gen.clip));
  const auto bytes = slurp(d.path);
  const auto ser = serialize_archive(d.gen.clip);
  CHECK(std::vector<std::uint8_t>(bytes.begin(), bytes.end()) == ser);
}

TEST_CASE("decoded frames equal what was written") {
  const Demo& d = demo();
  const Archive a = Archive::open(d.path);
  for (int f = 0; f < a.header().num_frames(); ++f) {
    const Frame fr = a.load_frame(f);
    CHECK(fr.bary == d.gen.clip.frames[f].bary);
    CHECK(fr.seg == d.gen.clip.frames[f].seg);
    CHECK(fr.depth.z == d.gen.clip.frames[f].depth.z);
  }
}

TEST_CASE("every truncation point fails loudly") {
  const auto bytes = slurp(demo().path);
  const std::string cut = temp_path("cut.dpm");
  Rng rng(1);
  std::vector<std::size_t> lengths{0, 4, 8, 63, 64, 100, bytes.size() - 1, bytes.size() - 24, bytes.size() - 25};
  for (int k = 0; k < 40; ++k) lengths.push_back(rng.below(bytes.size()));
  for (std::size_t n : lengths) {
    spit(cut, std::vector<char>(bytes.begin(), bytes.begin() + static_cast<long>(n)));
    const ErrorCode code = open_error(cut);
    CAPTURE(n);
    CHECK((code == ErrorCode::kTruncated || code == ErrorCode::kCorrupt || code == ErrorCode::kChecksum));
  }
}

TEST_CASE("version, magic and checksum failures are distinct") {
  const auto bytes = slurp(demo().path);
  const std::string bad = temp_path("bad.dpm");

  auto v = bytes;
  v[8] = 2;
  spit(bad, v);
  CHECK(open_error(bad) == ErrorCode::kVersionMismatch);

  auto m = bytes;
  m[0] = 'X';
  spit(bad, m);
  CHECK(open_error(bad) == ErrorCode::kCorrupt);

  auto h = bytes;
  h[20] ^= 0x01;  // width
  spit(bad, h);
  CHECK(open_error(bad) == ErrorCode::kChecksum);

  // A flipped byte inside the last section payload.
  const Archive a = Archive::open(demo().path);
  const SectionInfo& last = a.sections().back();
  auto s = bytes;
  s[last.offset + last.stored_size / 2] ^= 0x5A;
  spit(bad, s);
  CHECK(open_error(bad) == ErrorCode::kChecksum);

  CHECK_THROWS_AS(Archive::open(temp_path("does_not_exist.dpm")), Error);
}

TEST_CASE("archive beats the dense layout by at least T/4") {
  const GeneratedClip g = generate_clip(small_config(64, 16, 4, 2));
  const std::string path = temp_path("ratio.dpm");
  write_archive(g.clip, path);
  const Archive a = Archive::open(path);
  const auto dense = storage_estimate(64, 64, 16, 4, 0, StorageMode::kDense).total();
  CHECK(static_cast<double>(dense) / static_cast<double>(a.file_size()) >= 16.0 / 4.0);
}

TEST_CASE("own-frame DPM z channel equals stored depth") {
  const Demo& d = demo();
  const Archive a = Archive::open(d.path);
  for (int f = 0; f < a.header().num_frames(); ++f) {
    const int t = FrameId::from_flat(f, a.header().num_cameras).time;
    const PointMap pm = query_dpm(a, f, a.camera(f), t);
    const DepthMap depth = a.load_depth(f);
    for (std::size_t i = 0; i < pm.size(); ++i) {
      if (!pm.valid[i]) continue;
      // Dynamic pixels carry the fit residual and alpha quantisation.
      CHECK(std::abs(pm.points[i].z() - depth.z[i]) <= 1e-3 + 1e-5 * depth.z[i]);
    }
  }
}

TEST_CASE("a scene without motion has a time-constant DPM") {
  GenerateConfig c = small_config(24, 5, 2, 8);
  c.scene.include_human = false;
  c.scene.objects = {};
  c.scene.num_objects = 0;
  GeneratedClip g = generate_clip(c);
  // Freeze every mesh at its first frame.
  std::vector<AnimatedMesh> frozen = g.clip.scene.meshes();
  for (auto& m : frozen) {
    for (int v = 0; v < m.num_vertices; ++v) {
      for (int t = 1; t < m.stored_frames; ++t) m.at(v, t) = m.at(v, 0);
    }
  }
  g.clip.scene = Scene(frozen, 5);
  const auto world = CameraParams::world_frame();
  for (int f = 0; f < g.clip.header.num_frames(); ++f) {
    const PointMap p0 = query_dpm(g.clip, f, world, 0);
    for (int t = 1; t < 5; ++t) {
      const PointMap pt = query_dpm(g.clip, f, world, t);
      CHECK(pt.valid == p0.valid);
      for (std::size_t i = 0; i < pt.size(); ++i) {
        if (pt.valid[i]) CHECK((pt.points[i] - p0.points[i]).norm() == 0.0);
      }
    }
  }
}

TEST_CASE("query_dpm equals the materialised tensor") {
  const Demo& d = demo();
  const Archive a = Archive::open(d.path);
  const ClipData& clip = d.gen.clip;
  for (int f = 0; f < clip.header.num_frames(); ++f) {
    const auto naive = testing::materialize(clip, f);
    const Frame fr = a.load_frame(f);
    for (int t = 0; t < clip.header.num_times; ++t) {
      const PointMap pm = query_dpm(a, fr, f, CameraParams::world_frame(), t);
      for (std::size_t i = 0; i < pm.size(); ++i) {
        CHECK(static_cast<bool>(pm.valid[i]) == !std::isnan(naive.world[t][i].x()));
        if (pm.valid[i]) CHECK((pm.points[i] - naive.world[t][i]).norm() <= 1e-6);
      }
    }
  }
}

TEST_CASE("DPM in any reference equals change_reference of the world DPM") {
  const Demo& d = demo();
  const Archive a = Archive::open(d.path);
  Rng rng(99);
  const int F = a.header().num_frames(), T = a.header().num_times;
  const auto world = CameraParams::world_frame();
  for (int k = 0; k < 50; ++k) {
    const int i = static_cast<int>(rng.below(F)), ref = static_cast<int>(rng.below(F)),
              t = static_cast<int>(rng.below(T));
    const PointMap direct = query_dpm(a, i, a.camera(ref), t);
    const PointMap via = change_reference(query_dpm(a, i, world, t), world, a.camera(ref));
    CHECK(direct.valid == via.valid);
    double worst = 0.0;
    for (std::size_t p = 0; p < direct.size(); ++p) {
      if (direct.valid[p]) worst = std::max(worst, (direct.points[p] - via.points[p]).norm());
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("alpha quantisation error is bounded by edge length times 2^-15") {
  const Demo& d = demo();
  const GeneratedClip& g = d.gen;
  for (int f = 0; f < g.clip.header.num_frames(); ++f) {
    const int t = FrameId::from_flat(f, g.clip.header.num_cameras).time;
    const RasterResult& r = g.raster[f];
    for (std::size_t i = 0; i < r.face.size(); ++i) {
      if (r.face[i] < 0) continue;
      const BaryCoord exact{static_cast<std::uint32_t>(r.face[i]), r.alpha[i]};
      const BaryCoord q = BaryRecord::dynamic(exact).decode();
      for (int tt : {0, t, g.clip.header.num_times - 1}) {
        const double err = (g.clip.scene.eval_point(q, tt) - g.clip.scene.eval_point(exact, tt)).norm();
        CHECK(err <= max_edge(g.clip.scene, exact.face, tt) * std::ldexp(1.0, -15));
      }
    }
  }
}

TEST_CASE("record encoding keeps weights on the simplex") {
  Rng rng(31);
  for (int k = 0; k < 10000; ++k) {
    const double a = rng.uniform(), b = rng.uniform() * (1 - a);
    const BaryRecord r = BaryRecord::dynamic({7, Vec3(a, b, 1 - a - b)});
    CHECK(r.alpha1 + r.alpha2 <= 65535);
    const BaryCoord bc = r.decode();
    CHECK(bc.alpha.minCoeff() >= 0.0);
    CHECK(std::abs(bc.alpha.sum() - 1.0) < 1e-12);
  }
  CHECK(sizeof(BaryRecord) == 8);
  CHECK_THROWS_AS(BaryRecord::dynamic({BaryRecord::kStaticFace, Vec3(1, 0, 0)}), Error);
}

TEST_CASE("static pixel tracks are constant and invalid pixels refuse") {
  const Demo& d = demo();
  const Archive a = Archive::open(d.path);
  const BaryMap bary = a.load_bary(0);
  bool saw_static = false, saw_invalid = false;
  for (int v = 0; v < bary.height; ++v) {
    for (int u = 0; u < bary.width; ++u) {
      const PixelKind kind = bary.at(u, v).kind();
      if (kind == PixelKind::kStatic && !saw_static) {
        const Track tr = query_track(a, 0, u, v, CameraParams::world_frame());
        for (const Vec3& p : tr.points) CHECK(p == tr.points.front());
        saw_static = true;
      }
      if (kind == PixelKind::kInvalid && !saw_invalid) {
        CHECK_THROWS_AS(query_track(a, 0, u, v, CameraParams::world_frame()), Error);
        saw_invalid = true;
      }
    }
  }
  CHECK(saw_static);
  CHECK_THROWS_AS(query_track(a, 0, -1, 0, CameraParams::world_frame()), Error);
  CHECK_THROWS_AS(query_dpm(a, 99, CameraParams::world_frame(), 0), Error);
  CHECK_THROWS_AS(query_dpm(a, 0, CameraParams::world_frame(), 8), Error);
}

TEST_CASE("track at its own time reproduces the unprojected depth") {
  const Demo& d = demo();
  const Archive a = Archive::open(d.path);
  for (int f = 0; f < a.header().num_frames(); ++f) {
    const Frame fr = a.load_frame(f);
    const int t = FrameId::from_flat(f, a.header().num_cameras).time;
    for (int v = 0; v < fr.bary.height; ++v) {
      for (int u = 0; u < fr.bary.width; ++u) {
        if (fr.bary.at(u, v).kind() != PixelKind::kDynamic) continue;
        const Track tr = query_track(a, fr, f, u, v, CameraParams::world_frame());
        CHECK((tr.points[t] - unproject(fr.depth, a.camera(f), u, v)).norm() <= 1e-3 + 1e-5);
      }
    }
  }
}
