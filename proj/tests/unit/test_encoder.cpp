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

#include "encoder.hpp"
#include "error.hpp"
#include "fixtures.hpp"
#include "generate.hpp"
#include "rng.hpp"
#include "scene_sim.hpp"

using namespace dpm4d;
using dpm4d::testing::make_mesh;

namespace {

Vec3 random_vec(Rng& rng, double r) { return Vec3(rng.uniform(-r, r), rng.uniform(-r, r), rng.uniform(-r, r)); }

const GeneratedClip& clip() {
  static const GeneratedClip g = generate_clip(testing::small_config(48, 6, 2, 23));
  return g;
}

}  // namespace

TEST_CASE("closest point matches an exhaustive distance and stays on the simplex") {
  Rng rng(1);
  for (int k = 0; k < 20000; ++k) {
    const Vec3 a = random_vec(rng, 1), b = random_vec(rng, 1), c = random_vec(rng, 1), p = random_vec(rng, 2);
    const TrianglePoint tp = closest_point_on_triangle(p, a, b, c);
    CHECK(tp.alpha.minCoeff() >= 0.0);
    CHECK(tp.alpha.maxCoeff() <= 1.0);
    CHECK(std::abs(tp.alpha.sum() - 1.0) <= 1e-15);
    CHECK(std::abs(tp.distance - testing::point_triangle_distance(p, a, b, c)) <= 1e-9);
    CHECK((tp.alpha[0] * a + tp.alpha[1] * b + tp.alpha[2] * c - tp.point).norm() <= 1e-9);
  }
}

TEST_CASE("vertex and centroid queries recover exact weights") {
  SceneSpec spec;
  spec.seed = 3;
  const Scene scene = compose_scene(spec, 2).scene;
  const FaceAccel accel(scene, 1);
  Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    const auto f = static_cast<std::uint32_t>(rng.below(scene.num_faces()));
    const auto tri = scene.triangle(f, 1);
    const FitResult c = fit_pixel((tri[0] + tri[1] + tri[2]) / 3.0, accel);
    CHECK(c.residual <= 1e-12);
    // A shared vertex may resolve to any face that touches it.
    const FitResult v = fit_pixel(tri[1], accel);
    CHECK(v.residual <= 1e-12);
    CHECK((scene.eval_point(v.coord, 1) - tri[1]).norm() <= 1e-12);
  }
  const AnimatedMesh one = make_mesh(1, {{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)}, {Vec3(0, 0, 1), Vec3(1, 0, 1), Vec3(0, 1, 1)}},
                                     {{0, 1, 2}});
  const Scene single({one}, 2);
  const FitResult centroid = fit_pixel(Vec3(1.0 / 3, 1.0 / 3, 1), FaceAccel(single, 1));
  CHECK(centroid.coord.face == 0);
  CHECK((centroid.coord.alpha - Vec3::Constant(1.0 / 3)).norm() < 1e-12);
  CHECK(centroid.residual < 1e-12);
}

TEST_CASE("single triangle fit matches the closed-form projection") {
  const AnimatedMesh one = make_mesh(1, {{Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(0, 2, 0)}}, {{0, 1, 2}});
  const Scene scene({one}, 1);
  const FitResult inside = brute_force_fit(Vec3(0.5, 0.5, 0.7), scene, 0);
  CHECK(inside.residual == doctest::Approx(0.7));
  CHECK((inside.coord.alpha - Vec3(0.5, 0.25, 0.25)).norm() < 1e-12);
  const FitResult outside = brute_force_fit(Vec3(3, -1, 0), scene, 0);
  CHECK(outside.residual == doctest::Approx(std::sqrt(2.0)));
  CHECK((outside.coord.alpha - Vec3(0, 1, 0)).norm() < 1e-12);
}

TEST_CASE("fitting against no faces is an error") {
  const AnimatedMesh one = make_mesh(1, {{Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(0, 2, 0)}}, {{0, 1, 2}});
  const Scene scene({one}, 1);
  CHECK_THROWS_AS(brute_force_fit(Vec3::Zero(), scene, 0, 0, 0), Error);
  CHECK_THROWS_AS(fit_pixel(Vec3::Zero(), FaceAccel(scene, 0, 0, 0)), Error);
  CHECK_THROWS_AS(brute_force_fit(Vec3::Zero(), Scene{}, 0), Error);
}

TEST_CASE("residual never grows as faces are added") {
  SceneSpec spec;
  spec.seed = 8;
  const Scene scene = compose_scene(spec, 1).scene;
  Rng rng(8);
  for (int k = 0; k < 20; ++k) {
    const Vec3 p = random_vec(rng, 4);
    double previous = std::numeric_limits<double>::infinity();
    for (std::uint32_t end = 1; end <= scene.num_faces(); end += 1 + end / 8) {
      const double r = brute_force_fit(p, scene, 0, 0, end).residual;
      CHECK(r <= previous);
      previous = r;
    }
  }
}

TEST_CASE("accelerated fit equals brute force on surface samples") {
  Rng rng(12);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    SceneSpec spec;
    spec.seed = seed;
    const Scene scene = compose_scene(spec, 3).scene;
    const FaceAccel accel(scene, 2);
    for (int k = 0; k < 2500; ++k) {
      const auto f = static_cast<std::uint32_t>(rng.below(scene.num_faces()));
      const auto tri = scene.triangle(f, 2);
      const double a = rng.uniform(), b = rng.uniform() * (1 - a);
      const Vec3 p = a * tri[0] + b * tri[1] + (1 - a - b) * tri[2] + random_vec(rng, 0.01);
      const FitResult fast = fit_pixel(p, accel);
      const FitResult slow = brute_force_fit(p, scene, 2);
      CHECK(std::abs(fast.residual - slow.residual) <= 1e-9);
      if (std::abs(fast.residual - slow.residual) > 1e-9 || fast.coord.face != slow.coord.face) {
        // Different faces are only allowed on ties.
        const auto t2 = scene.triangle(slow.coord.face, 2);
        CHECK(std::abs(closest_point_on_triangle(p, t2[0], t2[1], t2[2]).distance - fast.residual) <= 1e-9);
      }
    }
  }
}

TEST_CASE("frame with no dynamic objects encodes to static and invalid only") {
  const GeneratedClip& g = clip();
  const std::vector<std::uint32_t> no_objects(g.clip.frames[0].seg.size(), 0);
  const BaryMap m = encode_frame(g.clip.frames[0].depth, &no_objects, g.clip.cameras[0], g.clip.scene, 0);
  for (const auto& r : m.records) CHECK(r.kind() != PixelKind::kDynamic);
}

TEST_CASE("every dynamic pixel round-trips through the encoder") {
  const GeneratedClip& g = clip();
  CHECK(g.report.dynamic_pixels > 0);
  CHECK(g.report.rejected_pixels == 0);
  for (int f = 0; f < g.clip.header.num_frames(); ++f) {
    const int t = FrameId::from_flat(f, g.clip.header.num_cameras).time;
    const Frame& fr = g.clip.frames[f];
    for (std::size_t i = 0; i < fr.bary.records.size(); ++i) {
      const BaryRecord& r = fr.bary.records[i];
      if (r.kind() != PixelKind::kDynamic) continue;
      const BaryCoord bc = r.decode();
      const auto tri = g.clip.scene.triangle(bc.face, t);
      const double edge = std::max({(tri[1] - tri[0]).norm(), (tri[2] - tri[1]).norm(), (tri[0] - tri[2]).norm()});
      const Vec3 q = unproject(fr.depth, g.clip.cameras[f], static_cast<int>(i % fr.depth.width),
                               static_cast<int>(i / fr.depth.width));
      CHECK((g.clip.scene.eval_point(bc, t) - q).norm() <= 1e-3 + edge * std::ldexp(1.0, -15));
    }
  }
}

TEST_CASE("encoding is deterministic and independent of worker count") {
  const GeneratedClip& g = clip();
  const Frame& fr = g.clip.frames[5];
  EncodeOptions one, many;
  one.workers = 1;
  many.workers = 4;
  const BaryMap a = encode_frame(fr.depth, &fr.seg, g.clip.cameras[5], g.clip.scene, 2, one);
  const BaryMap b = encode_frame(fr.depth, &fr.seg, g.clip.cameras[5], g.clip.scene, 2, many);
  const BaryMap c = encode_frame(fr.depth, &fr.seg, g.clip.cameras[5], g.clip.scene, 2, one);
  CHECK(a == b);
  CHECK(a == c);
  CHECK(a == fr.bary);
}

TEST_CASE("rasterizer ground truth decodes to its own depth") {
  const GeneratedClip& g = clip();
  for (int f = 0; f < g.clip.header.num_frames(); ++f) {
    const int t = FrameId::from_flat(f, g.clip.header.num_cameras).time;
    const RasterResult& r = g.raster[f];
    for (std::size_t i = 0; i < r.face.size(); ++i) {
      if (r.face[i] < 0) continue;
      const Vec3 p = g.clip.scene.eval_point({static_cast<std::uint32_t>(r.face[i]), r.alpha[i]}, t);
      const Vec3 q = unproject(g.clip.cameras[f], static_cast<double>(i % r.depth.width),
                               static_cast<double>(i / r.depth.width), r.depth.z[i]);
      // Depth is stored as float32.
      CHECK((p - q).norm() <= 1e-6 * std::max(1.0, q.norm()) + 1e-7 * r.depth.z[i] * 8);
    }
  }
}

TEST_CASE("encoder reproduces the rasterizer's own bary map") {
  const GeneratedClip& g = clip();
  std::size_t same_face = 0, total = 0;
  for (int f = 0; f < g.clip.header.num_frames(); ++f) {
    const int t = FrameId::from_flat(f, g.clip.header.num_cameras).time;
    const RasterResult& r = g.raster[f];
    const BaryMap& enc = g.clip.frames[f].bary;
    for (std::size_t i = 0; i < r.face.size(); ++i) {
      if (enc.records[i].kind() != PixelKind::kDynamic) continue;
      REQUIRE(r.face[i] >= 0);
      ++total;
      const BaryCoord truth{static_cast<std::uint32_t>(r.face[i]), r.alpha[i]};
      const BaryCoord fit = enc.records[i].decode();
      if (fit.face == truth.face) ++same_face;
      const Vec3 a = g.clip.scene.eval_point(truth, t), b = g.clip.scene.eval_point(fit, t);
      const auto tri = g.clip.scene.triangle(fit.face, t);
      const double edge = std::max({(tri[1] - tri[0]).norm(), (tri[2] - tri[1]).norm(), (tri[0] - tri[2]).norm()});
      // Float depth plus alpha quantisation.
      CHECK((a - b).norm() <= 1e-6 * std::max(1.0, a.norm()) + edge * std::ldexp(1.0, -15) + 4e-7 * r.depth.z[i]);
    }
  }
  // Faces may differ only where neighbouring triangles are coplanar or share
  // the hit point.
  CHECK(total > 0);
  CHECK(static_cast<double>(same_face) >= 0.95 * static_cast<double>(total));
}

TEST_CASE("restricting the search to the segmented object never loses") {
  const GeneratedClip& g = clip();
  std::size_t worse = 0, total = 0;
  for (int f = 0; f < g.clip.header.num_frames(); ++f) {
    const int t = FrameId::from_flat(f, g.clip.header.num_cameras).time;
    const Frame& fr = g.clip.frames[f];
    const FaceAccel whole(g.clip.scene, t);
    for (std::size_t i = 0; i < fr.seg.size(); ++i) {
      if (fr.seg[i] == 0 || !fr.depth.valid(i)) continue;
      const int m = g.clip.scene.find_object(fr.seg[i]);
      const Vec3 q = unproject(fr.depth, g.clip.cameras[f], static_cast<int>(i % fr.depth.width),
                               static_cast<int>(i / fr.depth.width));
      const FitResult local =
          brute_force_fit(q, g.clip.scene, t, g.clip.scene.face_begin(m), g.clip.scene.face_end(m));
      const FitResult global = fit_pixel(q, whole);
      ++total;
      if (local.residual > global.residual + 1e-9) ++worse;
    }
  }
  CHECK(total > 0);
  CHECK(static_cast<double>(worse) <= 1e-3 * static_cast<double>(total));
}

TEST_CASE("report counts add up") {
  const GeneratedClip& g = clip();
  const auto& h = g.clip.header;
  CHECK(g.report.dynamic_pixels + g.report.static_pixels + g.report.invalid_pixels ==
        static_cast<std::uint64_t>(h.width) * h.height * h.num_frames());
  std::uint64_t hist = 0;
  for (auto n : g.report.histogram) hist += n;
  CHECK(hist == g.report.dynamic_pixels + g.report.rejected_pixels);
}
