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

#include "archive.hpp"
#include "curation.hpp"
#include "error.hpp"
#include "fixtures.hpp"
#include "generate.hpp"
#include "noise.hpp"
#include "rng.hpp"
#include "scene_sim.hpp"
#include "trajectory.hpp"

using namespace dpm4d;

namespace {

CameraMotionSpec orbit(double r, double polar, double azimuth, std::vector<Spherical> deltas) {
  CameraMotionSpec s;
  s.kind = MotionKind::kOrbit;
  s.root = Vec3(0.5, -0.25, 0.8);
  s.start = {r, polar, azimuth};
  s.deltas = std::move(deltas);
  return s;
}

}  // namespace

TEST_CASE("seed streams are independent and stable") {
  CHECK(derive_seed(1, "scene") == derive_seed(1, "scene"));
  CHECK(derive_seed(1, "scene") != derive_seed(1, "cameras"));
  CHECK(derive_seed(1, "scene") != derive_seed(2, "scene"));
}

TEST_CASE("static shot without shake repeats one pose") {
  CameraMotionSpec s;
  s.kind = MotionKind::kStatic;
  const auto cams = sample_trajectory(s, 12, 32, 32, 5);
  for (const auto& c : cams) {
    CHECK(c.o == cams.front().o);
    CHECK(c.R == cams.front().R);
  }
}

TEST_CASE("full zero-shake orbit stays on its sphere") {
  const auto s = orbit(3.5, 55.0, 10.0, {{0.0, 0.0, 360.0}});
  const auto poses = base_poses(s, 37);
  for (const auto& p : poses) CHECK(std::abs((p.position - s.root).norm() - 3.5) < 1e-6);
  std::vector<Vec3> path;
  for (const auto& p : poses) path.push_back(p.position);
  CHECK(coverage_stats(path, s.root).azimuth_span_deg == doctest::Approx(360.0));
}

TEST_CASE("orbit radius follows the keyframe interpolation") {
  auto s = orbit(3.0, 40.0, 0.0, {{2.0, 10.0, 90.0}, {-1.0, -5.0, 45.0}});
  s.keyframe_times = {0.0, 0.25, 1.0};
  const int T = 41;
  const auto poses = base_poses(s, T);
  for (int t = 0; t < T; ++t) {
    const double x = static_cast<double>(t) / (T - 1);
    const double r = x <= 0.25 ? 3.0 + 2.0 * x / 0.25 : 5.0 - 1.0 * (x - 0.25) / 0.75;
    CHECK(std::abs((poses[t].position - s.root).norm() - r) < 1e-6);
  }
}

TEST_CASE("requested deltas show up in the measured coverage") {
  auto s = orbit(4.0, 30.0, 20.0, {{1.5, 25.0, 120.0}});
  s.position_shake = 0.01;
  s.target_shake = 0.02;
  std::vector<Vec3> path;
  for (const auto& c : sample_trajectory(s, 30, 16, 16, 3)) path.push_back(c.o);
  const CoverageStats cov = coverage_stats(path, s.root);
  const double slack_deg = std::asin(std::sqrt(3.0) * 0.01 / 3.9) * 180.0 / M_PI * 2;
  CHECK(std::abs(cov.azimuth_span_deg - 120.0) <= slack_deg * 4);
  CHECK(std::abs(cov.polar_span_deg - 25.0) <= slack_deg * 2);
  CHECK(std::abs(cov.radial_span - 1.5) <= 2 * std::sqrt(3.0) * 0.01);
}

TEST_CASE("gradient noise vanishes on the lattice and respects its bound") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const GradientNoise n(seed);
    for (int x = -300; x <= 300; ++x) CHECK(n(static_cast<double>(x)) == 0.0);
    Rng rng(seed);
    for (int k = 0; k < 10000; ++k) CHECK(std::abs(n(rng.uniform(-100, 100))) <= GradientNoise::kBound);
  }
}

TEST_CASE("shake offsets stay inside the amplitude bound") {
  std::vector<LookAtPose> base(10000, LookAtPose{Vec3(3, 0, 1), Vec3::Zero()});
  const double amp = 0.05;
  const auto shaken = perlin_shake(base, amp, 0.0, 0.137, 44);
  double worst = 0.0;
  for (std::size_t t = 0; t < base.size(); ++t) {
    worst = std::max(worst, (shaken[t].position - base[t].position).norm());
    CHECK(shaken[t].target == base[t].target);
  }
  CHECK(worst <= amp * std::sqrt(3.0) * GradientNoise::kBound);
  CHECK(worst > 0.0);
  const auto still = perlin_shake(base, 0.0, 0.0, 0.137, 44);
  CHECK(still[17].position == base[17].position);
}

TEST_CASE("every emitted camera has a field of view in range") {
  for (auto pattern : {RigPattern::kIndependent, RigPattern::kPairedOrbits, RigPattern::kStaticPlusOrbits}) {
    Rng rng(derive_seed(3, "cameras"));
    for (int k = 0; k < 20; ++k) {
      for (const auto& spec : make_rig(pattern, 8, Vec3::Zero(), RigRanges{}, rng)) {
        for (const auto& cam : sample_trajectory(spec, 4, 40, 30, 1)) {
          CHECK(cam.hfov_deg() >= kMinHfovDeg - 1e-9);
          CHECK(cam.hfov_deg() <= kMaxHfovDeg + 1e-9);
        }
      }
    }
  }
}

TEST_CASE("paired orbits share the first frame") {
  GenerateConfig c = testing::small_config(16, 6, 4, 12);
  c.rig = RigPattern::kPairedOrbits;
  const GeneratedClip g = generate_clip(c);
  for (int pair = 0; pair < 2; ++pair) {
    const CameraParams& a = g.clip.cameras[FrameId{2 * pair, 0}.flat(4)];
    const CameraParams& b = g.clip.cameras[FrameId{2 * pair + 1, 0}.flat(4)];
    CHECK((a.o - b.o).norm() == 0.0);
    CHECK((a.R - b.R).norm() == 0.0);
    CHECK((a.K - b.K).norm() == 0.0);
    const CameraParams& a1 = g.clip.cameras[FrameId{2 * pair, 5}.flat(4)];
    const CameraParams& b1 = g.clip.cameras[FrameId{2 * pair + 1, 5}.flat(4)];
    CHECK((a1.o - b1.o).norm() > 1e-3);
  }
}

TEST_CASE("four static shots sit 90 degrees apart") {
  Rng rng(8);
  const auto rig = make_rig(RigPattern::kStaticPlusOrbits, 8, Vec3::Zero(), RigRanges{}, rng);
  REQUIRE(rig.size() == 8);
  for (int k = 0; k < 4; ++k) {
    CHECK(rig[k].kind == MotionKind::kStatic);
    CHECK(rig[k + 4].kind == MotionKind::kOrbit);
    const Vec3 p = rig[k].root + spherical_to_offset(rig[k].start);
    const Vec3 q = rig[(k + 1) % 4].root + spherical_to_offset(rig[(k + 1) % 4].start);
    const double d = std::remainder(std::atan2(q.y(), q.x()) - std::atan2(p.y(), p.x()), 2 * M_PI);
    CHECK(std::abs(std::abs(d) - M_PI / 2) < 1e-9);
  }
}

TEST_CASE("unknown names are rejected") {
  CHECK_THROWS_AS(rig_pattern_from_string("circular"), Error);
  CHECK_THROWS_AS(motion_kind_from_string("crane"), Error);
  CHECK_THROWS_AS(object_kind_from_string("dragon"), Error);
  CHECK(rig_pattern_from_string(to_string(RigPattern::kPairedOrbits)) == RigPattern::kPairedOrbits);
}

TEST_CASE("scene composition is seeded and footprints are disjoint") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    SceneSpec spec;
    spec.seed = seed;
    const ComposedScene a = compose_scene(spec, 4);
    const ComposedScene b = compose_scene(spec, 4);
    REQUIRE(a.scene.meshes().size() == b.scene.meshes().size());
    for (std::size_t m = 0; m < a.scene.meshes().size(); ++m) {
      CHECK(a.scene.meshes()[m].positions == b.scene.meshes()[m].positions);
    }
    const int dynamic = static_cast<int>(a.objects.size());
    CHECK(dynamic >= 2);
    CHECK(dynamic <= 4);
    int humans = 0;
    for (const auto& o : a.objects) humans += o.kind == ObjectKind::kWalker;
    CHECK(humans == 1);
    for (std::size_t i = 0; i < a.objects.size(); ++i) {
      for (std::size_t j = i + 1; j < a.objects.size(); ++j) {
        CHECK_FALSE(a.objects[i].footprint.overlaps(a.objects[j].footprint));
      }
    }
  }
}

TEST_CASE("a quad filling the view renders constant depth") {
  const double d = 2.0;
  const auto quad = testing::make_mesh(
      0, {{Vec3(-10, -10, d), Vec3(10, -10, d), Vec3(10, 10, d), Vec3(-10, 10, d)}}, {{0, 1, 2}, {0, 2, 3}});
  const Scene scene({quad}, 1);
  const auto cam = CameraParams::from_hfov(24, 16, 70.0);
  const RasterResult r = rasterize(scene, cam, 0);
  for (float z : r.depth.z) CHECK(z == doctest::Approx(d).epsilon(1e-7));
  for (auto s : r.seg) CHECK(s == 0u);
}

TEST_CASE("nearer surfaces win the depth test") {
  const auto far = testing::make_mesh(0, {{Vec3(-10, -10, 5), Vec3(10, -10, 5), Vec3(0, 10, 5)}}, {{0, 1, 2}});
  const std::vector<Vec3> tri{Vec3(-10, -10, 1), Vec3(10, -10, 1), Vec3(0, 10, 1)};
  const auto near = testing::make_mesh(3, {tri, tri}, {{0, 1, 2}});
  const Scene scene({far, near}, 2);
  const auto cam = CameraParams::from_hfov(9, 9, 30.0);
  const RasterResult r = rasterize(scene, cam, 0);
  const std::size_t centre = r.depth.index(4, 4);
  CHECK(r.depth.z[centre] == doctest::Approx(1.0));
  CHECK(r.seg[centre] == 3u);
}

TEST_CASE("generation is deterministic across worker counts") {
  GenerateConfig c = testing::small_config(24, 4, 2, 77);
  const auto a = serialize_archive(generate_clip(c).clip);
  c.workers = 3;
  const auto b = serialize_archive(generate_clip(c).clip);
  CHECK(a == b);
  c.seed = 78;
  CHECK(serialize_archive(generate_clip(c).clip) != a);
}
