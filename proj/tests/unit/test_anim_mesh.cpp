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

#include <Eigen/Geometry>

#include "anim_mesh.hpp"
#include "error.hpp"
#include "fixtures.hpp"
#include "rng.hpp"
#include "scene_sim.hpp"

using namespace dpm4d;
using dpm4d::testing::make_mesh;

namespace {

// Two triangles translating by `step` per frame.
AnimatedMesh translating_quad(std::uint32_t id, int T, const Vec3& step) {
  std::vector<std::vector<Vec3>> pos(T);
  for (int t = 0; t < T; ++t) {
    const Vec3 d = t * step;
    pos[t] = {Vec3(0, 0, 0) + d, Vec3(1, 0, 0) + d, Vec3(1, 1, 0) + d, Vec3(0, 1, 0) + d};
  }
  return make_mesh(id, pos, {{0, 1, 2}, {0, 2, 3}});
}

}  // namespace

TEST_CASE("vertex weights return the vertex, equal weights the centroid") {
  Scene scene({translating_quad(1, 4, Vec3(0.1, 0, 0))}, 4);
  for (int t = 0; t < 4; ++t) {
    const auto tri = scene.triangle(0, t);
    CHECK((scene.eval_point({0, Vec3(1, 0, 0)}, t) - tri[0]).norm() == 0.0);
    CHECK((scene.eval_point({0, Vec3(0, 0, 1)}, t) - tri[2]).norm() == 0.0);
    const Vec3 centroid = (tri[0] + tri[1] + tri[2]) / 3.0;
    CHECK((scene.eval_point({0, Vec3::Constant(1.0 / 3.0)}, t) - centroid).norm() < 1e-15);
  }
}

TEST_CASE("static meshes are time invariant") {
  const AnimatedMesh ground = make_mesh(0, {{Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(0, 2, 0)}}, {{0, 1, 2}});
  Scene scene({ground}, 9);
  const BaryCoord bc{0, Vec3(0.2, 0.3, 0.5)};
  for (int t = 1; t < 9; ++t) CHECK(scene.eval_point(bc, t) == scene.eval_point(bc, 0));
}

TEST_CASE("rigid translation gives an arithmetic track") {
  const Vec3 step(0.25, -0.5, 0.125);
  Scene scene({translating_quad(1, 6, step)}, 6);
  const auto track = scene.eval_track({1, Vec3(0.1, 0.6, 0.3)});
  REQUIRE(track.size() == 6);
  for (int t = 1; t < 6; ++t) CHECK((track[t] - track[t - 1] - step).norm() < 1e-6);
}

TEST_CASE("union table offsets faces by preceding vertex counts") {
  const auto a = translating_quad(1, 2, Vec3::Zero());
  const auto one = union_faces({a});
  CHECK(one.faces == a.faces);

  const auto b = make_mesh(2, {{Vec3(5, 0, 0), Vec3(6, 0, 0), Vec3(5, 1, 0)}, {Vec3(5, 0, 1), Vec3(6, 0, 1), Vec3(5, 1, 1)}},
                           {{0, 1, 2}});
  const auto two = union_faces({a, b});
  REQUIRE(two.faces.size() == 3);
  CHECK(two.faces[2] == Face{4, 5, 6});
}

TEST_CASE("global face lookup round-trips on generated scenes") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SceneSpec spec;
    spec.seed = seed;
    const Scene scene = compose_scene(spec, 3).scene;
    for (std::uint32_t f = 0; f < scene.num_faces(); ++f) {
      const auto ref = scene.locate(f);
      CHECK(scene.global_face(ref.mesh, ref.local) == f);
      CHECK(f >= scene.face_begin(ref.mesh));
      CHECK(f < scene.face_end(ref.mesh));
    }
  }
}

TEST_CASE("eval_point commutes with rigid transforms of the vertices") {
  Rng rng(21);
  const int T = 4;
  std::vector<std::vector<Vec3>> pos(T), moved(T);
  const Eigen::AngleAxisd rot(rng.uniform(0, 6.28), Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), 1).normalized());
  const Vec3 shift(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
  for (int t = 0; t < T; ++t) {
    for (int v = 0; v < 5; ++v) {
      pos[t].push_back(Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)));
      moved[t].push_back(rot * pos[t].back() + shift);
    }
  }
  const std::vector<Face> faces{{0, 1, 2}, {1, 3, 4}, {2, 3, 4}};
  Scene base({make_mesh(1, pos, faces)}, T);
  Scene xf({make_mesh(1, moved, faces)}, T);
  for (int k = 0; k < 200; ++k) {
    const double a = rng.uniform(), b = rng.uniform() * (1 - a);
    const BaryCoord bc{static_cast<std::uint32_t>(rng.below(3)), Vec3(a, b, 1 - a - b)};
    const int t = static_cast<int>(rng.below(T));
    CHECK((rot * base.eval_point(bc, t) + shift - xf.eval_point(bc, t)).norm() < 1e-6);
  }
}

TEST_CASE("eval_point stays on its triangle") {
  SceneSpec spec;
  spec.seed = 4;
  const Scene scene = compose_scene(spec, 5).scene;
  Rng rng(4);
  for (int k = 0; k < 2000; ++k) {
    const double a = rng.uniform(), b = rng.uniform() * (1 - a);
    const BaryCoord bc{static_cast<std::uint32_t>(rng.below(scene.num_faces())), Vec3(a, b, 1 - a - b)};
    const int t = static_cast<int>(rng.below(5));
    const auto tri = scene.triangle(bc.face, t);
    const double edge = std::max({(tri[1] - tri[0]).norm(), (tri[2] - tri[1]).norm(), (tri[0] - tri[2]).norm()});
    CHECK(testing::point_triangle_distance(scene.eval_point(bc, t), tri[0], tri[1], tri[2]) <= 1e-6 * edge);
  }
}

TEST_CASE("vertex trajectory storage is three scalars per vertex and frame") {
  const auto dyn = translating_quad(1, 7, Vec3(0, 0, 0.1));
  const auto stat = make_mesh(0, {{Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(0, 2, 0)}}, {{0, 1, 2}});
  // Animated meshes keep every frame; static meshes keep one.
  const Scene animated({dyn, translating_quad(2, 7, Vec3(0.1, 0, 0))}, 7);
  CHECK(animated.num_vertices() == 8);
  CHECK(animated.trajectory_scalars() == 3u * 8u * 7u);
  const Scene mixed({stat, dyn}, 7);
  CHECK(mixed.num_vertices() == 7);
  CHECK(mixed.trajectory_scalars() == 3u * 4u * 7u + 3u * 3u * 1u);
}

TEST_CASE("out-of-range coordinates are rejected") {
  Scene scene({translating_quad(1, 3, Vec3::Zero())}, 3);
  CHECK_THROWS_AS(scene.eval_point({2, Vec3(1, 0, 0)}, 0), Error);
  CHECK_THROWS_AS(scene.eval_point({0, Vec3(1, 0, 0)}, 3), Error);
  CHECK_THROWS_AS(scene.eval_point({0, Vec3(0.9, 0.9, -0.8)}, 0), Error);
}
