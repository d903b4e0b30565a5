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
#include <fstream>
#include <map>

#include <json.hpp>

#include "archive.hpp"
#include "config.hpp"
#include "error.hpp"
#include "fixtures.hpp"
#include "generate.hpp"
#include "services.hpp"
#include "tensor_io.hpp"

using namespace dpm4d;
using nlohmann::json;
using dpm4d::testing::temp_path;

namespace {

const std::string& demo_path() {
  static const std::string path = [] {
    const std::string p = temp_path("services_demo.dpm");
    write_archive(generate_clip(testing::small_config(32, 6, 2, 5)).clip, p);
    return p;
  }();
  return path;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

EnvGetter fake_env(std::map<std::string, std::string> vars) {
  return [vars](const std::string& k) -> std::optional<std::string> {
    auto it = vars.find(k);
    if (it == vars.end()) return std::nullopt;
    return it->second;
  };
}

}  // namespace

TEST_CASE("config JSON round-trips and rejects unknown keys") {
  GenerateConfig c;
  c.seed = 99;
  c.rig = RigPattern::kStaticPlusOrbits;
  c.scene.objects = {ObjectKind::kTeleporter, ObjectKind::kFlag};
  c.encode.surface_tolerance = 5e-4;
  GenerateConfig d;
  merge_json(d, to_json(c));
  CHECK(to_json(d) == to_json(c));

  CHECK(code_of([] { GenerateConfig x; merge_json(x, json{{"widht", 3}}); }) == ErrorCode::kSchema);
  CHECK(code_of([] { GenerateConfig x; merge_json(x, json{{"width", "wide"}}); }) == ErrorCode::kSchema);
  CHECK(code_of([] { GenerateConfig x; merge_json(x, json{{"scene", {{"colour", 1}}}}); }) == ErrorCode::kSchema);
}

TEST_CASE("environment overlays file values and is validated") {
  GenerateConfig c;
  merge_json(c, json{{"width", 40}, {"seed", 1}});
  merge_env(c, fake_env({{"DPM4D_WIDTH", "48"}, {"DPM4D_RIG", "paired-orbits"}, {"DPM4D_RGB", "1"}}));
  CHECK(c.width == 48);
  CHECK(c.seed == 1);
  CHECK(c.rig == RigPattern::kPairedOrbits);
  CHECK(c.with_rgb);
  GenerateConfig e;
  CHECK(code_of([&] { merge_env(e, fake_env({{"DPM4D_FRAMES", "ten"}})); }) == ErrorCode::kSchema);
  CHECK(code_of([&] { merge_env(e, fake_env({{"DPM4D_FRAMES", "2.5"}})); }) == ErrorCode::kSchema);
  GenerateConfig bad;
  bad.num_times = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("tensor files round-trip and reject malformed input") {
  Tensor t;
  t.shape = {2, 3, 4};
  for (int i = 0; i < 24; ++i) t.data.push_back(i == 5 ? std::nanf("") : 0.5f * i);
  const std::string path = temp_path("t.d4t");
  write_tensor(path, t);
  const Tensor back = read_tensor(path);
  CHECK(back.shape == t.shape);
  REQUIRE(back.data.size() == 24);
  CHECK(std::isnan(back.data[5]));
  CHECK(back.data[7] == 3.5f);

  std::ofstream(temp_path("junk.d4t"), std::ios::binary) << "not a tensor at all";
  CHECK(code_of([] { read_tensor(temp_path("junk.d4t")); }) == ErrorCode::kSchema);
  CHECK(code_of([] { read_tensor(temp_path("missing.d4t")); }) == ErrorCode::kIo);
  Tensor wrong;
  wrong.shape = {3};
  wrong.data = {1, 2};
  CHECK_THROWS_AS(write_tensor(temp_path("w.d4t"), wrong), Error);
}

TEST_CASE("TUM trajectories round-trip") {
  const Archive a = Archive::open(demo_path());
  const Trajectory tr = ground_truth_trajectory(a, 1);
  const std::string path = temp_path("traj.txt");
  write_tum(path, tr);
  const Trajectory back = read_tum(path);
  REQUIRE(back.poses.size() == tr.poses.size());
  for (std::size_t i = 0; i < tr.poses.size(); ++i) {
    CHECK((back.poses[i].t - tr.poses[i].t).norm() < 1e-12);
    CHECK((back.poses[i].R - tr.poses[i].R).norm() < 1e-12);
    CHECK(back.timestamps[i] == tr.timestamps[i]);
  }
}

TEST_CASE("stats report layout and storage ratios") {
  const Archive a = Archive::open(demo_path());
  const json s = archive_stats(a);
  CHECK(s["width"] == 32);
  CHECK(s["frames"] == 12);
  CHECK(s["file_bytes"] == a.file_size());
  CHECK(s["config"]["seed"] == 5);
  CHECK(s["sections"]["BARY"]["count"] == 12);
  const std::uint64_t px = s["pixels"]["dynamic"].get<std::uint64_t>() + s["pixels"]["static"].get<std::uint64_t>() +
                           s["pixels"]["invalid"].get<std::uint64_t>();
  CHECK(px == 32u * 32u * 12u);
  CHECK(s["storage"]["dense"]["total_bytes"] == storage_estimate(32, 32, 6, 2, 0, StorageMode::kDense).total());
  CHECK(s["scene"]["trajectory_scalars"] == a.scene().trajectory_scalars());
}

TEST_CASE("curation rejects a teleporting asset") {
  GenerateConfig c = testing::small_config(32, 8, 2, 3);
  c.scene.objects = {ObjectKind::kTeleporter, ObjectKind::kArm};
  c.scene.include_human = false;
  const std::string path = temp_path("teleport.dpm");
  write_archive(generate_clip(c).clip, path);
  const json r = curate_archive(Archive::open(path), CurateOptions{});
  bool saw = false;
  for (const auto& asset : r["assets"]) {
    if (asset["kind"] == "teleporter") {
      CHECK_FALSE(asset["keep"].get<bool>());
      saw = true;
    }
  }
  CHECK(saw);
  CHECK(r["coverage"]["hfov_min_deg"].get<double>() >= 39.6);
  CHECK(r["coverage"]["hfov_max_deg"].get<double>() <= 90.0);
}

TEST_CASE("curation keeps a static asset") {
  GenerateConfig c = testing::small_config(32, 8, 2, 3);
  c.scene.objects = {ObjectKind::kFlag};
  c.scene.include_human = false;
  GeneratedClip g = generate_clip(c);
  std::vector<AnimatedMesh> frozen = g.clip.scene.meshes();
  for (auto& m : frozen) {
    for (int v = 0; v < m.num_vertices; ++v) {
      for (int t = 1; t < m.stored_frames; ++t) m.at(v, t) = m.at(v, 0);
    }
  }
  g.clip.scene = Scene(frozen, g.clip.header.num_times);
  const std::string path = temp_path("frozen.dpm");
  write_archive(g.clip, path);
  const json r = curate_archive(Archive::open(path), CurateOptions{});
  for (const auto& asset : r["assets"]) {
    CHECK(asset["keep"].get<bool>());
    CHECK(asset["min_iou"].get<double>() == 1.0);
  }
}

TEST_CASE("exported ground truth scores perfectly") {
  const Archive a = Archive::open(demo_path());
  const std::string out = temp_path("gt.bin");
  auto run = [&](json req) {
    export_ground_truth(a, req, out);
    req["pred"] = out;
    return evaluate(a, req);
  };
  const json pose = run({{"task", "pose"}, {"camera", 1}});
  CHECK(pose["ate"].get<double>() < 1e-9);
  CHECK(pose["rpe_t"].get<double>() < 1e-9);
  const json tracks = run({{"task", "tracks"}, {"frame", 3}});
  CHECK(tracks["apd"] == 100.0);
  CHECK(tracks["epe"] == 0.0);
  const json depth = run({{"task", "depth"}, {"camera", 0}});
  CHECK(depth["scale"]["abs_rel"].get<double>() < 1e-7);
  CHECK(depth["scale-shift"]["delta_1_25"] == 100.0);
  const json recon = run({{"task", "recon"}, {"frame", 2}, {"time", 4}});
  CHECK(recon["accuracy"] == 0.0);
  CHECK(recon["completeness"] == 0.0);
  CHECK(recon["normal_consistency"].get<double>() == doctest::Approx(1.0));
  const json cor = run({{"task", "correspondence"}, {"source", 0}, {"target", 1}});
  CHECK(cor["l_cor"] == 0.0);
}

TEST_CASE("evaluation requests are schema checked") {
  const Archive a = Archive::open(demo_path());
  CHECK(code_of([&] { evaluate(a, {{"task", "pose"}, {"pred", "x"}, {"camera", 0}, {"bogus", 1}}); }) ==
        ErrorCode::kSchema);
  CHECK(code_of([&] { evaluate(a, {{"task", "weather"}}); }) == ErrorCode::kSchema);
  CHECK(code_of([&] { export_ground_truth(a, {{"task", "depth"}, {"camera", 9}}, temp_path("x")); }) ==
        ErrorCode::kOutOfRange);
  // A tensor with the wrong shape for the task.
  export_ground_truth(a, {{"task", "depth"}, {"camera", 0}}, temp_path("depth.bin"));
  CHECK(code_of([&] { evaluate(a, {{"task", "tracks"}, {"frame", 0}, {"pred", temp_path("depth.bin")}}); }) ==
        ErrorCode::kSchema);
}
