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
#include <functional>
#include <optional>
#include <string>

#include <json.hpp>

#include "encoder.hpp"
#include "scene_sim.hpp"
#include "trajectory.hpp"

namespace dpm4d {

// Every knob of the generation pipeline. Serialised into each archive's
// metadata so a clip can be regenerated from its own header.
struct GenerateConfig {
  int width = 64;
  int height = 64;
  int num_times = 16;
  int num_cameras = 4;
  std::uint64_t seed = 0;
  RigPattern rig = RigPattern::kIndependent;
  bool with_rgb = false;
  unsigned workers = 0;
  SceneSpec scene;
  RigRanges ranges;
  EncodeOptions encode;

  void validate() const;
};

nlohmann::json to_json(const GenerateConfig& config);

// Overlays the keys present in `j` onto `config`. Unknown keys and wrong
// value types throw kSchema.
void merge_json(GenerateConfig& config, const nlohmann::json& j);

// Environment overlay: DPM4D_WIDTH, DPM4D_HEIGHT, DPM4D_FRAMES, DPM4D_CAMERAS,
// DPM4D_SEED, DPM4D_RIG, DPM4D_RGB, DPM4D_WORKERS, DPM4D_TOLERANCE. The
// getter returns nullopt for unset variables.
using EnvGetter = std::function<std::optional<std::string>(const std::string&)>;
void merge_env(GenerateConfig& config, const EnvGetter& getenv);
EnvGetter process_env();

nlohmann::json to_json(const RigRanges& ranges);
nlohmann::json to_json(const EncodeReport& report);

}  // namespace dpm4d
