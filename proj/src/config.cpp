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

#include "config.hpp"

#include <cstdlib>
#include <map>

#include "error.hpp"

namespace dpm4d {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  fail(ErrorCode::kSchema, "config '" + path + "': " + what);
}

template <typename T>
T read(const json& v, const std::string& path) {
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) schema_error(path, "expected a boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) schema_error(path, "expected an integer");
    if (std::is_unsigned_v<T> && v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0) {
      schema_error(path, "expected a non-negative integer");
    }
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) schema_error(path, "expected a number");
  } else {
    if (!v.is_string()) schema_error(path, "expected a string");
  }
  return v.get<T>();
}

Vec3 read_vec3(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) schema_error(path, "expected an array of 3 numbers");
  Vec3 out;
  for (int k = 0; k < 3; ++k) out[k] = read<double>(v[k], path);
  return out;
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected an object");
}

using FieldSetter = std::function<void(const json&, const std::string&)>;

void apply_fields(const json& j, const std::string& prefix, const std::map<std::string, FieldSetter>& fields) {
  require_object(j, prefix.empty() ? "<root>" : prefix);
  for (const auto& [key, value] : j.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    auto it = fields.find(key);
    if (it == fields.end()) schema_error(path, "unknown key");
    it->second(value, path);
  }
}

template <typename T>
FieldSetter field(T& target) {
  return [&target](const json& v, const std::string& path) { target = read<T>(v, path); };
}

void merge_scene(SceneSpec& s, const json& j) {
  apply_fields(j, "scene",
               {{"root", [&](const json& v, const std::string& p) { s.root = read_vec3(v, p); }},
                {"num_objects", field(s.num_objects)},
                {"objects",
                 [&](const json& v, const std::string& p) {
                   if (!v.is_array()) schema_error(p, "expected an array of object kinds");
                   s.objects.clear();
                   for (const auto& e : v) {
                     try {
                       s.objects.push_back(object_kind_from_string(read<std::string>(e, p)));
                     } catch (const Error& err) {
                       if (err.code() == ErrorCode::kSchema) throw;
                       schema_error(p, err.what());
                     }
                   }
                 }},
                {"include_human", field(s.include_human)},
                {"grid_cells", field(s.grid_cells)},
                {"cell_size", field(s.cell_size)},
                {"placement_retries", field(s.placement_retries)},
                {"ground_half_extent", field(s.ground_half_extent)},
                {"crates", field(s.crates)}});
}

void merge_ranges(RigRanges& r, const json& j) {
  apply_fields(j, "ranges",
               {{"radius_min", field(r.radius_min)},
                {"radius_max", field(r.radius_max)},
                {"radius_delta_min", field(r.radius_delta_min)},
                {"radius_delta_max", field(r.radius_delta_max)},
                {"radius_floor", field(r.radius_floor)},
                {"polar_min", field(r.polar_min)},
                {"polar_max", field(r.polar_max)},
                {"polar_delta_min", field(r.polar_delta_min)},
                {"polar_delta_max", field(r.polar_delta_max)},
                {"azimuth_delta_min", field(r.azimuth_delta_min)},
                {"azimuth_delta_max", field(r.azimuth_delta_max)},
                {"hfov_min", field(r.hfov_min)},
                {"hfov_max", field(r.hfov_max)},
                {"position_shake_max", field(r.position_shake_max)},
                {"target_shake_max", field(r.target_shake_max)},
                {"dolly_fraction", field(r.dolly_fraction)},
                {"dolly_distance_min", field(r.dolly_distance_min)},
                {"dolly_distance_max", field(r.dolly_distance_max)}});
}

}  // namespace

void GenerateConfig::validate() const {
  require(width > 0 && height > 0, ErrorCode::kInvalidArgument, "image size must be positive");
  require(num_times >= 1, ErrorCode::kInvalidArgument, "need at least one frame");
  require(num_cameras >= 1, ErrorCode::kInvalidArgument, "need at least one camera");
  require(encode.surface_tolerance > 0.0, ErrorCode::kInvalidArgument, "surface tolerance must be positive");
  require(ranges.hfov_min >= kMinHfovDeg && ranges.hfov_max <= kMaxHfovDeg && ranges.hfov_min <= ranges.hfov_max,
          ErrorCode::kInvalidArgument, "hfov range must lie inside [39.6, 90] degrees");
  require(ranges.radius_min > 0.0 && ranges.radius_min <= ranges.radius_max, ErrorCode::kInvalidArgument,
          "bad radius range");
  require(ranges.dolly_fraction >= 0.0 && ranges.dolly_fraction <= 1.0, ErrorCode::kInvalidArgument,
          "dolly fraction must lie in [0, 1]");
}

json to_json(const RigRanges& r) {
  return json{{"radius_min", r.radius_min},
              {"radius_max", r.radius_max},
              {"radius_delta_min", r.radius_delta_min},
              {"radius_delta_max", r.radius_delta_max},
              {"radius_floor", r.radius_floor},
              {"polar_min", r.polar_min},
              {"polar_max", r.polar_max},
              {"polar_delta_min", r.polar_delta_min},
              {"polar_delta_max", r.polar_delta_max},
              {"azimuth_delta_min", r.azimuth_delta_min},
              {"azimuth_delta_max", r.azimuth_delta_max},
              {"hfov_min", r.hfov_min},
              {"hfov_max", r.hfov_max},
              {"position_shake_max", r.position_shake_max},
              {"target_shake_max", r.target_shake_max},
              {"dolly_fraction", r.dolly_fraction},
              {"dolly_distance_min", r.dolly_distance_min},
              {"dolly_distance_max", r.dolly_distance_max}};
}

json to_json(const GenerateConfig& c) {
  json objects = json::array();
  for (ObjectKind k : c.scene.objects) objects.push_back(to_string(k));
  return json{{"width", c.width},
              {"height", c.height},
              {"frames", c.num_times},
              {"cameras", c.num_cameras},
              {"seed", c.seed},
              {"rig", to_string(c.rig)},
              {"rgb", c.with_rgb},
              {"scene",
               {{"root", {c.scene.root.x(), c.scene.root.y(), c.scene.root.z()}},
                {"num_objects", c.scene.num_objects},
                {"objects", objects},
                {"include_human", c.scene.include_human},
                {"grid_cells", c.scene.grid_cells},
                {"cell_size", c.scene.cell_size},
                {"placement_retries", c.scene.placement_retries},
                {"ground_half_extent", c.scene.ground_half_extent},
                {"crates", c.scene.crates}}},
              {"ranges", to_json(c.ranges)},
              {"encode", {{"surface_tolerance", c.encode.surface_tolerance}}}};
}

void merge_json(GenerateConfig& c, const json& j) {
  apply_fields(j, "",
               {{"width", field(c.width)},
                {"height", field(c.height)},
                {"frames", field(c.num_times)},
                {"cameras", field(c.num_cameras)},
                {"seed", field(c.seed)},
                {"rig",
                 [&](const json& v, const std::string& p) {
                   try {
                     c.rig = rig_pattern_from_string(read<std::string>(v, p));
                   } catch (const Error& err) {
                     if (err.code() == ErrorCode::kSchema) throw;
                     schema_error(p, err.what());
                   }
                 }},
                {"rgb", field(c.with_rgb)},
                {"workers", field(c.workers)},
                {"scene", [&](const json& v, const std::string&) { merge_scene(c.scene, v); }},
                {"ranges", [&](const json& v, const std::string&) { merge_ranges(c.ranges, v); }},
                {"encode", [&](const json& v, const std::string&) {
                   apply_fields(v, "encode", {{"surface_tolerance", field(c.encode.surface_tolerance)}});
                 }}});
}

void merge_env(GenerateConfig& c, const EnvGetter& getenv) {
  json overlay = json::object();
  auto parse_number = [](const std::string& name, const std::string& text) {
    try {
      std::size_t used = 0;
      const double x = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return x;
    } catch (const std::exception&) {
      fail(ErrorCode::kSchema, "environment " + name + ": expected a number, got '" + text + "'");
    }
  };
  auto parse_int = [&](const std::string& name, const std::string& text) {
    const double x = parse_number(name, text);
    if (x != static_cast<double>(static_cast<std::int64_t>(x))) {
      fail(ErrorCode::kSchema, "environment " + name + ": expected an integer, got '" + text + "'");
    }
    return static_cast<std::int64_t>(x);
  };
  const std::pair<const char*, const char*> ints[] = {{"DPM4D_WIDTH", "width"},   {"DPM4D_HEIGHT", "height"},
                                                      {"DPM4D_FRAMES", "frames"}, {"DPM4D_CAMERAS", "cameras"},
                                                      {"DPM4D_WORKERS", "workers"}};
  for (const auto& [env, key] : ints) {
    if (auto v = getenv(env)) overlay[key] = parse_int(env, *v);
  }
  if (auto v = getenv("DPM4D_SEED")) {
    try {
      std::size_t used = 0;
      const unsigned long long s = std::stoull(*v, &used);
      if (used != v->size()) throw std::invalid_argument(*v);
      overlay["seed"] = static_cast<std::uint64_t>(s);
    } catch (const std::exception&) {
      fail(ErrorCode::kSchema, "environment DPM4D_SEED: expected an unsigned integer, got '" + *v + "'");
    }
  }
  if (auto v = getenv("DPM4D_RIG")) overlay["rig"] = *v;
  if (auto v = getenv("DPM4D_RGB")) {
    if (*v == "1" || *v == "true") overlay["rgb"] = true;
    else if (*v == "0" || *v == "false") overlay["rgb"] = false;
    else fail(ErrorCode::kSchema, "environment DPM4D_RGB: expected 0/1/true/false, got '" + *v + "'");
  }
  if (auto v = getenv("DPM4D_TOLERANCE")) overlay["encode"] = {{"surface_tolerance", parse_number("DPM4D_TOLERANCE", *v)}};
  merge_json(c, overlay);
}

EnvGetter process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (v == nullptr) return std::nullopt;
    return std::string(v);
  };
}

json to_json(const EncodeReport& r) {
  json hist = json::object();
  for (std::size_t b = 0; b < r.histogram.size(); ++b) hist[EncodeReport::bin_label(b)] = r.histogram[b];
  return json{{"dynamic_pixels", r.dynamic_pixels},
              {"static_pixels", r.static_pixels},
              {"invalid_pixels", r.invalid_pixels},
              {"rejected_pixels", r.rejected_pixels},
              {"worst_residual", r.worst_residual},
              {"worst_rejected_residual", r.worst_rejected_residual},
              {"residual_histogram", hist}};
}

}  // namespace dpm4d
