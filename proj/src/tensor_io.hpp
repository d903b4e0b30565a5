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
#include <string>
#include <vector>

#include "metrics.hpp"

namespace dpm4d {

// Dense float32 array. File layout, little-endian: "D4T1", u32 rank,
// rank x u64 dims (outermost first), then the row-major payload. NaN marks
// invalid entries.
struct Tensor {
  std::vector<std::uint64_t> shape;
  std::vector<float> data;

  std::uint64_t numel() const;
};

void write_tensor(const std::string& path, const Tensor& tensor);
// Throws kIo when unreadable and kSchema for a malformed file.
Tensor read_tensor(const std::string& path);

// TUM text trajectories: "timestamp tx ty tz qx qy qz qw" per line, '#'
// comments. Poses are camera-to-world.
void write_tum(const std::string& path, const Trajectory& trajectory);
Trajectory read_tum(const std::string& path);

}  // namespace dpm4d
