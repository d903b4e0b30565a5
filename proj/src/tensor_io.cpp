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

#include "tensor_io.hpp"

#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "error.hpp"

namespace dpm4d {

namespace {

constexpr char kTensorMagic[4] = {'D', '4', 'T', '1'};
constexpr std::uint32_t kMaxRank = 8;

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in, const std::string& path) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) fail(ErrorCode::kSchema, path + ": truncated tensor header");
  return v;
}

}  // namespace

std::uint64_t Tensor::numel() const {
  std::uint64_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

void write_tensor(const std::string& path, const Tensor& tensor) {
  require(tensor.numel() == tensor.data.size(), ErrorCode::kInvalidArgument, "tensor shape does not match data");
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::kIo, "cannot write " + path);
  out.write(kTensorMagic, 4);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(tensor.shape.size()));
  for (auto d : tensor.shape) put<std::uint64_t>(out, d);
  out.write(reinterpret_cast<const char*>(tensor.data.data()),
            static_cast<std::streamsize>(tensor.data.size() * sizeof(float)));
  require(static_cast<bool>(out), ErrorCode::kIo, "write failed for " + path);
}

Tensor read_tensor(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open " + path);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kTensorMagic, 4) != 0) {
    fail(ErrorCode::kSchema, path + ": not a D4T1 tensor");
  }
  Tensor t;
  const auto rank = get<std::uint32_t>(in, path);
  require(rank >= 1 && rank <= kMaxRank, ErrorCode::kSchema, path + ": bad tensor rank");
  for (std::uint32_t k = 0; k < rank; ++k) t.shape.push_back(get<std::uint64_t>(in, path));
  const std::uint64_t n = t.numel();
  const auto start = in.tellg();
  in.seekg(0, std::ios::end);
  const auto bytes = static_cast<std::uint64_t>(in.tellg() - start);
  require(bytes == n * sizeof(float), ErrorCode::kSchema, path + ": payload size does not match the shape");
  in.seekg(start);
  t.data.resize(n);
  in.read(reinterpret_cast<char*>(t.data.data()), static_cast<std::streamsize>(n * sizeof(float)));
  require(static_cast<bool>(in), ErrorCode::kIo, "read failed for " + path);
  return t;
}

void write_tum(const std::string& path, const Trajectory& trajectory) {
  require(trajectory.timestamps.size() == trajectory.poses.size(), ErrorCode::kInvalidArgument,
          "timestamp and pose counts differ");
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::kIo, "cannot write " + path);
  out << "# timestamp tx ty tz qx qy qz qw\n" << std::setprecision(17);
  for (std::size_t i = 0; i < trajectory.poses.size(); ++i) {
    const Pose& p = trajectory.poses[i];
    const Eigen::Quaterniond q(p.R);
    out << trajectory.timestamps[i] << ' ' << p.t.x() << ' ' << p.t.y() << ' ' << p.t.z() << ' ' << q.x() << ' '
        << q.y() << ' ' << q.z() << ' ' << q.w() << '\n';
  }
  require(static_cast<bool>(out), ErrorCode::kIo, "write failed for " + path);
}

Trajectory read_tum(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open " + path);
  Trajectory traj;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    double v[8];
    for (double& x : v) {
      if (!(ss >> x)) fail(ErrorCode::kSchema, path + ":" + std::to_string(lineno) + ": expected 8 numbers");
    }
    std::string rest;
    if (ss >> rest) fail(ErrorCode::kSchema, path + ":" + std::to_string(lineno) + ": trailing fields");
    Eigen::Quaterniond q(v[7], v[4], v[5], v[6]);
    require(q.norm() > 1e-9, ErrorCode::kSchema, path + ":" + std::to_string(lineno) + ": zero quaternion");
    traj.timestamps.push_back(v[0]);
    traj.poses.push_back(Pose{q.normalized().toRotationMatrix(), Vec3(v[1], v[2], v[3])});
  }
  return traj;
}

}  // namespace dpm4d
