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
#include <vector>

#include "geometry.hpp"

namespace dpm4d {

struct Neighbor {
  std::uint32_t index = 0;
  double squared_distance = 0.0;
};

// Static 3D k-d tree over a point set. Equidistant candidates resolve to the
// lowest point index.
class KdTree {
 public:
  explicit KdTree(const std::vector<Vec3>& points);

  // Throws kInvalidArgument on an empty tree.
  Neighbor nearest(const Vec3& query) const;
  // Up to k neighbours sorted by (distance, index).
  std::vector<Neighbor> k_nearest(const Vec3& query, std::size_t k) const;

  std::size_t size() const { return points_.size(); }

 private:
  struct Node {
    std::uint32_t begin = 0, end = 0;  // leaf range in order_
    std::int32_t left = -1, right = -1;
    int axis = 0;
    double split = 0.0;
  };
  std::int32_t build(std::uint32_t begin, std::uint32_t end, int depth);
  template <typename Visit>
  void search(std::int32_t node, const Vec3& q, double& bound, Visit&& visit) const;

  std::vector<Vec3> points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace dpm4d
