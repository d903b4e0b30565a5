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

#include "kdtree.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "error.hpp"

namespace dpm4d {

namespace {

constexpr std::uint32_t kLeafSize = 8;

bool closer(const Neighbor& a, const Neighbor& b) {
  return a.squared_distance < b.squared_distance ||
         (a.squared_distance == b.squared_distance && a.index < b.index);
}

}  // namespace

KdTree::KdTree(const std::vector<Vec3>& points) : points_(points), order_(points.size()) {
  for (std::uint32_t i = 0; i < order_.size(); ++i) order_[i] = i;
  if (!points_.empty()) build(0, static_cast<std::uint32_t>(order_.size()), 0);
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end, int depth) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{begin, end, -1, -1, 0, 0.0});
  if (end - begin <= kLeafSize) return id;
  Eigen::AlignedBox3d box;
  for (std::uint32_t k = begin; k < end; ++k) box.extend(points_[order_[k]]);
  int axis = 0;
  box.sizes().maxCoeff(&axis);
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double pa = points_[a][axis], pb = points_[b][axis];
                     return pa < pb || (pa == pb && a < b);
                   });
  const double split = points_[order_[mid]][axis];
  const std::int32_t left = build(begin, mid, depth + 1);
  const std::int32_t right = build(mid, end, depth + 1);
  nodes_[id].left = left;
  nodes_[id].right = right;
  nodes_[id].axis = axis;
  nodes_[id].split = split;
  return id;
}

template <typename Visit>
void KdTree::search(std::int32_t node, const Vec3& q, double& bound, Visit&& visit) const {
  const Node& n = nodes_[node];
  if (n.left < 0) {
    for (std::uint32_t k = n.begin; k < n.end; ++k) {
      const std::uint32_t i = order_[k];
      visit(Neighbor{i, (points_[i] - q).squaredNorm()});
    }
    return;
  }
  const double diff = q[n.axis] - n.split;
  const std::int32_t near = diff < 0.0 ? n.left : n.right;
  const std::int32_t far = diff < 0.0 ? n.right : n.left;
  search(near, q, bound, visit);
  // Points exactly at the bound may still win on index, so prune strictly.
  if (diff * diff <= bound) search(far, q, bound, visit);
}

Neighbor KdTree::nearest(const Vec3& query) const {
  require(!points_.empty(), ErrorCode::kInvalidArgument, "nearest neighbour in an empty point set");
  Neighbor best{std::numeric_limits<std::uint32_t>::max(), std::numeric_limits<double>::infinity()};
  double bound = best.squared_distance;
  search(0, query, bound, [&](const Neighbor& c) {
    if (closer(c, best)) {
      best = c;
      bound = best.squared_distance;
    }
  });
  return best;
}

std::vector<Neighbor> KdTree::k_nearest(const Vec3& query, std::size_t k) const {
  require(!points_.empty(), ErrorCode::kInvalidArgument, "nearest neighbour in an empty point set");
  k = std::min(k, points_.size());
  if (k == 0) return {};
  std::priority_queue<Neighbor, std::vector<Neighbor>, decltype(&closer)> heap(&closer);
  double bound = std::numeric_limits<double>::infinity();
  search(0, query, bound, [&](const Neighbor& c) {
    if (heap.size() < k) {
      heap.push(c);
    } else if (closer(c, heap.top())) {
      heap.pop();
      heap.push(c);
    }
    if (heap.size() == k) bound = heap.top().squared_distance;
  });
  std::vector<Neighbor> out;
  while (!heap.empty()) {
    out.push_back(heap.top());
    heap.pop();
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace dpm4d
