// Copyright 2026 The hohl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hohl/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

namespace hohl {

PointCloud::PointCloud(std::vector<double> coords, std::size_t dim,
                       std::vector<int> labels, Domain domain)
    : coords_(std::move(coords)), labels_(std::move(labels)), d_(dim),
      domain_(domain) {
  require(d_ >= 1, "PointCloud: dimension must be >= 1");
  require(coords_.size() % d_ == 0,
          "PointCloud: coordinate count is not a multiple of the dimension");
  n_ = coords_.size() / d_;
  require(n_ >= 1, "PointCloud: at least one point is required");
  for (double c : coords_) require(std::isfinite(c), "PointCloud: non-finite coordinate");
  if (!labels_.empty()) {
    require(labels_.size() == n_, "PointCloud: label count does not match point count");
    int max_label = -1;
    for (int y : labels_) {
      require(y >= 0, "PointCloud: labels must be non-negative");
      max_label = std::max(max_label, y);
    }
    num_classes_ = max_label + 1;
    require(num_classes_ >= 2, "PointCloud: labelled data needs at least two classes");
  }
}

double distance2(std::span<const double> a, std::span<const double> b, Domain domain) {
  double s = 0.0;
  if (domain == Domain::torus) {
    for (std::size_t k = 0; k < a.size(); ++k) {
      double t = std::fabs(a[k] - b[k]);
      t -= std::floor(t);
      t = std::min(t, 1.0 - t);
      s += t * t;
    }
  } else {
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double t = a[k] - b[k];
      s += t * t;
    }
  }
  return s;
}

double PointCloud::distance2(Index i, Index j) const {
  return hohl::distance2(point(i), point(j), domain_);
}

double PointCloud::distance(Index i, Index j) const { return std::sqrt(distance2(i, j)); }

PointCloud PointCloud::permuted(std::span<const Index> perm) const {
  require(perm.size() == n_, "permuted: permutation length mismatch");
  std::vector<double> c(coords_.size());
  std::vector<int> y;
  if (has_labels()) y.resize(n_);
  for (Index k = 0; k < n_; ++k) {
    std::copy_n(coords_.begin() + perm[k] * d_, d_, c.begin() + k * d_);
    if (has_labels()) y[k] = labels_[perm[k]];
  }
  return PointCloud(std::move(c), d_, std::move(y), domain_);
}

PointCloud sample_uniform(std::size_t n, std::size_t d, Domain domain, std::uint64_t seed) {
  require(n >= 1 && d >= 1, "sample_uniform: n and d must be >= 1");
  Rng rng(seed);
  std::vector<double> c(n * d);
  for (double& v : c) v = rng.uniform();
  return PointCloud(std::move(c), d, {}, domain);
}

namespace {

using Candidate = std::pair<double, Index>;  // (squared distance, index)

void sort_and_fill(std::vector<Candidate>& found, Neighbors& out) {
  std::sort(found.begin(), found.end());
  out.indices.reserve(found.size());
  out.distances.reserve(found.size());
  for (const auto& [d2, j] : found) {
    out.indices.push_back(j);
    out.distances.push_back(std::sqrt(d2));
  }
}

}  // namespace

struct NeighborIndex::KdTree {
  struct Node {
    std::size_t begin, end;
    int axis = -1;  // -1 marks a leaf
    double split = 0.0;
    std::size_t left = 0, right = 0;
    std::vector<double> lo, hi;
  };

  static constexpr std::size_t kLeafSize = 16;

  const PointCloud& cloud;
  std::vector<Index> order;
  std::vector<Node> nodes;

  explicit KdTree(const PointCloud& c) : cloud(c), order(c.size()) {
    std::iota(order.begin(), order.end(), Index{0});
    nodes.reserve(2 * c.size() / kLeafSize + 2);
    build(0, c.size());
  }

  std::size_t build(std::size_t begin, std::size_t end) {
    const std::size_t d = cloud.dim();
    Node node;
    node.begin = begin;
    node.end = end;
    node.lo.assign(d, std::numeric_limits<double>::infinity());
    node.hi.assign(d, -std::numeric_limits<double>::infinity());
    for (std::size_t k = begin; k < end; ++k) {
      for (std::size_t a = 0; a < d; ++a) {
        const double v = cloud.coord(order[k], a);
        node.lo[a] = std::min(node.lo[a], v);
        node.hi[a] = std::max(node.hi[a], v);
      }
    }
    const std::size_t id = nodes.size();
    nodes.push_back(node);
    if (end - begin <= kLeafSize) return id;

    std::size_t axis = 0;
    double spread = -1.0;
    for (std::size_t a = 0; a < d; ++a) {
      if (node.hi[a] - node.lo[a] > spread) {
        spread = node.hi[a] - node.lo[a];
        axis = a;
      }
    }
    if (spread <= 0.0) return id;  // all points coincide

    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                     [&](Index a, Index b) { return cloud.coord(a, axis) < cloud.coord(b, axis); });
    const double split = cloud.coord(order[mid], axis);
    const std::size_t left = build(begin, mid);
    const std::size_t right = build(mid, end);
    nodes[id].axis = static_cast<int>(axis);
    nodes[id].split = split;
    nodes[id].left = left;
    nodes[id].right = right;
    return id;
  }

  double box_distance2(const Node& node, std::span<const double> q) const {
    double s = 0.0;
    for (std::size_t a = 0; a < q.size(); ++a) {
      double t = 0.0;
      if (q[a] < node.lo[a]) t = node.lo[a] - q[a];
      else if (q[a] > node.hi[a]) t = q[a] - node.hi[a];
      s += t * t;
    }
    return s;
  }

  void range(std::size_t id, Index i, double r2, bool include_self,
             std::vector<Candidate>& out) const {
    const Node& node = nodes[id];
    const auto q = cloud.point(i);
    if (box_distance2(node, q) > r2) return;
    if (node.axis < 0) {
      for (std::size_t k = node.begin; k < node.end; ++k) {
        const Index j = order[k];
        if (j == i && !include_self) continue;
        const double d2 = cloud.distance2(i, j);
        if (d2 <= r2) out.emplace_back(d2, j);
      }
      return;
    }
    range(node.left, i, r2, include_self, out);
    range(node.right, i, r2, include_self, out);
  }

  void knn(std::size_t id, Index i, std::size_t k,
           std::priority_queue<Candidate>& heap) const {
    const Node& node = nodes[id];
    const auto q = cloud.point(i);
    if (heap.size() == k && box_distance2(node, q) > heap.top().first) return;
    if (node.axis < 0) {
      for (std::size_t m = node.begin; m < node.end; ++m) {
        const Index j = order[m];
        if (j == i) continue;
        const Candidate c{cloud.distance2(i, j), j};
        if (heap.size() < k) {
          heap.push(c);
        } else if (c < heap.top()) {
          heap.pop();
          heap.push(c);
        }
      }
      return;
    }
    const bool go_left = q[static_cast<std::size_t>(node.axis)] < node.split;
    knn(go_left ? node.left : node.right, i, k, heap);
    knn(go_left ? node.right : node.left, i, k, heap);
  }
};

NeighborIndex::NeighborIndex(const PointCloud& cloud) : cloud_(&cloud) {
  if (cloud.domain() == Domain::cube && cloud.dim() <= 16) {
    tree_ = std::make_unique<KdTree>(cloud);
  }
}

NeighborIndex::~NeighborIndex() = default;
NeighborIndex::NeighborIndex(NeighborIndex&&) noexcept = default;
NeighborIndex& NeighborIndex::operator=(NeighborIndex&&) noexcept = default;

Neighbors NeighborIndex::range(Index i, double r, bool include_self) const {
  require(i < cloud_->size(), "range: vertex index out of range");
  require(r >= 0.0, "range: radius must be non-negative");
  if (!tree_) return brute_force_range(*cloud_, i, r, include_self);
  std::vector<Candidate> found;
  tree_->range(0, i, r * r, include_self, found);
  Neighbors out;
  sort_and_fill(found, out);
  return out;
}

Neighbors NeighborIndex::knn(Index i, std::size_t k) const {
  require(i < cloud_->size(), "knn: vertex index out of range");
  require(k >= 1 && k + 1 <= cloud_->size(), "knn: k must satisfy 1 <= k <= n-1");
  if (!tree_) return brute_force_knn(*cloud_, i, k);
  std::priority_queue<Candidate> heap;
  tree_->knn(0, i, k, heap);
  std::vector<Candidate> found;
  found.reserve(k);
  while (!heap.empty()) {
    found.push_back(heap.top());
    heap.pop();
  }
  Neighbors out;
  sort_and_fill(found, out);
  return out;
}

double NeighborIndex::kth_distance(Index i, std::size_t k) const {
  return knn(i, k).distances.back();
}

Neighbors brute_force_range(const PointCloud& cloud, Index i, double r, bool include_self) {
  require(i < cloud.size(), "range: vertex index out of range");
  const double r2 = r * r;
  std::vector<Candidate> found;
  for (Index j = 0; j < cloud.size(); ++j) {
    if (j == i && !include_self) continue;
    const double d2 = cloud.distance2(i, j);
    if (d2 <= r2) found.emplace_back(d2, j);
  }
  Neighbors out;
  sort_and_fill(found, out);
  return out;
}

Neighbors brute_force_knn(const PointCloud& cloud, Index i, std::size_t k) {
  require(i < cloud.size(), "knn: vertex index out of range");
  require(k >= 1 && k + 1 <= cloud.size(), "knn: k must satisfy 1 <= k <= n-1");
  std::vector<Candidate> all;
  all.reserve(cloud.size() - 1);
  for (Index j = 0; j < cloud.size(); ++j) {
    if (j != i) all.emplace_back(cloud.distance2(i, j), j);
  }
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
  all.resize(k);
  Neighbors out;
  sort_and_fill(all, out);
  return out;
}

}  // namespace hohl
