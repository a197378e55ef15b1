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

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "hohl/common.hpp"

namespace hohl {

/// Metric of the ambient space. The torus is the unit cube with periodic
/// identification of opposite faces.
enum class Domain { cube, torus };

/// n points in R^d, stored row-major, with optional class labels.
class PointCloud {
 public:
  PointCloud() = default;
  PointCloud(std::vector<double> coords, std::size_t dim,
             std::vector<int> labels = {}, Domain domain = Domain::cube);

  std::size_t size() const { return n_; }
  std::size_t dim() const { return d_; }
  Domain domain() const { return domain_; }

  std::span<const double> point(Index i) const {
    return {coords_.data() + i * d_, d_};
  }
  double coord(Index i, std::size_t axis) const { return coords_[i * d_ + axis]; }
  const std::vector<double>& coords() const { return coords_; }

  bool has_labels() const { return !labels_.empty(); }
  const std::vector<int>& labels() const { return labels_; }
  /// Number of classes (max label + 1); 0 without labels.
  int num_classes() const { return num_classes_; }

  /// Squared distance under this cloud's metric.
  double distance2(Index i, Index j) const;
  double distance(Index i, Index j) const;

  /// Cloud with points reordered so that new point k is old point perm[k].
  PointCloud permuted(std::span<const Index> perm) const;

 private:
  std::vector<double> coords_;
  std::vector<int> labels_;
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  int num_classes_ = 0;
  Domain domain_ = Domain::cube;
};

double distance2(std::span<const double> a, std::span<const double> b,
                 Domain domain = Domain::cube);

/// n i.i.d. uniform points on [0,1]^d (or the unit torus).
PointCloud sample_uniform(std::size_t n, std::size_t d, Domain domain,
                          std::uint64_t seed);

struct Neighbors {
  std::vector<Index> indices;
  std::vector<double> distances;
};

/// Range and k-nearest-neighbour queries over a PointCloud. Uses a kd-tree
/// for cube domains with d <= 16 and a brute-force scan otherwise. Results
/// are always sorted by (distance, index).
class NeighborIndex {
 public:
  explicit NeighborIndex(const PointCloud& cloud);
  ~NeighborIndex();
  NeighborIndex(NeighborIndex&&) noexcept;
  NeighborIndex& operator=(NeighborIndex&&) noexcept;

  const PointCloud& cloud() const { return *cloud_; }
  bool uses_tree() const { return tree_ != nullptr; }

  /// All j with |x_i - x_j| <= r, excluding i unless include_self.
  Neighbors range(Index i, double r, bool include_self = false) const;
  std::vector<Index> range_neighbors(Index i, double r) const {
    return range(i, r).indices;
  }

  /// The k nearest j != i. Ties are broken by lower index.
  Neighbors knn(Index i, std::size_t k) const;

  /// Distance from x_i to its k-th nearest neighbour.
  double kth_distance(Index i, std::size_t k) const;

 private:
  struct KdTree;
  const PointCloud* cloud_;
  std::unique_ptr<KdTree> tree_;
};

/// O(n) reference scans used as test oracles.
Neighbors brute_force_range(const PointCloud& cloud, Index i, double r,
                            bool include_self = false);
Neighbors brute_force_knn(const PointCloud& cloud, Index i, std::size_t k);

}  // namespace hohl
