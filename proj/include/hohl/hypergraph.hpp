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

#include <span>
#include <vector>

#include "hohl/common.hpp"
#include "hohl/geometry.hpp"
#include "hohl/graph.hpp"
#include "hohl/kernels.hpp"

namespace hohl {

/// Random geometric hypergraph at order k: hyperedges have k+1 vertices.
struct HypergraphParams {
  std::size_t k = 1;
  double eps = 1.0;
  Kernel kernel = Kernel::indicator();

  /// Number of pairwise factors in a hyperedge weight.
  std::size_t t_k() const { return k * (k + 1) / 2; }
  void validate() const;
};

/// prod_{j=1..k} prod_{r<j} eta(|x_{i_j} - x_{i_r}| / eps). Repeated indices
/// are allowed.
double hyperedge_weight(const PointCloud& cloud, std::span<const Index> tuple,
                        const HypergraphParams& params);

/// Induced pair weights
///   M(i0, i1) = sum over i2..ik of hyperedge_weight(i0, i1, i2, ..., ik).
/// Both the energy and the (k,p)-Laplacian depend on the tuple only through
/// (i0, i1), so M carries everything. Tuples are extended through sorted
/// intersections of closed eps-neighbourhoods, which visits exactly the
/// tuples with nonzero weight. The diagonal M(i, i) is kept.
/// Requires a compactly supported kernel.
class HypergraphOperator {
 public:
  HypergraphOperator(const PointCloud& cloud, const HypergraphParams& params);
  /// Only the listed rows of M are computed; energy() is unavailable.
  HypergraphOperator(const PointCloud& cloud, const HypergraphParams& params,
                     std::span<const Index> rows);

  std::size_t size() const { return n_; }
  const HypergraphParams& params() const { return params_; }
  /// Rows of M (full operator) or the requested rows in order.
  const std::vector<SparseRow>& pair_weights() const { return rows_; }
  const std::vector<Index>& row_index() const { return row_index_; }

  /// 1 / (n^(k+1) eps^(p + k d)).
  double energy_scale(double p) const;
  /// 1 / (n^k eps^(p + k d)).
  double operator_scale(double p) const;

  double energy(std::span<const double> u, double p) const;
  /// Delta^(k,p) u at every computed row.
  std::vector<double> apply(std::span<const double> u, double p) const;

  /// Symmetric matrix of M (full operator only).
  SparseSymMatrix matrix() const;

 private:
  void build(const PointCloud& cloud, std::span<const Index> rows);

  std::size_t n_ = 0;
  std::size_t d_ = 0;
  HypergraphParams params_;
  bool full_ = true;
  std::vector<Index> row_index_;
  std::vector<SparseRow> rows_;
};

/// Classical hypergraph energy
///   (1/(n^(k+1) eps^(p+kd))) sum_{i0..ik} w(i0..ik) |u_{i1} - u_{i0}|^p.
double hypergraph_energy(std::span<const double> u, const PointCloud& cloud,
                         const HypergraphParams& params, double p);

/// (1/(n^k eps^(p+kd))) sum_{i1..ik} w(i0..ik) |u_{i1}-u_{i0}|^(p-2) (u_{i1}-u_{i0}).
/// The energy gradient is -(2p/n) times this vector.
std::vector<double> kp_laplacian_apply(std::span<const double> u, const PointCloud& cloud,
                                       const HypergraphParams& params, double p);

/// Direct O(n^(k+1)) evaluations over all tuples; n^(k+1) <= 1e7.
double hypergraph_energy_bruteforce(std::span<const double> u, const PointCloud& cloud,
                                    const HypergraphParams& params, double p);
std::vector<double> kp_laplacian_apply_bruteforce(std::span<const double> u,
                                                  const PointCloud& cloud,
                                                  const HypergraphParams& params, double p);

}  // namespace hohl
