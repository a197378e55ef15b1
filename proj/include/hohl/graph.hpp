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
#include <iosfwd>
#include <optional>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "hohl/common.hpp"
#include "hohl/geometry.hpp"
#include "hohl/kernels.hpp"

namespace hohl {

/// One row of a sparse matrix under construction: (column, value) pairs.
using SparseRow = std::vector<std::pair<Index, double>>;

/// Compressed sparse row matrix that is symmetric by contract. Columns within
/// a row are strictly increasing.
class SparseSymMatrix {
 public:
  SparseSymMatrix() = default;
  explicit SparseSymMatrix(std::size_t n);  // empty n x n

  /// Takes full rows (both (i,j) and (j,i) present). Rows are sorted here;
  /// duplicate columns are summed. Throws unless the result is symmetric.
  static SparseSymMatrix from_rows(std::vector<SparseRow> rows);

  /// Builds from (i, j, w) with i != j listed once per unordered pair.
  static SparseSymMatrix from_edges(std::size_t n,
                                    std::span<const std::tuple<Index, Index, double>> edges);

  std::size_t size() const { return n_; }
  std::size_t nnz() const { return cols_.size(); }

  std::span<const std::uint32_t> row_cols(Index i) const {
    return {cols_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }
  std::span<const double> row_vals(Index i) const {
    return {vals_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }
  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::uint32_t>& cols() const { return cols_; }
  const std::vector<double>& vals() const { return vals_; }

  /// Entry (i, j), 0 when absent.
  double get(Index i, Index j) const;

  /// y = A x, parallel over rows.
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;

  /// Row-major dense copy.
  std::vector<double> to_dense() const;

  /// Exact structural and value symmetry.
  bool is_symmetric() const;

  SparseSymMatrix scaled(double c) const;
  /// Number of unordered off-diagonal pairs.
  std::size_t edge_count() const;

  /// Text dump: header `n m sym` then `i j w` triplets. With upper_only the
  /// i <= j half is written and sym = 1.
  void write(std::ostream& out, bool upper_only = true) const;
  static SparseSymMatrix read(std::istream& in);

  bool operator==(const SparseSymMatrix& other) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> cols_;
  std::vector<double> vals_;
};

enum class LaplacianMode { raw, normalized };

/// Parameters of the normalized scaling 2 / (sigma_eta n eps^(d+2)).
struct LaplacianScale {
  double sigma_eta = 0.0;
  std::size_t n = 0;
  double eps = 0.0;
  std::size_t d = 0;

  double factor() const;
};

/// c (D - W), with c = 1 in raw mode.
class Laplacian {
 public:
  Laplacian() = default;
  Laplacian(SparseSymMatrix matrix, LaplacianMode mode, std::optional<LaplacianScale> scale,
            double factor)
      : matrix_(std::move(matrix)), mode_(mode), scale_(scale), factor_(factor) {}

  const SparseSymMatrix& matrix() const { return matrix_; }
  LaplacianMode mode() const { return mode_; }
  const std::optional<LaplacianScale>& scale() const { return scale_; }
  double factor() const { return factor_; }
  std::size_t size() const { return matrix_.size(); }

  void apply(std::span<const double> x, std::span<double> y) const { matrix_.multiply(x, y); }
  std::vector<double> apply(std::span<const double> x) const { return matrix_.multiply(x); }

 private:
  SparseSymMatrix matrix_;
  LaplacianMode mode_ = LaplacianMode::raw;
  std::optional<LaplacianScale> scale_;
  double factor_ = 1.0;
};

/// w_ij = eta(|x_i - x_j| / eps) for i != j. Compact kernels use range
/// queries; the untruncated gaussian visits all pairs and keeps nonzero
/// weights only.
SparseSymMatrix build_eps_graph(const PointCloud& cloud, double eps, const Kernel& kernel);

/// Self-tuning kNN weights exp(-4 |x_i - x_j|^2 / d_k(x_i)^2) for j among
/// the k nearest of i, symmetrized by the maximum. d_k(x_i) = 0 gives 1.
SparseSymMatrix build_knn_graph(const PointCloud& cloud, std::size_t k);

/// Normalized mode requires `scale`.
Laplacian laplacian(const SparseSymMatrix& w, LaplacianMode mode = LaplacianMode::raw,
                    std::optional<LaplacianScale> scale = std::nullopt);

/// Unweighted adjacency of all pairs inside some hyperedge of size k+1.
/// Hyperedges of other sizes are ignored.
SparseSymMatrix skeleton_graph(std::span<const std::vector<Index>> hyperedges, std::size_t k,
                               std::size_t n);

/// Component id per vertex (ids numbered by first vertex), via union-find.
std::vector<Index> connected_components(const SparseSymMatrix& w);
std::size_t component_count(std::span<const Index> components);

}  // namespace hohl
