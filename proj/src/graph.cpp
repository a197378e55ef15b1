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

#include "hohl/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace hohl {

SparseSymMatrix::SparseSymMatrix(std::size_t n) : n_(n), row_ptr_(n + 1, 0) {}

SparseSymMatrix SparseSymMatrix::from_rows(std::vector<SparseRow> rows) {
  const std::size_t n = rows.size();
  require(n < std::numeric_limits<std::uint32_t>::max(), "sparse matrix: dimension too large");
  SparseSymMatrix m(n);
  std::size_t total = 0;
  for (auto& row : rows) {
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t out = 0;
    for (std::size_t k = 0; k < row.size(); ++k) {
      require(row[k].first < n, "sparse matrix: column index out of range");
      require(std::isfinite(row[k].second), "sparse matrix: non-finite entry");
      if (out > 0 && row[out - 1].first == row[k].first) {
        row[out - 1].second += row[k].second;
      } else {
        row[out++] = row[k];
      }
    }
    row.resize(out);
    total += out;
  }
  m.cols_.reserve(total);
  m.vals_.reserve(total);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [j, w] : rows[i]) {
      m.cols_.push_back(static_cast<std::uint32_t>(j));
      m.vals_.push_back(w);
    }
    m.row_ptr_[i + 1] = m.cols_.size();
  }
  if (!m.is_symmetric()) throw InvalidArgument("sparse matrix: input rows are not symmetric");
  return m;
}

SparseSymMatrix SparseSymMatrix::from_edges(
    std::size_t n, std::span<const std::tuple<Index, Index, double>> edges) {
  std::vector<SparseRow> rows(n);
  for (const auto& [i, j, w] : edges) {
    require(i < n && j < n, "from_edges: vertex index out of range");
    require(i != j, "from_edges: self-loops are not allowed");
    rows[i].emplace_back(j, w);
    rows[j].emplace_back(i, w);
  }
  return from_rows(std::move(rows));
}

double SparseSymMatrix::get(Index i, Index j) const {
  require(i < n_ && j < n_, "get: index out of range");
  const auto cols = row_cols(i);
  const auto it = std::lower_bound(cols.begin(), cols.end(), static_cast<std::uint32_t>(j));
  if (it == cols.end() || *it != j) return 0.0;
  return row_vals(i)[static_cast<std::size_t>(it - cols.begin())];
}

void SparseSymMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  require(x.size() == n_ && y.size() == n_, "multiply: vector length mismatch");
  constexpr std::size_t kChunk = 512;
  const std::size_t chunks = (n_ + kChunk - 1) / kChunk;
  parallel_for(0, chunks, [&](std::size_t c) {
    const std::size_t end = std::min(n_, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      double s = 0.0;
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += vals_[k] * x[cols_[k]];
      y[i] = s;
    }
  });
}

std::vector<double> SparseSymMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_);
  multiply(x, y);
  return y;
}

std::vector<double> SparseSymMatrix::to_dense() const {
  std::vector<double> a(n_ * n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) a[i * n_ + cols_[k]] = vals_[k];
  }
  return a;
}

bool SparseSymMatrix::is_symmetric() const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const std::size_t j = cols_[k];
      if (j == i) continue;
      const auto cols = row_cols(j);
      const auto it = std::lower_bound(cols.begin(), cols.end(), static_cast<std::uint32_t>(i));
      if (it == cols.end() || *it != i) return false;
      if (row_vals(j)[static_cast<std::size_t>(it - cols.begin())] != vals_[k]) return false;
    }
  }
  return true;
}

SparseSymMatrix SparseSymMatrix::scaled(double c) const {
  require(std::isfinite(c), "scaled: factor must be finite");
  SparseSymMatrix out = *this;
  for (double& v : out.vals_) v *= c;
  return out;
}

std::size_t SparseSymMatrix::edge_count() const {
  std::size_t diag = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (cols_[k] == i) ++diag;
    }
  }
  return (nnz() - diag) / 2;
}

void SparseSymMatrix::write(std::ostream& out, bool upper_only) const {
  std::size_t m = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (!upper_only || cols_[k] >= i) ++m;
    }
  }
  out << n_ << ' ' << m << ' ' << (upper_only ? 1 : 0) << '\n';
  char buf[64];
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (upper_only && cols_[k] < i) continue;
      const auto res = std::to_chars(buf, buf + sizeof buf, vals_[k]);
      out << i << ' ' << cols_[k] << ' ' << std::string_view(buf, res.ptr) << '\n';
    }
  }
}

namespace {

template <typename T>
T parse_field(std::istringstream& in, std::size_t line, const char* what) {
  std::string token;
  if (!(in >> token)) throw ParseError(std::string("missing ") + what, line);
  T value{};
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw ParseError(std::string("bad ") + what + " '" + token + "'", line);
  }
  return value;
}

}  // namespace

SparseSymMatrix SparseSymMatrix::read(std::istream& in) {
  std::string text;
  std::size_t line_no = 1;
  if (!std::getline(in, text)) throw ParseError("missing header", line_no);
  std::istringstream header(text);
  const auto n = parse_field<std::size_t>(header, line_no, "n");
  const auto m = parse_field<std::size_t>(header, line_no, "m");
  const auto sym = parse_field<int>(header, line_no, "sym");
  if (sym != 0 && sym != 1) throw ParseError("sym must be 0 or 1", line_no);

  std::vector<SparseRow> rows(n);
  for (std::size_t e = 0; e < m; ++e) {
    ++line_no;
    if (!std::getline(in, text)) throw ParseError("unexpected end of file", line_no);
    std::istringstream fields(text);
    const auto i = parse_field<std::size_t>(fields, line_no, "row");
    const auto j = parse_field<std::size_t>(fields, line_no, "column");
    const auto w = parse_field<double>(fields, line_no, "weight");
    if (i >= n || j >= n) throw ParseError("index out of range", line_no);
    rows[i].emplace_back(j, w);
    if (sym == 1 && i != j) rows[j].emplace_back(i, w);
  }
  return from_rows(std::move(rows));
}

double LaplacianScale::factor() const {
  require(sigma_eta > 0.0 && n >= 1 && eps > 0.0 && d >= 1,
          "LaplacianScale: sigma_eta, n, eps, d must be positive");
  return 2.0 / (sigma_eta * static_cast<double>(n) *
                std::pow(eps, static_cast<double>(d) + 2.0));
}

SparseSymMatrix build_eps_graph(const PointCloud& cloud, double eps, const Kernel& kernel) {
  require(eps > 0.0 && std::isfinite(eps), "build_eps_graph: eps must be positive");
  const std::size_t n = cloud.size();
  std::vector<SparseRow> rows(n);
  if (kernel.compact()) {
    const NeighborIndex index(cloud);
    const double radius = eps * kernel.support_radius();
    parallel_for(0, n, [&](std::size_t i) {
      const Neighbors nb = index.range(i, radius);
      auto& row = rows[i];
      row.reserve(nb.indices.size());
      for (std::size_t m = 0; m < nb.indices.size(); ++m) {
        const double w = kernel(nb.distances[m] / eps);
        if (w > 0.0) row.emplace_back(nb.indices[m], w);
      }
    });
  } else {
    parallel_for(0, n, [&](std::size_t i) {
      auto& row = rows[i];
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double w = kernel(cloud.distance(i, j) / eps);
        if (w > 0.0) row.emplace_back(j, w);
      }
    });
  }
  return SparseSymMatrix::from_rows(std::move(rows));
}

SparseSymMatrix build_knn_graph(const PointCloud& cloud, std::size_t k) {
  const std::size_t n = cloud.size();
  require(k >= 1 && k + 1 <= n, "build_knn_graph: k must satisfy 1 <= k <= n-1");
  const NeighborIndex index(cloud);
  std::vector<SparseRow> directed(n);
  parallel_for(0, n, [&](std::size_t i) {
    const Neighbors nb = index.knn(i, k);
    const double dk = nb.distances.back();
    auto& row = directed[i];
    row.reserve(k);
    for (std::size_t m = 0; m < k; ++m) {
      const double dist = nb.distances[m];
      double w = 1.0;
      if (dk > 0.0) w = std::exp(-4.0 * dist * dist / (dk * dk));
      row.emplace_back(nb.indices[m], w);
    }
  });

  std::vector<SparseRow> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [j, w] : directed[i]) {
      rows[i].emplace_back(j, w);
      rows[j].emplace_back(i, w);
    }
  }
  parallel_for(0, n, [&](std::size_t i) {
    auto& row = rows[i];
    std::sort(row.begin(), row.end());
    std::size_t out = 0;
    for (std::size_t m = 0; m < row.size(); ++m) {
      if (out > 0 && row[out - 1].first == row[m].first) {
        row[out - 1].second = std::max(row[out - 1].second, row[m].second);
      } else {
        row[out++] = row[m];
      }
    }
    row.resize(out);
  });
  return SparseSymMatrix::from_rows(std::move(rows));
}

Laplacian laplacian(const SparseSymMatrix& w, LaplacianMode mode,
                    std::optional<LaplacianScale> scale) {
  double c = 1.0;
  if (mode == LaplacianMode::normalized) {
    if (!scale) throw InvalidArgument("laplacian: normalized mode needs scale parameters");
    c = scale->factor();
  }
  const std::size_t n = w.size();
  std::vector<SparseRow> rows(n);
  parallel_for(0, n, [&](std::size_t i) {
    const auto cols = w.row_cols(i);
    const auto vals = w.row_vals(i);
    auto& row = rows[i];
    row.reserve(cols.size() + 1);
    double degree = 0.0;
    bool placed = false;
    for (std::size_t m = 0; m < cols.size(); ++m) {
      require(cols[m] != i || vals[m] == 0.0, "laplacian: adjacency has a nonzero diagonal");
      if (cols[m] == i) continue;
      if (!placed && cols[m] > i) {
        row.emplace_back(i, 0.0);
        placed = true;
      }
      degree += vals[m];
      row.emplace_back(cols[m], -c * vals[m]);
    }
    if (!placed) row.emplace_back(i, 0.0);
    for (auto& [j, v] : row) {
      if (j == i) v = c * degree;
    }
  });
  return Laplacian(SparseSymMatrix::from_rows(std::move(rows)), mode, scale, c);
}

SparseSymMatrix skeleton_graph(std::span<const std::vector<Index>> hyperedges, std::size_t k,
                               std::size_t n) {
  require(k >= 1, "skeleton_graph: k must be >= 1");
  std::vector<SparseRow> rows(n);
  for (const auto& edge : hyperedges) {
    if (edge.size() != k + 1) continue;
    for (std::size_t a = 0; a < edge.size(); ++a) {
      require(edge[a] < n, "skeleton_graph: vertex index out of range");
      for (std::size_t b = 0; b < a; ++b) {
        require(edge[a] != edge[b], "skeleton_graph: hyperedge has repeated vertices");
      }
    }
    for (std::size_t a = 0; a < edge.size(); ++a) {
      for (std::size_t b = 0; b < edge.size(); ++b) {
        if (a != b) rows[edge[a]].emplace_back(edge[b], 1.0);
      }
    }
  }
  for (auto& row : rows) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return SparseSymMatrix::from_rows(std::move(rows));
}

std::vector<Index> connected_components(const SparseSymMatrix& w) {
  const std::size_t n = w.size();
  std::vector<Index> parent(n);
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const auto cols = w.row_cols(i);
    const auto vals = w.row_vals(i);
    for (std::size_t m = 0; m < cols.size(); ++m) {
      if (vals[m] == 0.0) continue;
      const Index a = find(i), b = find(cols[m]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<Index> id(n), renumber(n, n);
  Index next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Index root = find(i);
    if (renumber[root] == n) renumber[root] = next++;
    id[i] = renumber[root];
  }
  return id;
}

std::size_t component_count(std::span<const Index> components) {
  if (components.empty()) return 0;
  return *std::max_element(components.begin(), components.end()) + 1;
}

}  // namespace hohl
