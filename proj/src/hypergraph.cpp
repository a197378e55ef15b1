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

#include "hohl/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hohl {

void HypergraphParams::validate() const {
  require(k >= 1, "hypergraph: k must be >= 1");
  require(eps > 0.0 && std::isfinite(eps), "hypergraph: eps must be positive");
}

double hyperedge_weight(const PointCloud& cloud, std::span<const Index> tuple,
                        const HypergraphParams& params) {
  params.validate();
  require(tuple.size() == params.k + 1, "hyperedge_weight: tuple must have k+1 vertices");
  for (Index v : tuple) require(v < cloud.size(), "hyperedge_weight: vertex out of range");
  double w = 1.0;
  for (std::size_t j = 1; j < tuple.size(); ++j) {
    for (std::size_t r = 0; r < j; ++r) {
      w *= params.kernel(cloud.distance(tuple[j], tuple[r]) / params.eps);
      if (w == 0.0) return 0.0;
    }
  }
  return w;
}

namespace {

/// phi(t) = |t|^(p-2) t.
inline double signed_power(double t, double p) {
  if (t == 0.0) return 0.0;
  if (p == 2.0) return t;
  return std::copysign(std::pow(std::fabs(t), p - 1.0), t);
}

inline double abs_power(double t, double p) {
  if (p == 2.0) return t * t;
  return std::pow(std::fabs(t), p);
}

struct Candidates {
  std::vector<Index> idx;
  std::vector<double> w;
};

/// Closed neighbourhoods (self included) sorted by index, with eta weights.
struct Neighbourhoods {
  std::vector<std::vector<Index>> idx;
  std::vector<std::vector<double>> w;
};

Neighbourhoods closed_neighbourhoods(const PointCloud& cloud, const HypergraphParams& params) {
  const std::size_t n = cloud.size();
  Neighbourhoods nb;
  nb.idx.resize(n);
  nb.w.resize(n);
  const NeighborIndex index(cloud);
  const double radius = params.eps * params.kernel.support_radius();
  parallel_for(0, n, [&](std::size_t i) {
    const Neighbors found = index.range(i, radius, true);
    std::vector<std::pair<Index, double>> pairs;
    pairs.reserve(found.indices.size());
    for (std::size_t m = 0; m < found.indices.size(); ++m) {
      const double w = params.kernel(found.distances[m] / params.eps);
      if (w > 0.0) pairs.emplace_back(found.indices[m], w);
    }
    std::sort(pairs.begin(), pairs.end());
    for (const auto& [j, w] : pairs) {
      nb.idx[i].push_back(j);
      nb.w[i].push_back(w);
    }
  });
  return nb;
}

/// out = {c in a : c in N[v]}, weights a.w * eta(v, c).
void intersect(const Candidates& a, const std::vector<Index>& nidx,
               const std::vector<double>& nw, Candidates& out) {
  out.idx.clear();
  out.w.clear();
  std::size_t x = 0, y = 0;
  while (x < a.idx.size() && y < nidx.size()) {
    if (a.idx[x] < nidx[y]) {
      ++x;
    } else if (nidx[y] < a.idx[x]) {
      ++y;
    } else {
      out.idx.push_back(a.idx[x]);
      out.w.push_back(a.w[x] * nw[y]);
      ++x;
      ++y;
    }
  }
}

/// sum over ordered (c_1..c_depth) of prod of weights, each c_j drawn from
/// the running intersection.
double tuple_sum(const Candidates& cand, std::size_t depth, const Neighbourhoods& nb,
                 std::vector<Candidates>& scratch) {
  if (depth == 0) return 1.0;
  if (depth == 1) return std::accumulate(cand.w.begin(), cand.w.end(), 0.0);
  double total = 0.0;
  Candidates& next = scratch[depth];
  for (std::size_t m = 0; m < cand.idx.size(); ++m) {
    const Index c = cand.idx[m];
    intersect(cand, nb.idx[c], nb.w[c], next);
    total += cand.w[m] * tuple_sum(next, depth - 1, nb, scratch);
  }
  return total;
}

}  // namespace

HypergraphOperator::HypergraphOperator(const PointCloud& cloud, const HypergraphParams& params)
    : n_(cloud.size()), d_(cloud.dim()), params_(params), full_(true) {
  std::vector<Index> all(n_);
  std::iota(all.begin(), all.end(), Index{0});
  build(cloud, all);
}

HypergraphOperator::HypergraphOperator(const PointCloud& cloud, const HypergraphParams& params,
                                       std::span<const Index> rows)
    : n_(cloud.size()), d_(cloud.dim()), params_(params), full_(false) {
  for (Index r : rows) require(r < n_, "HypergraphOperator: row index out of range");
  build(cloud, rows);
}

void HypergraphOperator::build(const PointCloud& cloud, std::span<const Index> rows) {
  params_.validate();
  if (!params_.kernel.compact()) {
    throw InvalidArgument(
        "hypergraph: the untruncated gaussian has no finite support; use truncated_gaussian");
  }
  row_index_.assign(rows.begin(), rows.end());
  rows_.assign(rows.size(), {});
  const Neighbourhoods nb = closed_neighbourhoods(cloud, params_);
  const std::size_t k = params_.k;
  parallel_for(0, rows.size(), [&](std::size_t r) {
    const Index a = rows[r];
    SparseRow& out = rows_[r];
    out.reserve(nb.idx[a].size());
    std::vector<Candidates> scratch(k + 1);
    Candidates first, common;
    first.idx = nb.idx[a];
    first.w = nb.w[a];
    for (std::size_t m = 0; m < nb.idx[a].size(); ++m) {
      const Index b = nb.idx[a][m];
      const double w_ab = nb.w[a][m];
      if (k == 1) {
        out.emplace_back(b, w_ab);
        continue;
      }
      intersect(first, nb.idx[b], nb.w[b], common);
      const double s = tuple_sum(common, k - 1, nb, scratch);
      if (s > 0.0) out.emplace_back(b, w_ab * s);
    }
  });
}

double HypergraphOperator::energy_scale(double p) const {
  const double kd = static_cast<double>(params_.k * d_);
  return 1.0 / (std::pow(static_cast<double>(n_), static_cast<double>(params_.k + 1)) *
                std::pow(params_.eps, p + kd));
}

double HypergraphOperator::operator_scale(double p) const {
  const double kd = static_cast<double>(params_.k * d_);
  return 1.0 / (std::pow(static_cast<double>(n_), static_cast<double>(params_.k)) *
                std::pow(params_.eps, p + kd));
}

double HypergraphOperator::energy(std::span<const double> u, double p) const {
  require(full_, "HypergraphOperator::energy: operator was built for a row subset");
  require(u.size() == n_, "hypergraph energy: u has the wrong length");
  require(p > 1.0, "hypergraph energy: p must be > 1");
  std::vector<double> partial(n_, 0.0);
  parallel_for(0, n_, [&](std::size_t i) {
    double s = 0.0;
    for (const auto& [j, m] : rows_[i]) s += m * abs_power(u[j] - u[i], p);
    partial[i] = s;
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return energy_scale(p) * total;
}

std::vector<double> HypergraphOperator::apply(std::span<const double> u, double p) const {
  require(u.size() == n_, "kp_laplacian_apply: u has the wrong length");
  require(p > 1.0, "kp_laplacian_apply: p must be > 1");
  std::vector<double> out(rows_.size(), 0.0);
  const double scale = operator_scale(p);
  parallel_for(0, rows_.size(), [&](std::size_t r) {
    const Index i = row_index_[r];
    double s = 0.0;
    for (const auto& [j, m] : rows_[r]) s += m * signed_power(u[j] - u[i], p);
    out[r] = scale * s;
  });
  return out;
}

SparseSymMatrix HypergraphOperator::matrix() const {
  require(full_, "HypergraphOperator::matrix: operator was built for a row subset");
  std::vector<SparseRow> rows = rows_;
  return SparseSymMatrix::from_rows(std::move(rows));
}

double hypergraph_energy(std::span<const double> u, const PointCloud& cloud,
                         const HypergraphParams& params, double p) {
  return HypergraphOperator(cloud, params).energy(u, p);
}

std::vector<double> kp_laplacian_apply(std::span<const double> u, const PointCloud& cloud,
                                       const HypergraphParams& params, double p) {
  return HypergraphOperator(cloud, params).apply(u, p);
}

namespace {

void check_bruteforce_size(std::size_t n, std::size_t k) {
  double count = 1.0;
  for (std::size_t s = 0; s <= k; ++s) count *= static_cast<double>(n);
  require(count <= 1e7, "brute force: n^(k+1) exceeds 1e7");
}

/// Calls f(i0, i1, weight) for every (k+1)-tuple, no pruning.
template <typename F>
void for_each_tuple(const PointCloud& cloud, const HypergraphParams& params, Index i0, F&& f) {
  const std::size_t n = cloud.size();
  std::vector<Index> tuple(params.k + 1, 0);
  tuple[0] = i0;
  for (;;) {
    f(tuple[1], hyperedge_weight(cloud, tuple, params));
    std::size_t pos = params.k;
    while (pos >= 1 && ++tuple[pos] == n) {
      tuple[pos] = 0;
      --pos;
    }
    if (pos == 0) return;
  }
}

}  // namespace

double hypergraph_energy_bruteforce(std::span<const double> u, const PointCloud& cloud,
                                    const HypergraphParams& params, double p) {
  params.validate();
  const std::size_t n = cloud.size();
  require(u.size() == n, "hypergraph energy: u has the wrong length");
  check_bruteforce_size(n, params.k);
  double total = 0.0;
  for (Index i0 = 0; i0 < n; ++i0) {
    for_each_tuple(cloud, params, i0, [&](Index i1, double w) {
      total += w * abs_power(u[i1] - u[i0], p);
    });
  }
  const double kd = static_cast<double>(params.k * cloud.dim());
  return total / (std::pow(static_cast<double>(n), static_cast<double>(params.k + 1)) *
                  std::pow(params.eps, p + kd));
}

std::vector<double> kp_laplacian_apply_bruteforce(std::span<const double> u,
                                                  const PointCloud& cloud,
                                                  const HypergraphParams& params, double p) {
  params.validate();
  const std::size_t n = cloud.size();
  require(u.size() == n, "kp_laplacian_apply: u has the wrong length");
  check_bruteforce_size(n, params.k);
  const double kd = static_cast<double>(params.k * cloud.dim());
  const double scale = 1.0 / (std::pow(static_cast<double>(n), static_cast<double>(params.k)) *
                              std::pow(params.eps, p + kd));
  std::vector<double> out(n, 0.0);
  for (Index i0 = 0; i0 < n; ++i0) {
    double s = 0.0;
    for_each_tuple(cloud, params, i0, [&](Index i1, double w) {
      s += w * signed_power(u[i1] - u[i0], p);
    });
    out[i0] = scale * s;
  }
  return out;
}

}  // namespace hohl
