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

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "hohl/geometry.hpp"
#include "support.hpp"

using namespace hohl;
using hohl::testing::line_cloud;

TEST_CASE("PointCloud validation") {
  CHECK_THROWS_AS(PointCloud({}, 1), InvalidArgument);
  CHECK_THROWS_AS(PointCloud({1.0, 2.0, 3.0}, 2), InvalidArgument);
  CHECK_THROWS_AS(PointCloud({1.0, std::numeric_limits<double>::quiet_NaN()}, 1), InvalidArgument);
  CHECK_THROWS_AS(PointCloud({1.0, INFINITY}, 1), InvalidArgument);
  CHECK_THROWS_AS(PointCloud({1.0, 2.0}, 1, {0, 0}), InvalidArgument);   // one class
  CHECK_THROWS_AS(PointCloud({1.0, 2.0}, 1, {0, -1}), InvalidArgument);
  CHECK_THROWS_AS(PointCloud({1.0, 2.0}, 1, {0}), InvalidArgument);
  const PointCloud c({0.0, 1.0, 2.0, 3.0}, 2, {1, 0});
  CHECK(c.size() == 2);
  CHECK(c.dim() == 2);
  CHECK(c.num_classes() == 2);
  CHECK(c.coord(1, 0) == 2.0);
  CHECK(c.distance(0, 1) == doctest::Approx(std::sqrt(8.0)));
}

TEST_CASE("sample_uniform") {
  const PointCloud one = sample_uniform(1, 3, Domain::cube, 7);
  REQUIRE(one.size() == 1);
  for (double v : one.point(0)) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  const PointCloud c = sample_uniform(1000, 2, Domain::cube, 1);
  for (std::size_t a = 0; a < 2; ++a) {
    double mean = 0.0;
    for (Index i = 0; i < c.size(); ++i) mean += c.coord(i, a);
    CHECK(std::fabs(mean / 1000.0 - 0.5) < 0.05);
  }
  CHECK(sample_uniform(50, 4, Domain::torus, 9).coords() ==
        sample_uniform(50, 4, Domain::torus, 9).coords());
  CHECK(sample_uniform(50, 4, Domain::cube, 9).coords() !=
        sample_uniform(50, 4, Domain::cube, 10).coords());
}

TEST_CASE("torus distance wraps") {
  const std::vector<double> a{0.05, 0.5}, b{0.95, 0.5};
  CHECK(distance2(a, b, Domain::torus) == doctest::Approx(0.01));
  CHECK(distance2(a, b, Domain::cube) == doctest::Approx(0.81));
}

TEST_CASE("range neighbours on the toy line") {
  const PointCloud c = line_cloud({0.0, 0.5, 1.2});
  const NeighborIndex index(c);
  CHECK(index.range_neighbors(0, 1.0) == std::vector<Index>{1});
  CHECK(index.range_neighbors(1, 0.1).empty());
  CHECK(index.range_neighbors(0, 5.0) == std::vector<Index>{1, 2});
  CHECK(index.range(0, 1.0, true).indices == std::vector<Index>{0, 1});
  CHECK_THROWS_AS(index.range(3, 1.0), InvalidArgument);
}

TEST_CASE("knn on the toy line") {
  const PointCloud c = line_cloud({0.0, 0.5, 1.2});
  const NeighborIndex index(c);
  const Neighbors nb = index.knn(2, 1);
  CHECK(nb.indices == std::vector<Index>{1});
  CHECK(nb.distances[0] == doctest::Approx(0.7));
  CHECK(index.knn(0, 2).indices == std::vector<Index>{1, 2});
  CHECK(index.kth_distance(0, 2) == doctest::Approx(1.2));
  CHECK_THROWS_AS(index.knn(0, 3), InvalidArgument);
  CHECK_THROWS_AS(index.knn(0, 0), InvalidArgument);

  const PointCloud dup = line_cloud({0.3, 1.0, 0.3});
  const Neighbors d = NeighborIndex(dup).knn(0, 1);
  CHECK(d.indices == std::vector<Index>{2});
  CHECK(d.distances[0] == 0.0);

  // equidistant neighbours: lower index first
  const PointCloud tie = line_cloud({0.0, 1.0, -1.0});
  CHECK(NeighborIndex(tie).knn(0, 1).indices == std::vector<Index>{1});
}

namespace {

void check_against_brute_force(const PointCloud& c, Rng& rng) {
  const NeighborIndex index(c);
  const std::size_t n = c.size();
  for (int probe = 0; probe < 20; ++probe) {
    const Index i = rng.below(n);
    const double r = 0.6 * rng.uniform();
    const Neighbors fast = index.range(i, r);
    const Neighbors slow = brute_force_range(c, i, r);
    REQUIRE(fast.indices == slow.indices);
    REQUIRE(fast.distances == slow.distances);
    const std::size_t k = 1 + rng.below(n - 1);
    const Neighbors kf = index.knn(i, k);
    const Neighbors ks = brute_force_knn(c, i, k);
    REQUIRE(kf.indices == ks.indices);
    REQUIRE(kf.distances == ks.distances);
    for (std::size_t m = 1; m < k; ++m) REQUIRE(kf.distances[m - 1] <= kf.distances[m]);
  }
}

}  // namespace

TEST_CASE("property: tree queries equal brute-force scans") {
  Rng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng.below(499);
    const std::size_t d = 1 + rng.below(5);
    const PointCloud c = hohl::testing::random_cloud(rng, n, d);
    CHECK(NeighborIndex(c).uses_tree());
    check_against_brute_force(c, rng);
    // lattices produce many ties and duplicates
    check_against_brute_force(hohl::testing::lattice_cloud(rng, n, d, 4), rng);
  }
  const PointCloud high = hohl::testing::random_cloud(rng, 200, 20);
  CHECK_FALSE(NeighborIndex(high).uses_tree());
  check_against_brute_force(high, rng);
}

TEST_CASE("property: torus queries equal brute-force scans") {
  Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const PointCloud c = sample_uniform(300, 2, Domain::torus, trial);
    check_against_brute_force(c, rng);
  }
}

TEST_CASE("property: permutation commutes with queries") {
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 30 + rng.below(100);
    const PointCloud c = hohl::testing::lattice_cloud(rng, n, 2, 6);
    std::vector<Index> perm(n);
    std::iota(perm.begin(), perm.end(), Index{0});
    for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    const PointCloud pc = c.permuted(perm);
    const NeighborIndex a(c), b(pc);
    for (Index k = 0; k < n; ++k) {
      // new vertex k is old vertex perm[k]
      auto ra = a.range_neighbors(perm[k], 0.3);
      std::sort(ra.begin(), ra.end());
      auto rb = b.range_neighbors(k, 0.3);
      for (Index& v : rb) v = perm[v];
      std::sort(rb.begin(), rb.end());
      REQUIRE(ra == rb);
      // kNN distances are permutation invariant even when ties reorder vertices
      REQUIRE(a.knn(perm[k], 5).distances == b.knn(k, 5).distances);
    }
  }
}
