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

#include "hohl/hypergraph.hpp"
#include "support.hpp"

using namespace hohl;
using hohl::testing::line_cloud;
using hohl::testing::rel_diff;

TEST_CASE("hypergraph parameters") {
  HypergraphParams p;
  for (std::size_t k = 1; k <= 5; ++k) {
    p.k = k;
    CHECK(p.t_k() == k * (k + 1) / 2);
  }
  p.k = 0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p.k = 1;
  p.eps = 0.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

TEST_CASE("hyperedge weights") {
  const PointCloud c = line_cloud({0.0, 0.4, 0.8, 2.0});
  const HypergraphParams ind{2, 1.0, Kernel::indicator()};
  const std::vector<Index> close{0, 1, 2}, far{0, 1, 3};
  CHECK(hyperedge_weight(c, close, ind) == 1.0);
  CHECK(hyperedge_weight(c, far, ind) == 0.0);
  const HypergraphParams gauss{2, 1.0, Kernel::gaussian()};
  const std::vector<Index> same{1, 1, 1};
  CHECK(hyperedge_weight(c, same, gauss) == 1.0);
  const double expected = std::exp(-4.0 * (0.16 + 0.64 + 0.16));
  CHECK(hyperedge_weight(c, close, gauss) == doctest::Approx(expected));
  const std::vector<Index> wrong_size{0, 1};
  CHECK_THROWS_AS(hyperedge_weight(c, wrong_size, gauss), InvalidArgument);
}

TEST_CASE("toy energy and operator") {
  const PointCloud c = line_cloud({0.0, 0.5, 1.2});
  const HypergraphParams params{1, 1.0, Kernel::indicator()};
  const std::vector<double> u{0.0, 1.0, 0.0};
  CHECK(hypergraph_energy(u, c, params, 2.0) == doctest::Approx(4.0 / 9.0));
  CHECK(hypergraph_energy_bruteforce(u, c, params, 2.0) == doctest::Approx(4.0 / 9.0));
  const auto lu = kp_laplacian_apply(u, c, params, 2.0);
  CHECK(lu[0] == doctest::Approx(1.0 / 3.0));
  CHECK(lu[1] == doctest::Approx(-2.0 / 3.0));
  CHECK(lu[2] == doctest::Approx(1.0 / 3.0));
  const std::vector<double> flat(3, 2.5);
  CHECK(hypergraph_energy(flat, c, params, 3.0) == 0.0);
  CHECK(kp_laplacian_apply(flat, c, params, 3.0) == std::vector<double>(3, 0.0));
  CHECK(hypergraph_energy_bruteforce(flat, c, params, 3.0) == 0.0);
}

TEST_CASE("untruncated gaussian is refused") {
  const PointCloud c = line_cloud({0.0, 0.5});
  const HypergraphParams params{1, 1.0, Kernel::gaussian()};
  CHECK_THROWS_AS(HypergraphOperator(c, params), InvalidArgument);
}

TEST_CASE("brute-force size guard") {
  Rng rng(1);
  const PointCloud c = hohl::testing::random_cloud(rng, 60, 1);
  const std::vector<double> u(60, 0.0);
  CHECK_THROWS_AS(hypergraph_energy_bruteforce(u, c, {3, 0.1, Kernel::indicator()}, 2.0),
                  InvalidArgument);
  CHECK_NOTHROW(hypergraph_energy_bruteforce(u, c, {2, 0.1, Kernel::indicator()}, 2.0));
}

TEST_CASE("property: pruned enumeration equals brute force") {
  Rng rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 3 + rng.below(28);
    const std::size_t d = 1 + rng.below(3);
    const std::size_t k = 1 + rng.below(3);
    const double p = rng.below(2) == 0 ? 2.0 : 3.0;
    const Kernel kernel = rng.below(2) == 0 ? Kernel::indicator() : Kernel::truncated_gaussian();
    const PointCloud c = hohl::testing::random_cloud(rng, n, d);
    const HypergraphParams params{k, 0.3 + 0.5 * rng.uniform(), kernel};
    const auto u = hohl::testing::random_vector(rng, n);
    CAPTURE(n);
    CAPTURE(k);
    CAPTURE(p);
    const double fast = hypergraph_energy(u, c, params, p);
    const double slow = hypergraph_energy_bruteforce(u, c, params, p);
    REQUIRE(rel_diff(fast, slow) <= 1e-10);
    const auto af = kp_laplacian_apply(u, c, params, p);
    const auto as = kp_laplacian_apply_bruteforce(u, c, params, p);
    REQUIRE(rel_diff(af, as) <= 1e-10);
  }
}

TEST_CASE("row subsets match the full operator") {
  Rng rng(3);
  const PointCloud c = hohl::testing::random_cloud(rng, 40, 2);
  const HypergraphParams params{2, 0.4, Kernel::indicator()};
  const auto u = hohl::testing::random_vector(rng, 40);
  const auto full = kp_laplacian_apply(u, c, params, 3.0);
  const std::vector<Index> rows{3, 17, 39, 0};
  const HypergraphOperator op(c, params, rows);
  const auto part = op.apply(u, 3.0);
  REQUIRE(part.size() == rows.size());
  for (std::size_t m = 0; m < rows.size(); ++m) {
    CHECK(part[m] == doctest::Approx(full[rows[m]]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(op.energy(u, 3.0), InvalidArgument);
}

TEST_CASE("property: Euler-Lagrange directional derivative") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 20;
    const std::size_t k = 1 + rng.below(3);
    const double p = trial % 2 == 0 ? 2.0 : 3.0;
    const PointCloud c = hohl::testing::random_cloud(rng, n, 2);
    const HypergraphParams params{k, 0.6, Kernel::indicator()};
    const HypergraphOperator op(c, params);
    const auto u = hohl::testing::random_vector(rng, n);
    const auto v = hohl::testing::random_vector(rng, n);
    const double h = 1e-4;
    std::vector<double> up(u), um(u);
    for (std::size_t i = 0; i < n; ++i) {
      up[i] += h * v[i];
      um[i] -= h * v[i];
    }
    const double fd = (op.energy(up, p) - op.energy(um, p)) / (2.0 * h);
    const auto lu = op.apply(u, p);
    const double exact = -2.0 * p * hohl::testing::dot(lu, v) / static_cast<double>(n);
    CAPTURE(k);
    CAPTURE(p);
    CHECK(rel_diff(fd, exact) <= (p == 2.0 ? 1e-10 : 1e-6));
  }
}

TEST_CASE("property: antisymmetric summand, scaling and positivity") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 10 + rng.below(30);
    const std::size_t k = 1 + rng.below(3);
    const double p = 2.0 + rng.below(3);
    const PointCloud c = hohl::testing::random_cloud(rng, n, 1);
    const HypergraphParams params{k, 0.5, Kernel::truncated_gaussian()};
    const HypergraphOperator op(c, params);
    const auto m = op.matrix();
    CHECK(m.is_symmetric());

    const auto u = hohl::testing::random_vector(rng, n);
    // g(x, y) = -g(y, x) makes the operator sum to zero
    const auto lu = op.apply(u, p);
    double sum = 0.0, mass = 0.0;
    for (double v : lu) {
      sum += v;
      mass += std::fabs(v);
    }
    CHECK(std::fabs(sum) <= 1e-12 * mass);

    const double e = op.energy(u, p);
    CHECK(e > 0.0);
    std::vector<double> cu(u);
    for (double& v : cu) v *= -1.7;
    CHECK(rel_diff(op.energy(cu, p), std::pow(1.7, p) * e) <= 1e-12);
  }
}

TEST_CASE("swapping the first two tuple entries flips the sign") {
  const PointCloud c = line_cloud({0.0, 0.3, 0.5});
  const HypergraphParams params{2, 1.0, Kernel::truncated_gaussian()};
  const HypergraphOperator op(c, params);
  const auto& rows = op.pair_weights();
  // M(i0, i1) must equal M(i1, i0)
  for (Index i = 0; i < 3; ++i) {
    for (const auto& [j, w] : rows[i]) {
      double back = 0.0;
      for (const auto& [jj, ww] : rows[j]) {
        if (jj == i) back = ww;
      }
      CHECK(back == doctest::Approx(w).epsilon(1e-14));
    }
  }
}
