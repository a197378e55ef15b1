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
#include <numbers>

#include "hohl/kernels.hpp"

using namespace hohl;
using std::numbers::pi;

namespace {

bool within_se(const Estimate& a, double expected, double factor = 3.0) {
  return std::fabs(a.value - expected) <= factor * a.std_err;
}

bool within_combined_se(const Estimate& a, const Estimate& b, double factor = 3.0) {
  return std::fabs(a.value - b.value) <= factor * std::hypot(a.std_err, b.std_err);
}

}  // namespace

TEST_CASE("kernel profiles") {
  const Kernel ind = Kernel::indicator();
  CHECK(ind(0.5) == 1.0);
  CHECK(ind(1.0) == 1.0);
  CHECK(ind(1.2) == 0.0);
  CHECK(ind.compact());
  CHECK(ind.support_radius() == 1.0);

  const Kernel g = Kernel::gaussian();
  CHECK(g(0.0) == 1.0);
  CHECK(g(0.5) == doctest::Approx(std::exp(-1.0)));
  CHECK_FALSE(g.compact());
  CHECK(std::isinf(g.support_radius()));

  const Kernel tg = Kernel::truncated_gaussian();
  const double r = Kernel::default_gaussian_cutoff();
  CHECK(std::exp(-4.0 * r * r) == doctest::Approx(1e-8));
  CHECK(tg.support_radius() == r);
  CHECK(tg(0.3) == g(0.3));
  CHECK(tg(r * 1.001) == 0.0);

  CHECK(Kernel::from_name("indicator").kind() == Kernel::Kind::indicator);
  CHECK(Kernel::from_name("gaussian").kind() == Kernel::Kind::gaussian);
  CHECK(Kernel::from_name("truncated_gaussian").kind() == Kernel::Kind::truncated_gaussian);
  CHECK_THROWS_AS(Kernel::from_name("box"), InvalidArgument);
  CHECK_THROWS_AS(Kernel::truncated_gaussian(0.0), InvalidArgument);
}

TEST_CASE("property: profiles are non-increasing with eta(0) > 0") {
  for (const Kernel& k : {Kernel::indicator(), Kernel::gaussian(), Kernel::truncated_gaussian(),
                          Kernel::truncated_gaussian(0.75)}) {
    CHECK(k(0.0) > 0.0);
    double prev = k(0.0);
    for (int i = 1; i <= 4000; ++i) {
      const double v = k(i * 1e-3);
      REQUIRE(v <= prev);
      REQUIRE(v >= 0.0);
      prev = v;
    }
  }
}

TEST_CASE("geometric helpers") {
  CHECK(sphere_area(1) == doctest::Approx(2.0));
  CHECK(sphere_area(2) == doctest::Approx(2.0 * pi));
  CHECK(sphere_area(3) == doctest::Approx(4.0 * pi));
  CHECK(ball_volume(2, 1.0) == doctest::Approx(pi));
  CHECK(ball_volume(3, 2.0) == doctest::Approx(32.0 * pi / 3.0));
  // int_0^1 r^3 dr for the indicator
  CHECK(radial_moment(Kernel::indicator(), 3.0) == doctest::Approx(0.25));
  // int_0^inf r^2 exp(-4 r^2) dr = sqrt(pi) / 32
  CHECK(radial_moment(Kernel::truncated_gaussian(), 2.0) ==
        doctest::Approx(std::sqrt(pi) / 32.0).epsilon(1e-8));
}

TEST_CASE("sigma_eta closed forms") {
  const Kernel ind = Kernel::indicator();
  CHECK(sigma_eta(ind, 1).value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(sigma_eta(ind, 2).value == doctest::Approx(pi / 4.0).epsilon(1e-12));
  CHECK(within_se(sigma_eta(ind, 1, IntegrationMethod::monte_carlo, 200000, 3), 2.0 / 3.0));
  CHECK(within_se(sigma_eta(ind, 2, IntegrationMethod::monte_carlo, 200000, 3), pi / 4.0));
  // truncated gaussian in d = 1: int_R exp(-4 h^2) h^2 dh = sqrt(pi) / 16
  CHECK(sigma_eta(Kernel::truncated_gaussian(), 1).value ==
        doctest::Approx(std::sqrt(pi) / 16.0).epsilon(1e-8));
  CHECK_THROWS_AS(sigma_eta(Kernel::gaussian(), 2), InvalidArgument);
}

TEST_CASE("sigma_eta Monte-Carlo budget doubling is consistent") {
  const Kernel tg = Kernel::truncated_gaussian();
  const Estimate a = sigma_eta(tg, 3, IntegrationMethod::monte_carlo, 100000, 1);
  const Estimate b = sigma_eta(tg, 3, IntegrationMethod::monte_carlo, 200000, 2);
  CHECK(within_combined_se(a, b));
  CHECK(b.std_err < a.std_err);
}

TEST_CASE("sigma constants k = 1") {
  for (const Kernel& kernel : {Kernel::indicator(), Kernel::truncated_gaussian()}) {
    for (std::size_t d : {1u, 2u, 3u}) {
      const KernelConstants c = sigma_kp_constants(kernel, d, 1, 2.0, 200000, 11);
      CAPTURE(kernel.name());
      CAPTURE(d);
      CHECK(within_se(c.ratio_kp_kp1, 1.0));
      CHECK(within_se(c.sigma_kp, c.sigma_eta.value));
      CHECK(within_se(c.sigma_k, c.sigma_eta.value));
      CHECK(c.sigma_kp2.value == 0.0);
      CHECK(c.mc_samples == 200000);
    }
  }
  for (double p : {3.0, 4.0}) {
    const KernelConstants c = sigma_kp_constants(Kernel::indicator(), 2, 1, p, 400000, 5);
    CHECK(within_se(c.ratio_kp_kp1, p - 1.0));
  }
}

TEST_CASE("sigma constants k = 2, d = 1 against a grid quadrature") {
  const KernelConstants c = sigma_kp_constants(Kernel::indicator(), 1, 2, 2.0, 1'000'000, 3);
  const int m = 2000;
  const double h = 2.0 / m;
  double grid = 0.0;
  for (int a = 0; a < m; ++a) {
    const double z1 = -1.0 + (a + 0.5) * h;
    for (int b = 0; b < m; ++b) {
      const double z2 = -1.0 + (b + 0.5) * h;
      if (std::fabs(z1 - z2) <= 1.0) grid += z1 * z1;
    }
  }
  grid *= h * h;
  CHECK(std::fabs(c.sigma_kp.value - grid) < 0.01 * grid);
  CHECK(c.sigma_kp2.value > 0.0);
}

TEST_CASE("sigma constants are rotation invariant") {
  const Kernel tg = Kernel::truncated_gaussian();
  const KernelConstants a = sigma_kp_constants(tg, 3, 2, 3.0, 200000, 4);
  const KernelConstants b = sigma_kp_constants(tg, 3, 2, 3.0, 200000, 8, 99);
  CHECK(within_combined_se(a.sigma_kp, b.sigma_kp));
  CHECK(within_combined_se(a.sigma_kp1, b.sigma_kp1));
  CHECK(within_combined_se(a.sigma_kp2, b.sigma_kp2));
  CHECK(within_combined_se(a.sigma_k, b.sigma_k));
}

TEST_CASE("sigma constants are deterministic and thread independent") {
  const KernelConstants a = sigma_kp_constants(Kernel::indicator(), 2, 2, 2.0, 50000, 6);
  const std::size_t before = num_threads();
  set_num_threads(4);
  const KernelConstants b = sigma_kp_constants(Kernel::indicator(), 2, 2, 2.0, 50000, 6);
  set_num_threads(before);
  CHECK(a.sigma_kp.value == b.sigma_kp.value);
  CHECK(a.sigma_kp1.value == b.sigma_kp1.value);
  CHECK(a.sigma_kp2.value == b.sigma_kp2.value);
  CHECK(a.sigma_k.value == b.sigma_k.value);
}

TEST_CASE("sigma constants reject bad input") {
  CHECK_THROWS_AS(sigma_kp_constants(Kernel::gaussian(), 2, 1, 2.0), InvalidArgument);
  CHECK_THROWS_AS(sigma_kp_constants(Kernel::indicator(), 2, 0, 2.0), InvalidArgument);
  CHECK_THROWS_AS(sigma_kp_constants(Kernel::indicator(), 0, 1, 2.0), InvalidArgument);
}

TEST_CASE("Gamma-identity bounds") {
  const RatioBounds one = gamma_ratio_bounds(Kernel::indicator(), 2, 1, 3.0);
  CHECK(one.ratio_lower == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(one.ratio_upper == doctest::Approx(2.0).epsilon(1e-9));

  for (double p : {2.0, 3.0}) {
    const RatioBounds b = gamma_ratio_bounds(Kernel::indicator(), 2, 2, p);
    const KernelConstants c = sigma_kp_constants(Kernel::indicator(), 2, 2, p, 400000, 21);
    CAPTURE(p);
    CHECK(b.lb_kp <= b.ub_kp);
    CHECK(b.lb_kp1 <= b.ub_kp1);
    CHECK(b.ratio_lower <= b.ratio_upper);
    CHECK(c.sigma_kp.value >= b.lb_kp - 3.0 * c.sigma_kp.std_err);
    CHECK(c.sigma_kp.value <= b.ub_kp + 3.0 * c.sigma_kp.std_err);
    CHECK(c.ratio_kp_kp1.value >= b.ratio_lower - 3.0 * c.ratio_kp_kp1.std_err);
    CHECK(c.ratio_kp_kp1.value <= b.ratio_upper + 3.0 * c.ratio_kp_kp1.std_err);
  }
}
