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


// Shared helpers for the unit tests: random instance generators and
// tolerance checks.

#pragma once

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hohl/common.hpp"
#include "hohl/geometry.hpp"

namespace hohl::testing {

inline PointCloud line_cloud(std::vector<double> xs, std::vector<int> labels = {}) {
  return PointCloud(std::move(xs), 1, std::move(labels));
}

/// n points uniform in [0, scale]^d.
inline PointCloud random_cloud(Rng& rng, std::size_t n, std::size_t d, double scale = 1.0) {
  std::vector<double> coords(n * d);
  for (double& v : coords) v = scale * rng.uniform();
  return PointCloud(std::move(coords), d);
}

/// Coordinates on a coarse lattice so that ties and duplicates occur.
inline PointCloud lattice_cloud(Rng& rng, std::size_t n, std::size_t d, int levels) {
  std::vector<double> coords(n * d);
  for (double& v : coords) v = static_cast<double>(rng.below(levels)) / levels;
  return PointCloud(std::move(coords), d);
}

inline std::vector<double> random_vector(Rng& rng, std::size_t n, double lo = -1.0,
                                         double hi = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = lo + (hi - lo) * rng.uniform();
  return v;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::fabs(v));
  return m;
}

inline double rel_diff(double a, double b) {
  const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
  return std::fabs(a - b) / scale;
}

/// max_i |a_i - b_i| / max(max|a|, max|b|).
inline double rel_diff(std::span<const double> a, std::span<const double> b) {
  REQUIRE(a.size() == b.size());
  double num = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) num = std::max(num, std::fabs(a[i] - b[i]));
  const double den = std::max({max_abs(a), max_abs(b), 1e-300});
  return num / den;
}

}  // namespace hohl::testing
