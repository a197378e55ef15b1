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

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hohl/geometry.hpp"
#include "hohl/kernels.hpp"
#include "hohl/solvers.hpp"

namespace hohl {

/// rho = 1, or rho = 1 + sin(2 pi x_1) / 2 (already a probability density
/// on the unit cube and the torus).
enum class DensityKind { uniform, sinusoidal };
/// u = sin(2 pi x_1), u = 1, or u = sum_a (a+1) x_a.
enum class FieldKind { sine, constant, linear };

struct ContinuumProblem {
  std::size_t d = 2;
  Domain domain = Domain::torus;
  DensityKind density = DensityKind::uniform;
  FieldKind field = FieldKind::sine;

  double rho(std::span<const double> x) const;
  void grad_rho(std::span<const double> x, std::span<double> out) const;
  double u(std::span<const double> x) const;
  void grad_u(std::span<const double> x, std::span<double> out) const;
  /// Row-major d x d.
  void hessian_u(std::span<const double> x, std::span<double> out) const;

  /// n i.i.d. points from rho (rejection sampling for the sinusoidal density).
  PointCloud sample(std::size_t n, std::uint64_t seed) const;
};

/// Delta_inf^(k,p) from pointwise data:
///   s1 (p-1)/(2 rho) [ |g|^(p-2) rho^k (grad rho . g) 2 (s + (k-1) s2) / ((p-1) s1)
///                   + rho^(k+1) |g|^(p-2) (tr H + (s/s1 - 1) g^T H g / |g|^2) ]
/// with s = sigma_kp, s1 = sigma_kp1, s2 = sigma_kp2 and g = grad u.
/// At g = 0 the value is 0 when p > 2 or H = 0; otherwise the point is
/// singular and nullopt is returned.
std::optional<double> continuum_kp_value(const KernelConstants& constants, std::size_t k,
                                         double p, double rho,
                                         std::span<const double> grad_rho,
                                         std::span<const double> grad_u,
                                         std::span<const double> hessian_u);

std::optional<double> continuum_kp_operator(const ContinuumProblem& problem,
                                            const KernelConstants& constants, std::size_t k,
                                            double p, std::span<const double> x);

/// eps(n) = coefficient * n^exponent.
struct EpsRule {
  double coefficient = 1.0;
  double exponent = -1.0 / 6.0;
  double operator()(std::size_t n) const {
    return coefficient * std::pow(static_cast<double>(n), exponent);
  }
};

struct ConsistencyConfig {
  ContinuumProblem problem;
  Kernel kernel = Kernel::indicator();
  std::size_t k = 1;
  double p = 2.0;
  std::vector<std::size_t> n_list{1000, 2000, 4000, 8000};
  EpsRule eps;
  std::uint64_t seed = 0;
  std::size_t mc_samples = 1'000'000;
  /// Evaluate at most this many interior points per n (0: all).
  std::size_t max_eval = 0;
  /// Independent samples per n; the error statistics pool all of them.
  /// Sample r at size n uses derive_seed(seed, n, r).
  std::size_t repeats = 1;
  bool record_timing = true;
};

struct ConsistencyRow {
  std::size_t n = 0;
  double eps = 0.0;
  std::size_t k = 0;
  double p = 0.0;
  double median_err = 0.0;
  double p90_err = 0.0;
  double seconds = 0.0;
  std::size_t evaluated = 0;
};

/// Kernel constants for the continuum operator. For k = 1, p = 2 the two
/// moments equal sigma_eta and are taken from quadrature; otherwise Monte Carlo.
KernelConstants continuum_constants(const Kernel& kernel, std::size_t d, std::size_t k, double p,
                                    std::size_t mc_samples, std::uint64_t seed);

/// Compares Delta^(k,p)_{n,eps} u with Delta_inf^(k,p) u at interior sample
/// points (cube: farther than 2 eps R from the boundary; torus: all).
/// Points with 0 < |grad u| < 1e-6 and singular points are skipped.
std::vector<ConsistencyRow> pointwise_consistency_experiment(const ConsistencyConfig& config);

/// Linear-interpolation quantile (q in [0, 1]) of unsorted data.
double quantile(std::vector<double> values, double q);

struct SpikeReport {
  double max_dev_outside = 0.0;
  double median = 0.0;
  std::size_t spike_count = 0;
  std::size_t outside_count = 0;
};

/// median: over unlabeled vertices. max_dev_outside: largest |u - median|
/// over unlabeled vertices farther than `radius` from every labeled vertex.
/// spike_count: labeled vertices with |u - median| > 10 max_dev_outside.
SpikeReport spike_diagnostic(std::span<const double> u, const PointCloud& cloud,
                             std::span<const Index> labeled, double radius);

struct PosednessConfig {
  std::size_t n = 4000;
  double p = 4.0;
  Kernel kernel = Kernel::indicator();
  double eps_well = 0.0;  // 0: n^(-1/2)
  double eps_ill = 0.0;   // 0: n^(-1/32)
  double radius = 0.05;
  std::vector<double> label_positions{0.2, 0.8};
  std::vector<double> label_values{0.0, 1.0};
  std::uint64_t seed = 0;
  DescentOptions descent;
};

struct PosednessRun {
  double eps = 0.0;
  SpikeReport report;
  std::size_t iterations = 0;
  bool converged = false;
};

struct PosednessResult {
  PosednessRun well;
  PosednessRun ill;
  double ratio = 0.0;  // ill.max_dev_outside / well.max_dev_outside
};

/// Solves the constrained p-energy problem on n uniform points in [0,1]
/// under both eps values and compares their spike diagnostics.
PosednessResult posedness_contrast(const PosednessConfig& config);

struct EnergyRow {
  std::size_t n = 0;
  double eps = 0.0;
  double discrete = 0.0;
  double limit = 0.0;
  double rel_gap = 0.0;
};

/// sigma^(k) int |grad u|^p rho^(k+1) by a midpoint grid.
double limiting_energy(const ContinuumProblem& problem, double sigma_k, std::size_t k, double p,
                       std::size_t grid = 0);

/// E^(k,p)_{n,eps}(u) against the limiting energy along the n list.
std::vector<EnergyRow> limiting_energy_check(const ConsistencyConfig& config);

std::string to_string(DensityKind kind);
std::string to_string(FieldKind kind);
DensityKind density_from_string(const std::string& s);
FieldKind field_from_string(const std::string& s);

}  // namespace hohl
