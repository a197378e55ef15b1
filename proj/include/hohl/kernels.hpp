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
#include <cstdint>
#include <limits>
#include <span>
#include <string>

#include "hohl/common.hpp"

namespace hohl {

/// Radial kernel profile eta: [0, inf) -> [0, inf), non-increasing, eta(0) > 0.
class Kernel {
 public:
  enum class Kind { indicator, gaussian, truncated_gaussian };

  /// eta = 1 on [0, 1], 0 after.
  static Kernel indicator() { return Kernel(Kind::indicator, 1.0); }
  /// eta(t) = exp(-4 t^2), infinite support.
  static Kernel gaussian() {
    return Kernel(Kind::gaussian, std::numeric_limits<double>::infinity());
  }
  /// exp(-4 t^2) cut to zero beyond `cutoff`. The default cutoff is the
  /// radius where the profile falls to 1e-8.
  static Kernel truncated_gaussian(double cutoff = default_gaussian_cutoff());

  /// Parses "indicator", "gaussian", "truncated_gaussian" (alias "truncated").
  static Kernel from_name(const std::string& name);

  static double default_gaussian_cutoff();

  Kind kind() const { return kind_; }
  std::string name() const;
  double support_radius() const { return radius_; }
  bool compact() const { return kind_ != Kind::gaussian; }

  double operator()(double t) const {
    if (t > radius_) return 0.0;
    if (kind_ == Kind::indicator) return 1.0;
    return std::exp(-4.0 * t * t);
  }

 private:
  Kernel(Kind kind, double radius) : kind_(kind), radius_(radius) {}
  Kind kind_;
  double radius_;
};

/// A Monte-Carlo (or quadrature) estimate with its standard error.
struct Estimate {
  double value = 0.0;
  double std_err = 0.0;
};

enum class IntegrationMethod { quadrature, monte_carlo };

/// sigma_eta = (1/d) int_{R^d} eta(|h|) |h|^2 dh.
/// Quadrature integrates the radial form on [0, R] with composite
/// Gauss-Legendre (std_err 0); Monte Carlo samples the support ball.
Estimate sigma_eta(const Kernel& kernel, std::size_t d,
                   IntegrationMethod method = IntegrationMethod::quadrature,
                   std::size_t budget = 1'000'000, std::uint64_t seed = 0);

/// Kernel-moment constants of the (k,p) hypergraph operators, all integrals
/// over (R^d)^k of
///   eta~(z_1..z_k) = prod_s eta(|z_s|) * prod_{r<j} eta(|z_j - z_r|)
/// against, respectively,
///   sigma_kp  : |(z_1)_d|^p
///   sigma_kp1 : |(z_1)_d|^(p-2) (z_1)_1^2
///   sigma_kp2 : |(z_1)_d|^(p-2) (z_1)_d (z_2)_d        (0 when k = 1)
///   sigma_k   : |e . z_1|^p for a random unit vector e (isotropy makes it
///               equal to sigma_kp; estimated separately as a check)
struct KernelConstants {
  std::size_t d = 0;
  std::size_t k = 0;
  double p = 0.0;
  Estimate sigma_eta;
  Estimate sigma_kp;
  Estimate sigma_kp1;
  Estimate sigma_kp2;
  Estimate sigma_k;
  /// sigma_kp / sigma_kp1 with a delta-method error that accounts for the
  /// shared samples.
  Estimate ratio_kp_kp1;
  std::size_t mc_samples = 0;
};

/// Uniform sampling over the product of k support balls. Samples are drawn
/// in fixed-size blocks with per-block seeds, so the result does not depend
/// on the worker count. `rotation_seed` != 0 applies a random orthogonal
/// change of variables to all z_s (the integrals are rotation invariant).
KernelConstants sigma_kp_constants(const Kernel& kernel, std::size_t d, std::size_t k,
                                   double p, std::size_t mc_samples = 1'000'000,
                                   std::uint64_t seed = 0,
                                   std::uint64_t rotation_seed = 0);

/// Bounds on sigma_kp / sigma_kp1 from the radial Gamma-function identity.
/// c_lb/c_ub are the k-dimensional radial integrals (the lower one couples
/// radii through eta(r_j + r_l), the upper one through eta(|r_j - r_l|)).
struct RatioBounds {
  double c_lb = 0.0;
  double c_ub = 0.0;
  double lb_kp = 0.0, ub_kp = 0.0;    // bounds on sigma_kp
  double lb_kp1 = 0.0, ub_kp1 = 0.0;  // bounds on sigma_kp1
  double ratio_lower = 0.0;           // (p-1) lb_kp1 / ub_kp1
  double ratio_upper = 0.0;           // (p-1) ub_kp1 / lb_kp1
};

/// Requires d >= 2 (the sigma_kp1 tuple needs two distinct axes) and a
/// compactly supported kernel. `grid` is the per-axis midpoint count.
RatioBounds gamma_ratio_bounds(const Kernel& kernel, std::size_t d, std::size_t k,
                               double p, std::size_t grid = 0);

/// Radial integral int_0^R eta(r) r^power dr by composite Gauss-Legendre.
double radial_moment(const Kernel& kernel, double power);

/// Surface area of the unit sphere S^{d-1} (2 for d = 1).
double sphere_area(std::size_t d);
/// Volume of the d-ball of radius r.
double ball_volume(std::size_t d, double r);

}  // namespace hohl
