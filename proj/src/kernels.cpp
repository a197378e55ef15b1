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

#include "hohl/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace hohl {

Kernel Kernel::truncated_gaussian(double cutoff) {
  require(cutoff > 0.0 && std::isfinite(cutoff),
          "truncated_gaussian: cutoff must be positive and finite");
  return Kernel(Kind::truncated_gaussian, cutoff);
}

double Kernel::default_gaussian_cutoff() {
  // exp(-4 R^2) = 1e-8
  return std::sqrt(std::log(1e8) / 4.0);
}

Kernel Kernel::from_name(const std::string& name) {
  if (name == "indicator") return indicator();
  if (name == "gaussian" || name == "exp_gaussian") return gaussian();
  if (name == "truncated_gaussian" || name == "truncated") return truncated_gaussian();
  throw InvalidArgument("unknown kernel '" + name + "'");
}

std::string Kernel::name() const {
  switch (kind_) {
    case Kind::indicator: return "indicator";
    case Kind::gaussian: return "gaussian";
    case Kind::truncated_gaussian: return "truncated_gaussian";
  }
  return "unknown";
}

double sphere_area(std::size_t d) {
  const double h = 0.5 * static_cast<double>(d);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

double ball_volume(std::size_t d, double r) {
  const double h = 0.5 * static_cast<double>(d);
  return std::pow(std::numbers::pi, h) / std::tgamma(h + 1.0) * std::pow(r, static_cast<double>(d));
}

namespace {

constexpr std::size_t kGaussOrder = 20;

struct GaussLegendre {
  std::array<double, kGaussOrder> nodes{};
  std::array<double, kGaussOrder> weights{};

  GaussLegendre() {
    const int m = static_cast<int>(kGaussOrder);
    for (int i = 0; i < m; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= m; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = m * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::fabs(dx) < 1e-16) break;
      }
      nodes[static_cast<std::size_t>(i)] = x;
      weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

const GaussLegendre& gauss_legendre() {
  static const GaussLegendre rule;
  return rule;
}

template <typename F>
double integrate(F&& f, double a, double b, std::size_t panels) {
  const auto& rule = gauss_legendre();
  const double h = (b - a) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t s = 0; s < panels; ++s) {
    const double lo = a + h * static_cast<double>(s);
    const double mid = lo + 0.5 * h;
    double part = 0.0;
    for (std::size_t q = 0; q < kGaussOrder; ++q) {
      part += rule.weights[q] * f(mid + 0.5 * h * rule.nodes[q]);
    }
    total += 0.5 * h * part;
  }
  return total;
}

void require_compact(const Kernel& kernel, const char* what) {
  if (!kernel.compact()) {
    throw InvalidArgument(std::string(what) +
                          ": untruncated gaussian has infinite support; use truncated_gaussian");
  }
}

/// Fills z with a uniform sample from the d-ball of radius r.
void sample_ball(Rng& rng, double r, std::span<double> z) {
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& v : z) {
      v = rng.normal();
      norm2 += v * v;
    }
  } while (norm2 == 0.0);
  const double scale =
      r * std::pow(rng.uniform(), 1.0 / static_cast<double>(z.size())) / std::sqrt(norm2);
  for (double& v : z) v *= scale;
}

/// Random orthogonal matrix (row-major d x d) by Gram-Schmidt on normals.
std::vector<double> random_rotation(std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> q(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (;;) {
      for (std::size_t a = 0; a < d; ++a) q[i * d + a] = rng.normal();
      for (std::size_t j = 0; j < i; ++j) {
        double dot = 0.0;
        for (std::size_t a = 0; a < d; ++a) dot += q[i * d + a] * q[j * d + a];
        for (std::size_t a = 0; a < d; ++a) q[i * d + a] -= dot * q[j * d + a];
      }
      double norm = 0.0;
      for (std::size_t a = 0; a < d; ++a) norm += q[i * d + a] * q[i * d + a];
      norm = std::sqrt(norm);
      if (norm > 1e-8) {
        for (std::size_t a = 0; a < d; ++a) q[i * d + a] /= norm;
        break;
      }
    }
  }
  return q;
}

constexpr std::size_t kBlockSize = 1 << 14;

struct MomentSums {
  // integrands: a = sigma_kp, b = sigma_kp1, c = sigma_kp2, e = sigma_k
  double a = 0, b = 0, c = 0, e = 0;
  double aa = 0, bb = 0, ab = 0, cc = 0, ee = 0;

  void add(const MomentSums& o) {
    a += o.a; b += o.b; c += o.c; e += o.e;
    aa += o.aa; bb += o.bb; ab += o.ab; cc += o.cc; ee += o.ee;
  }
};

Estimate mean_estimate(double sum, double sum2, double count, double scale) {
  const double mean = sum / count;
  const double var = std::max(0.0, sum2 / count - mean * mean);
  return {scale * mean, scale * std::sqrt(var / count)};
}

}  // namespace

double radial_moment(const Kernel& kernel, double power) {
  require_compact(kernel, "radial_moment");
  const double r = kernel.support_radius();
  return integrate([&](double t) { return kernel(t) * std::pow(t, power); }, 0.0, r, 64);
}

Estimate sigma_eta(const Kernel& kernel, std::size_t d, IntegrationMethod method,
                   std::size_t budget, std::uint64_t seed) {
  require(d >= 1, "sigma_eta: d must be >= 1");
  require_compact(kernel, "sigma_eta");
  const double dd = static_cast<double>(d);
  if (method == IntegrationMethod::quadrature) {
    return {sphere_area(d) * radial_moment(kernel, dd + 1.0) / dd, 0.0};
  }
  require(budget >= 2, "sigma_eta: Monte-Carlo budget must be >= 2");
  const double r = kernel.support_radius();
  const std::size_t blocks = (budget + kBlockSize - 1) / kBlockSize;
  std::vector<std::array<double, 2>> partial(blocks, {0.0, 0.0});
  parallel_for(0, blocks, [&](std::size_t blk) {
    Rng rng(derive_seed(seed, 0x51e7a, blk));
    std::vector<double> h(d);
    const std::size_t count = std::min(kBlockSize, budget - blk * kBlockSize);
    double s = 0.0, s2 = 0.0;
    for (std::size_t m = 0; m < count; ++m) {
      sample_ball(rng, r, h);
      double n2 = 0.0;
      for (double v : h) n2 += v * v;
      const double f = kernel(std::sqrt(n2)) * n2;
      s += f;
      s2 += f * f;
    }
    partial[blk] = {s, s2};
  });
  double s = 0.0, s2 = 0.0;
  for (const auto& [a, b] : partial) {
    s += a;
    s2 += b;
  }
  return mean_estimate(s, s2, static_cast<double>(budget), ball_volume(d, r) / dd);
}

KernelConstants sigma_kp_constants(const Kernel& kernel, std::size_t d, std::size_t k,
                                   double p, std::size_t mc_samples, std::uint64_t seed,
                                   std::uint64_t rotation_seed) {
  require(d >= 1, "sigma_kp_constants: d must be >= 1");
  require(k >= 1, "sigma_kp_constants: k must be >= 1");
  require(p >= 2.0, "sigma_kp_constants: p must be >= 2");
  require(mc_samples >= 2, "sigma_kp_constants: need at least two samples");
  require_compact(kernel, "sigma_kp_constants");

  const double r = kernel.support_radius();
  const std::vector<double> rotation =
      rotation_seed != 0 ? random_rotation(d, rotation_seed) : std::vector<double>{};

  std::vector<double> direction(d);
  {
    Rng rng(derive_seed(seed, 0xd1ec7));
    double n2 = 0.0;
    do {
      n2 = 0.0;
      for (double& v : direction) {
        v = rng.normal();
        n2 += v * v;
      }
    } while (n2 == 0.0);
    for (double& v : direction) v /= std::sqrt(n2);
  }

  const std::size_t blocks = (mc_samples + kBlockSize - 1) / kBlockSize;
  std::vector<MomentSums> partial(blocks);
  parallel_for(0, blocks, [&](std::size_t blk) {
    Rng rng(derive_seed(seed, 0x5a3b1e, blk));
    std::vector<double> z(k * d), raw(d);
    const std::size_t count = std::min(kBlockSize, mc_samples - blk * kBlockSize);
    MomentSums sums;
    for (std::size_t m = 0; m < count; ++m) {
      for (std::size_t s = 0; s < k; ++s) {
        auto zs = std::span<double>(z).subspan(s * d, d);
        if (rotation.empty()) {
          sample_ball(rng, r, zs);
        } else {
          sample_ball(rng, r, raw);
          for (std::size_t a = 0; a < d; ++a) {
            double v = 0.0;
            for (std::size_t b = 0; b < d; ++b) v += rotation[a * d + b] * raw[b];
            zs[a] = v;
          }
        }
      }
      double weight = 1.0;
      for (std::size_t s = 0; s < k && weight != 0.0; ++s) {
        double n2 = 0.0;
        for (std::size_t a = 0; a < d; ++a) n2 += z[s * d + a] * z[s * d + a];
        weight *= kernel(std::sqrt(n2));
      }
      for (std::size_t j = 1; j < k && weight != 0.0; ++j) {
        for (std::size_t q = 0; q < j && weight != 0.0; ++q) {
          double n2 = 0.0;
          for (std::size_t a = 0; a < d; ++a) {
            const double t = z[j * d + a] - z[q * d + a];
            n2 += t * t;
          }
          weight *= kernel(std::sqrt(n2));
        }
      }
      double fa = 0.0, fb = 0.0, fc = 0.0, fe = 0.0;
      if (weight != 0.0) {
        const double last = z[d - 1];
        const double abs_last = std::fabs(last);
        const double pow_pm2 = std::pow(abs_last, p - 2.0);
        fa = weight * pow_pm2 * abs_last * abs_last;
        fb = weight * pow_pm2 * z[0] * z[0];
        if (k >= 2) fc = weight * pow_pm2 * last * z[d + d - 1];
        double proj = 0.0;
        for (std::size_t a = 0; a < d; ++a) proj += direction[a] * z[a];
        fe = weight * std::pow(std::fabs(proj), p);
      }
      sums.a += fa; sums.b += fb; sums.c += fc; sums.e += fe;
      sums.aa += fa * fa; sums.bb += fb * fb; sums.ab += fa * fb;
      sums.cc += fc * fc; sums.ee += fe * fe;
    }
    partial[blk] = sums;
  });
  MomentSums total;
  for (const auto& s : partial) total.add(s);

  const double count = static_cast<double>(mc_samples);
  const double volume = std::pow(ball_volume(d, r), static_cast<double>(k));
  KernelConstants out;
  out.d = d;
  out.k = k;
  out.p = p;
  out.mc_samples = mc_samples;
  out.sigma_eta = sigma_eta(kernel, d);
  out.sigma_kp = mean_estimate(total.a, total.aa, count, volume);
  out.sigma_kp1 = mean_estimate(total.b, total.bb, count, volume);
  out.sigma_kp2 = k >= 2 ? mean_estimate(total.c, total.cc, count, volume) : Estimate{};
  out.sigma_k = mean_estimate(total.e, total.ee, count, volume);

  const double ma = total.a / count, mb = total.b / count;
  const double va = total.aa / count - ma * ma;
  const double vb = total.bb / count - mb * mb;
  const double cab = total.ab / count - ma * mb;
  const double ratio = ma / mb;
  const double var_ratio =
      std::max(0.0, (va - 2.0 * ratio * cab + ratio * ratio * vb) / (mb * mb * count));
  out.ratio_kp_kp1 = {ratio, std::sqrt(var_ratio)};
  return out;
}

RatioBounds gamma_ratio_bounds(const Kernel& kernel, std::size_t d, std::size_t k, double p,
                               std::size_t grid) {
  require(d >= 2, "gamma_ratio_bounds: needs d >= 2");
  require(k >= 1, "gamma_ratio_bounds: k must be >= 1");
  require(p >= 2.0, "gamma_ratio_bounds: p must be >= 2");
  require_compact(kernel, "gamma_ratio_bounds");
  const double dd = static_cast<double>(d);
  const double r_max = kernel.support_radius();

  RatioBounds out;
  if (k == 1) {
    out.c_lb = out.c_ub = radial_moment(kernel, p + dd - 1.0);
  } else {
    if (grid == 0) grid = k == 2 ? 2000 : (k == 3 ? 160 : 40);
    const double h = r_max / static_cast<double>(grid);
    std::size_t total = 1;
    for (std::size_t s = 0; s < k; ++s) total *= grid;
    std::vector<double> radii(k);
    std::vector<std::size_t> idx(k, 0);
    double lb = 0.0, ub = 0.0;
    for (std::size_t m = 0; m < total; ++m) {
      std::size_t rest = m;
      for (std::size_t s = 0; s < k; ++s) {
        idx[s] = rest % grid;
        rest /= grid;
        radii[s] = (static_cast<double>(idx[s]) + 0.5) * h;
      }
      double base = std::pow(radii[0], p + dd - 1.0);
      for (std::size_t s = 0; s < k; ++s) {
        base *= kernel(radii[s]);
        if (s > 0) base *= std::pow(radii[s], dd - 1.0);
      }
      if (base == 0.0) continue;
      double w_lb = base, w_ub = base;
      for (std::size_t j = 1; j < k; ++j) {
        for (std::size_t q = 0; q < j; ++q) {
          w_lb *= kernel(radii[j] + radii[q]);
          w_ub *= kernel(std::fabs(radii[j] - radii[q]));
        }
      }
      lb += w_lb;
      ub += w_ub;
    }
    const double cell = std::pow(h, static_cast<double>(k));
    out.c_lb = lb * cell;
    out.c_ub = ub * cell;
  }

  const double area = std::pow(sphere_area(d), static_cast<double>(k) - 1.0);
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  const double g_kp = 2.0 * std::tgamma(0.5 * (p + 1.0)) * std::pow(sqrt_pi, dd - 1.0) /
                      std::tgamma(0.5 * (p + dd));
  const double g_kp1 = 2.0 * std::tgamma(0.5 * (p - 1.0)) * std::pow(sqrt_pi, dd - 2.0) *
                       (0.5 * sqrt_pi) / std::tgamma(0.5 * (p + dd));
  out.lb_kp = out.c_lb * area * g_kp;
  out.ub_kp = out.c_ub * area * g_kp;
  out.lb_kp1 = out.c_lb * area * g_kp1;
  out.ub_kp1 = out.c_ub * area * g_kp1;
  out.ratio_lower = out.lb_kp / out.ub_kp1;
  out.ratio_upper = out.ub_kp / out.lb_kp1;
  return out;
}

}  // namespace hohl
