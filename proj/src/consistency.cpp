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

#include "hohl/consistency.hpp"

#include <algorithm>
#include <chrono>
#include <numbers>

#include "hohl/hypergraph.hpp"

namespace hohl {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

double ContinuumProblem::rho(std::span<const double> x) const {
  if (density == DensityKind::uniform) return 1.0;
  return 1.0 + 0.5 * std::sin(kTwoPi * x[0]);
}

void ContinuumProblem::grad_rho(std::span<const double> x, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  if (density == DensityKind::sinusoidal) out[0] = 0.5 * kTwoPi * std::cos(kTwoPi * x[0]);
}

double ContinuumProblem::u(std::span<const double> x) const {
  switch (field) {
    case FieldKind::sine: return std::sin(kTwoPi * x[0]);
    case FieldKind::constant: return 1.0;
    case FieldKind::linear: {
      double s = 0.0;
      for (std::size_t a = 0; a < x.size(); ++a) s += static_cast<double>(a + 1) * x[a];
      return s;
    }
  }
  return 0.0;
}

void ContinuumProblem::grad_u(std::span<const double> x, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  switch (field) {
    case FieldKind::sine: out[0] = kTwoPi * std::cos(kTwoPi * x[0]); break;
    case FieldKind::constant: break;
    case FieldKind::linear:
      for (std::size_t a = 0; a < out.size(); ++a) out[a] = static_cast<double>(a + 1);
      break;
  }
}

void ContinuumProblem::hessian_u(std::span<const double> x, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  if (field == FieldKind::sine) out[0] = -kTwoPi * kTwoPi * std::sin(kTwoPi * x[0]);
}

PointCloud ContinuumProblem::sample(std::size_t n, std::uint64_t seed) const {
  require(n >= 1 && d >= 1, "ContinuumProblem::sample: n and d must be >= 1");
  if (field == FieldKind::linear) {
    require(domain == Domain::cube, "ContinuumProblem: a linear field is not periodic");
  }
  Rng rng(seed);
  std::vector<double> coords;
  coords.reserve(n * d);
  std::vector<double> x(d);
  while (coords.size() < n * d) {
    for (double& v : x) v = rng.uniform();
    if (density == DensityKind::sinusoidal && 1.5 * rng.uniform() > rho(x)) continue;
    coords.insert(coords.end(), x.begin(), x.end());
  }
  return PointCloud(std::move(coords), d, {}, domain);
}

std::optional<double> continuum_kp_value(const KernelConstants& constants, std::size_t k,
                                         double p, double rho,
                                         std::span<const double> grad_rho,
                                         std::span<const double> grad_u,
                                         std::span<const double> hessian_u) {
  const std::size_t d = grad_u.size();
  require(grad_rho.size() == d && hessian_u.size() == d * d,
          "continuum_kp_value: dimension mismatch");
  require(rho > 0.0, "continuum_kp_value: density must be positive");
  const double s = constants.sigma_kp.value;
  const double s1 = constants.sigma_kp1.value;
  const double s2 = constants.sigma_kp2.value;

  double g2 = 0.0, trace = 0.0, ghg = 0.0, drift = 0.0;
  bool hessian_zero = true;
  for (std::size_t a = 0; a < d; ++a) {
    g2 += grad_u[a] * grad_u[a];
    trace += hessian_u[a * d + a];
    drift += grad_rho[a] * grad_u[a];
    for (std::size_t b = 0; b < d; ++b) {
      ghg += grad_u[a] * hessian_u[a * d + b] * grad_u[b];
      if (hessian_u[a * d + b] != 0.0) hessian_zero = false;
    }
  }
  if (g2 == 0.0) {
    if (p > 2.0 || hessian_zero) return 0.0;
    return std::nullopt;
  }
  const double kk = static_cast<double>(k);
  const double gp = std::pow(g2, 0.5 * (p - 2.0));
  const double first = gp * std::pow(rho, kk) * drift * 2.0 * (s + (kk - 1.0) * s2) /
                       ((p - 1.0) * s1);
  const double second = std::pow(rho, kk + 1.0) * gp * (trace + (s / s1 - 1.0) * ghg / g2);
  return (first + second) * s1 * (p - 1.0) / (2.0 * rho);
}

std::optional<double> continuum_kp_operator(const ContinuumProblem& problem,
                                            const KernelConstants& constants, std::size_t k,
                                            double p, std::span<const double> x) {
  const std::size_t d = problem.d;
  require(x.size() == d, "continuum_kp_operator: point has the wrong dimension");
  std::vector<double> gr(d), gu(d), h(d * d);
  problem.grad_rho(x, gr);
  problem.grad_u(x, gu);
  problem.hessian_u(x, h);
  return continuum_kp_value(constants, k, p, problem.rho(x), gr, gu, h);
}

KernelConstants continuum_constants(const Kernel& kernel, std::size_t d, std::size_t k, double p,
                                    std::size_t mc_samples, std::uint64_t seed) {
  if (k == 1 && p == 2.0) {
    KernelConstants c;
    c.d = d;
    c.k = k;
    c.p = p;
    c.sigma_eta = sigma_eta(kernel, d);
    c.sigma_kp = c.sigma_eta;
    c.sigma_kp1 = c.sigma_eta;
    c.sigma_k = c.sigma_eta;
    c.ratio_kp_kp1 = {1.0, 0.0};
    return c;
  }
  return sigma_kp_constants(kernel, d, k, p, mc_samples, seed);
}

double quantile(std::vector<double> values, double q) {
  require(!values.empty(), "quantile: empty data");
  require(q >= 0.0 && q <= 1.0, "quantile: q must be in [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

namespace {

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool interior(std::span<const double> x, Domain domain, double margin) {
  if (domain == Domain::torus) return true;
  for (double v : x) {
    if (v <= margin || v >= 1.0 - margin) return false;
  }
  return true;
}

// |discrete - continuum| at the evaluated points of one sample.
std::vector<double> operator_errors(const ContinuumProblem& problem,
                                    const KernelConstants& constants,
                                    const ConsistencyConfig& config, const PointCloud& cloud,
                                    double eps, double margin) {
  const std::size_t n = cloud.size();
  const std::size_t d = problem.d;
  std::vector<Index> eval;
  std::vector<double> expected;
  std::vector<double> g(d);
  for (Index i = 0; i < n; ++i) {
    const auto x = cloud.point(i);
    if (!interior(x, problem.domain, margin)) continue;
    problem.grad_u(x, g);
    double gn = 0.0;
    for (double v : g) gn += v * v;
    gn = std::sqrt(gn);
    if (gn > 0.0 && gn < 1e-6) continue;
    const auto value = continuum_kp_operator(problem, constants, config.k, config.p, x);
    if (!value) continue;
    eval.push_back(i);
    expected.push_back(*value);
  }
  if (config.max_eval > 0 && eval.size() > config.max_eval) {
    std::vector<Index> keep_idx;
    std::vector<double> keep_val;
    const double stride = static_cast<double>(eval.size()) / static_cast<double>(config.max_eval);
    for (std::size_t m = 0; m < config.max_eval; ++m) {
      const auto at = static_cast<std::size_t>(static_cast<double>(m) * stride);
      keep_idx.push_back(eval[at]);
      keep_val.push_back(expected[at]);
    }
    eval.swap(keep_idx);
    expected.swap(keep_val);
  }
  if (eval.empty()) return {};

  std::vector<double> uu(n);
  for (Index i = 0; i < n; ++i) uu[i] = problem.u(cloud.point(i));
  const HypergraphOperator op(cloud, HypergraphParams{config.k, eps, config.kernel}, eval);
  const std::vector<double> discrete = op.apply(uu, config.p);
  std::vector<double> err(eval.size());
  for (std::size_t m = 0; m < eval.size(); ++m) err[m] = std::fabs(discrete[m] - expected[m]);
  return err;
}

}  // namespace

std::vector<ConsistencyRow> pointwise_consistency_experiment(const ConsistencyConfig& config) {
  const auto& problem = config.problem;
  require(config.k >= 1 && config.k <= 3, "consistency: k must be in 1..3");
  require(config.p == 2.0 || config.p >= 3.0, "consistency: p must be 2 or >= 3");
  require(!config.n_list.empty(), "consistency: n_list is empty");
  require(config.kernel.compact(), "consistency: kernel must be compactly supported");
  const std::size_t d = problem.d;
  const KernelConstants constants = continuum_constants(
      config.kernel, d, config.k, config.p, config.mc_samples, derive_seed(config.seed, 0xc0));

  require(config.repeats >= 1, "consistency: repeats must be >= 1");
  std::vector<ConsistencyRow> rows;
  for (const std::size_t n : config.n_list) {
    const auto start = std::chrono::steady_clock::now();
    const double eps = config.eps(n);
    require(eps > 0.0, "consistency: eps rule produced a non-positive value");
    const double margin = 2.0 * eps * config.kernel.support_radius();
    std::vector<double> err;
    for (std::size_t rep = 0; rep < config.repeats; ++rep) {
      const PointCloud cloud = problem.sample(n, derive_seed(config.seed, n, rep));
      const auto sample_err = operator_errors(problem, constants, config, cloud, eps, margin);
      err.insert(err.end(), sample_err.begin(), sample_err.end());
    }
    if (err.empty()) throw Error("consistency: no interior points at n = " + std::to_string(n));

    ConsistencyRow row;
    row.n = n;
    row.eps = eps;
    row.k = config.k;
    row.p = config.p;
    row.median_err = quantile(err, 0.5);
    row.p90_err = quantile(err, 0.9);
    row.evaluated = err.size();
    row.seconds = config.record_timing ? elapsed(start) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

SpikeReport spike_diagnostic(std::span<const double> u, const PointCloud& cloud,
                             std::span<const Index> labeled, double radius) {
  const std::size_t n = cloud.size();
  require(u.size() == n, "spike_diagnostic: u has the wrong length");
  std::vector<char> is_labeled(n, 0);
  for (Index i : labeled) {
    require(i < n, "spike_diagnostic: labeled index out of range");
    is_labeled[i] = 1;
  }
  std::vector<double> unlabeled;
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_labeled[i]) unlabeled.push_back(u[i]);
  }
  SpikeReport report;
  if (unlabeled.empty()) return report;
  report.median = quantile(unlabeled, 0.5);
  const double r2 = radius * radius;
  for (std::size_t i = 0; i < n; ++i) {
    if (is_labeled[i]) continue;
    bool near = false;
    for (Index l : labeled) {
      if (cloud.distance2(i, l) <= r2) {
        near = true;
        break;
      }
    }
    if (near) continue;
    ++report.outside_count;
    report.max_dev_outside = std::max(report.max_dev_outside, std::fabs(u[i] - report.median));
  }
  for (Index l : labeled) {
    if (std::fabs(u[l] - report.median) > 10.0 * report.max_dev_outside) ++report.spike_count;
  }
  return report;
}

PosednessResult posedness_contrast(const PosednessConfig& config) {
  require(config.n >= 2, "posedness_contrast: n must be >= 2");
  require(config.label_positions.size() == config.label_values.size() &&
              !config.label_positions.empty(),
          "posedness_contrast: label positions and values must match");
  const PointCloud cloud = sample_uniform(config.n, 1, Domain::cube, config.seed);
  std::vector<Index> labeled;
  for (double pos : config.label_positions) {
    Index best = 0;
    for (Index i = 1; i < cloud.size(); ++i) {
      if (std::fabs(cloud.coord(i, 0) - pos) < std::fabs(cloud.coord(best, 0) - pos)) best = i;
    }
    require(std::find(labeled.begin(), labeled.end(), best) == labeled.end(),
            "posedness_contrast: label positions map to the same point");
    labeled.push_back(best);
  }
  const double nn = static_cast<double>(config.n);
  const double eps_well = config.eps_well > 0.0 ? config.eps_well : std::pow(nn, -0.5);
  const double eps_ill = config.eps_ill > 0.0 ? config.eps_ill : std::pow(nn, -1.0 / 32.0);

  const HypergraphTerm term{1, 1.0};
  auto run = [&](double eps) {
    const DescentResult res =
        minimize_hypergraph_energy(cloud, std::span(&term, 1), config.p, eps, config.kernel,
                                   labeled, config.label_values, 1, config.descent);
    PosednessRun out;
    out.eps = eps;
    out.report = spike_diagnostic(res.values, cloud, labeled, config.radius);
    out.iterations = res.iterations;
    out.converged = res.converged;
    return out;
  };
  PosednessResult result;
  result.well = run(eps_well);
  result.ill = run(eps_ill);
  result.ratio = result.ill.report.max_dev_outside / result.well.report.max_dev_outside;
  return result;
}

double limiting_energy(const ContinuumProblem& problem, double sigma_k, std::size_t k, double p,
                       std::size_t grid) {
  const std::size_t d = problem.d;
  require(d >= 1 && d <= 6, "limiting_energy: d must be in 1..6");
  if (grid == 0) {
    grid = static_cast<std::size_t>(std::floor(std::pow(4.0e6, 1.0 / static_cast<double>(d))));
    grid = std::max<std::size_t>(grid, 8);
  }
  std::size_t total = 1;
  for (std::size_t a = 0; a < d; ++a) total *= grid;
  const double h = 1.0 / static_cast<double>(grid);
  std::vector<double> x(d), g(d);
  double sum = 0.0;
  for (std::size_t m = 0; m < total; ++m) {
    std::size_t rest = m;
    for (std::size_t a = 0; a < d; ++a) {
      x[a] = (static_cast<double>(rest % grid) + 0.5) * h;
      rest /= grid;
    }
    problem.grad_u(x, g);
    double g2 = 0.0;
    for (double v : g) g2 += v * v;
    sum += std::pow(g2, 0.5 * p) * std::pow(problem.rho(x), static_cast<double>(k) + 1.0);
  }
  return sigma_k * sum / static_cast<double>(total);
}

std::vector<EnergyRow> limiting_energy_check(const ConsistencyConfig& config) {
  const auto& problem = config.problem;
  require(config.kernel.compact(), "limiting_energy_check: kernel must be compactly supported");
  const KernelConstants constants = continuum_constants(
      config.kernel, problem.d, config.k, config.p, config.mc_samples,
      derive_seed(config.seed, 0xe0));
  const double limit = limiting_energy(problem, constants.sigma_k.value, config.k, config.p);
  std::vector<EnergyRow> rows;
  for (const std::size_t n : config.n_list) {
    const double eps = config.eps(n);
    double e = 0.0;
    for (std::size_t rep = 0; rep < config.repeats; ++rep) {
      const PointCloud cloud = problem.sample(n, derive_seed(config.seed, n, rep));
      std::vector<double> uu(n);
      for (Index i = 0; i < n; ++i) uu[i] = problem.u(cloud.point(i));
      e += hypergraph_energy(uu, cloud, HypergraphParams{config.k, eps, config.kernel}, config.p);
    }
    e /= static_cast<double>(config.repeats);
    rows.push_back({n, eps, e, limit, std::fabs(e - limit) / limit});
  }
  return rows;
}

std::string to_string(DensityKind kind) {
  return kind == DensityKind::uniform ? "uniform" : "sinusoidal";
}

std::string to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::sine: return "sine";
    case FieldKind::constant: return "constant";
    case FieldKind::linear: return "linear";
  }
  return "unknown";
}

DensityKind density_from_string(const std::string& s) {
  if (s == "uniform") return DensityKind::uniform;
  if (s == "sinusoidal" || s == "nonuniform") return DensityKind::sinusoidal;
  throw InvalidArgument("unknown density '" + s + "'");
}

FieldKind field_from_string(const std::string& s) {
  if (s == "sine") return FieldKind::sine;
  if (s == "constant") return FieldKind::constant;
  if (s == "linear") return FieldKind::linear;
  throw InvalidArgument("unknown field '" + s + "'");
}

}  // namespace hohl
