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

#include "hohl/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hohl/hypergraph.hpp"

namespace hohl {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double sup_norm(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::fabs(v));
  return m;
}

}  // namespace

std::vector<double> LinearOperator::operator()(std::span<const double> x) const {
  require(x.size() == n, "LinearOperator: vector length mismatch");
  std::vector<double> y(n);
  apply(x, y);
  return y;
}

LinearOperator as_operator(std::shared_ptr<const Laplacian> laplacian) {
  require(laplacian != nullptr, "as_operator: null laplacian");
  LinearOperator op;
  op.n = laplacian->size();
  op.apply = [laplacian](std::span<const double> x, std::span<double> y) {
    laplacian->apply(x, y);
  };
  return op;
}

LinearOperator as_operator(std::shared_ptr<const Eigen::MatrixXd> matrix) {
  require(matrix != nullptr && matrix->rows() == matrix->cols(),
          "as_operator: matrix must be square");
  LinearOperator op;
  op.n = static_cast<std::size_t>(matrix->rows());
  op.dense = matrix;
  op.apply = [matrix](std::span<const double> x, std::span<double> y) {
    const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    Eigen::Map<Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
    yv.noalias() = (*matrix) * xv;
  };
  return op;
}

std::vector<double> apply_power(const Laplacian& laplacian, double p, std::span<const double> v) {
  require(p >= 1.0 && std::floor(p) == p,
          "apply_power: power must be a positive integer (fractional powers are unsupported)");
  require(v.size() == laplacian.size(), "apply_power: vector length mismatch");
  std::vector<double> x(v.begin(), v.end()), y(v.size());
  for (int s = 0; s < static_cast<int>(p); ++s) {
    laplacian.apply(x, y);
    std::swap(x, y);
  }
  return x;
}

std::string to_string(CgStatus status) {
  switch (status) {
    case CgStatus::converged: return "converged";
    case CgStatus::max_iter: return "max_iter";
    case CgStatus::breakdown: return "breakdown";
  }
  return "unknown";
}

std::vector<double> estimate_diagonal(const LinearOperator& a, std::size_t probe_limit,
                                      std::size_t probes, std::uint64_t seed) {
  const std::size_t n = a.n;
  std::vector<double> diag(n, 0.0);
  if (a.dense) {
    for (std::size_t i = 0; i < n; ++i) {
      diag[i] = (*a.dense)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
    }
    return diag;
  }
  std::vector<double> x(n, 0.0), y(n);
  if (n <= probe_limit) {
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = 1.0;
      a.apply(x, y);
      diag[i] = y[i];
      x[i] = 0.0;
    }
    return diag;
  }
  Rng rng(seed);
  require(probes >= 1, "estimate_diagonal: need at least one probe");
  for (std::size_t s = 0; s < probes; ++s) {
    for (double& v : x) v = (rng.next_u64() >> 63) ? 1.0 : -1.0;
    a.apply(x, y);
    for (std::size_t i = 0; i < n; ++i) diag[i] += x[i] * y[i];
  }
  for (double& v : diag) v /= static_cast<double>(probes);
  return diag;
}

CgResult cg_solve(const LinearOperator& a, std::span<const double> b, const CgOptions& options,
                  std::span<const double> x0) {
  const std::size_t n = a.n;
  require(b.size() == n, "cg_solve: right-hand side length mismatch");
  require(x0.empty() || x0.size() == n, "cg_solve: initial guess length mismatch");
  require(options.tol > 0.0, "cg_solve: tolerance must be positive");
  for (double v : b) require(std::isfinite(v), "cg_solve: right-hand side is not finite");

  CgResult result;
  result.x.assign(n, 0.0);
  if (!x0.empty()) std::copy(x0.begin(), x0.end(), result.x.begin());
  const double bnorm = norm2(b);
  if (bnorm == 0.0 && x0.empty()) return result;

  std::vector<double> inv_diag(n, 1.0);
  if (options.jacobi) {
    const std::vector<double> diag =
        options.diagonal.empty() ? estimate_diagonal(a) : options.diagonal;
    require(diag.size() == n, "cg_solve: preconditioner length mismatch");
    for (std::size_t i = 0; i < n; ++i) {
      if (diag[i] > 0.0 && std::isfinite(diag[i])) inv_diag[i] = 1.0 / diag[i];
    }
  }

  std::vector<double> r(n), z(n), p(n), q(n);
  a.apply(result.x, q);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
  const double target = options.tol * (bnorm > 0.0 ? bnorm : 1.0);
  double rnorm = norm2(r);
  const std::size_t max_iter = options.max_iter ? options.max_iter : 10 * std::max<std::size_t>(n, 1);
  for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = dot(r, z);
  std::size_t it = 0;
  while (rnorm > target) {
    if (it == max_iter) {
      result.status = CgStatus::max_iter;
      break;
    }
    a.apply(p, q);
    const double curvature = dot(p, q);
    if (!(curvature > 0.0)) {
      result.status = CgStatus::breakdown;
      break;
    }
    const double alpha = rz / curvature;
    for (std::size_t i = 0; i < n; ++i) {
      result.x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    ++it;
    rnorm = norm2(r);
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  result.iterations = it;
  result.relative_residual = rnorm / (bnorm > 0.0 ? bnorm : 1.0);
  return result;
}

ConstrainedSolution solve_constrained_quadratic(const LinearOperator& a,
                                                std::span<const Index> labeled,
                                                std::span<const double> values,
                                                std::size_t classes,
                                                const ConstrainedSolveOptions& options) {
  const std::size_t n = a.n;
  require(classes >= 1, "solve_constrained_quadratic: need at least one column");
  require(!labeled.empty(), "solve_constrained_quadratic: labeled set is empty");
  require(values.size() == labeled.size() * classes,
          "solve_constrained_quadratic: values must be |labeled| x C");
  std::vector<char> is_labeled(n, 0);
  for (Index i : labeled) {
    require(i < n, "solve_constrained_quadratic: labeled index out of range");
    require(!is_labeled[i], "solve_constrained_quadratic: duplicate labeled index");
    is_labeled[i] = 1;
  }

  ConstrainedSolution out;
  out.classes = classes;
  out.values.assign(n * classes, 0.0);
  for (std::size_t m = 0; m < labeled.size(); ++m) {
    for (std::size_t c = 0; c < classes; ++c) {
      out.values[labeled[m] * classes + c] = values[m * classes + c];
    }
  }
  std::vector<Index> free;
  free.reserve(n - labeled.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_labeled[i]) free.push_back(i);
  }
  if (free.empty()) return out;
  const std::size_t nf = free.size();

  bool direct = options.kind == SolverKind::dense ||
                (options.kind == SolverKind::automatic && a.dense && n <= options.dense_limit);
  if (direct) {
    std::shared_ptr<const Eigen::MatrixXd> dense = a.dense;
    if (!dense) {
      auto built = std::make_shared<Eigen::MatrixXd>(n, n);
      std::vector<double> e(n, 0.0), col(n);
      for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        a.apply(e, col);
        e[j] = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          (*built)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
        }
      }
      dense = built;
    }
    const auto fidx = Eigen::Map<const Eigen::Matrix<Index, Eigen::Dynamic, 1>>(free.data(),
                                                                                 static_cast<Eigen::Index>(nf));
    const auto lidx = Eigen::Map<const Eigen::Matrix<Index, Eigen::Dynamic, 1>>(
        labeled.data(), static_cast<Eigen::Index>(labeled.size()));
    const Eigen::MatrixXd a_ff = (*dense)(fidx, fidx);
    const Eigen::MatrixXd a_fl = (*dense)(fidx, lidx);
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> y(
        values.data(), static_cast<Eigen::Index>(labeled.size()),
        static_cast<Eigen::Index>(classes));
    const Eigen::MatrixXd rhs = -(a_fl * y);
    const Eigen::LLT<Eigen::MatrixXd> llt(a_ff);
    if (llt.info() != Eigen::Success) {
      throw SolverError("dense solve: reduced operator is not positive definite");
    }
    const Eigen::MatrixXd u = llt.solve(rhs);
    for (Eigen::Index c = 0; c < rhs.cols(); ++c) {
      const double rn = rhs.col(c).norm();
      const double res = (a_ff * u.col(c) - rhs.col(c)).norm() / (rn > 0.0 ? rn : 1.0);
      out.max_residual = std::max(out.max_residual, res);
    }
    if (!u.allFinite()) throw SolverError("dense solve: non-finite solution");
    for (std::size_t m = 0; m < nf; ++m) {
      for (std::size_t c = 0; c < classes; ++c) {
        out.values[free[m] * classes + c] =
            u(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(c));
      }
    }
    out.direct = true;
    return out;
  }

  LinearOperator reduced;
  reduced.n = nf;
  reduced.apply = [&a, &free, n](std::span<const double> x, std::span<double> y) {
    std::vector<double> full(n, 0.0), ax(n);
    for (std::size_t m = 0; m < free.size(); ++m) full[free[m]] = x[m];
    a.apply(full, ax);
    for (std::size_t m = 0; m < free.size(); ++m) y[m] = ax[free[m]];
  };
  const std::vector<double> diag = estimate_diagonal(a);
  CgOptions cg;
  cg.tol = options.tol;
  cg.max_iter = options.max_iter;
  cg.diagonal.resize(nf);
  for (std::size_t m = 0; m < nf; ++m) cg.diagonal[m] = diag[free[m]];

  std::vector<double> lifted(n), ay(n), rhs(nf);
  for (std::size_t c = 0; c < classes; ++c) {
    std::fill(lifted.begin(), lifted.end(), 0.0);
    for (std::size_t m = 0; m < labeled.size(); ++m) lifted[labeled[m]] = values[m * classes + c];
    a.apply(lifted, ay);
    for (std::size_t m = 0; m < nf; ++m) rhs[m] = -ay[free[m]];
    const CgResult res = cg_solve(reduced, rhs, cg);
    if (res.status != CgStatus::converged) {
      throw SolverError("constrained solve: CG " + to_string(res.status) + " after " +
                        std::to_string(res.iterations) + " iterations (relative residual " +
                        std::to_string(res.relative_residual) + ")");
    }
    out.iterations += res.iterations;
    out.max_residual = std::max(out.max_residual, res.relative_residual);
    for (std::size_t m = 0; m < nf; ++m) out.values[free[m] * classes + c] = res.x[m];
  }
  return out;
}

SparseSymMatrix combined_energy_weights(const PointCloud& cloud,
                                        std::span<const HypergraphTerm> terms, double p,
                                        double eps, const Kernel& kernel) {
  require(!terms.empty(), "combined_energy_weights: no terms");
  const std::size_t n = cloud.size();
  std::vector<SparseRow> rows(n);
  for (const auto& term : terms) {
    require(term.lambda > 0.0, "combined_energy_weights: lambda must be positive");
    const HypergraphOperator op(cloud, HypergraphParams{term.k, eps, kernel});
    const double scale = term.lambda * op.energy_scale(p);
    const auto& m = op.pair_weights();
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& [j, w] : m[i]) {
        if (j != i) rows[i].emplace_back(j, scale * w);
      }
    }
  }
  return SparseSymMatrix::from_rows(std::move(rows));
}

namespace {

inline double abs_pow(double t, double e) {
  if (e == 2.0) return t * t;
  return std::pow(std::fabs(t), e);
}

}  // namespace

double pairwise_energy(const SparseSymMatrix& g, std::span<const double> u, double p) {
  require(u.size() == g.size(), "pairwise_energy: length mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto cols = g.row_cols(i);
    const auto vals = g.row_vals(i);
    double s = 0.0;
    for (std::size_t m = 0; m < cols.size(); ++m) s += vals[m] * abs_pow(u[cols[m]] - u[i], p);
    total += s;
  }
  return total;
}

std::vector<double> pairwise_gradient(const SparseSymMatrix& g, std::span<const double> u,
                                      double p) {
  require(u.size() == g.size(), "pairwise_gradient: length mismatch");
  std::vector<double> grad(g.size(), 0.0);
  parallel_for(0, g.size(), [&](std::size_t i) {
    const auto cols = g.row_cols(i);
    const auto vals = g.row_vals(i);
    double s = 0.0;
    for (std::size_t m = 0; m < cols.size(); ++m) {
      const double t = u[i] - u[cols[m]];
      if (t != 0.0) s += vals[m] * std::copysign(abs_pow(t, p - 1.0), t);
    }
    grad[i] = 2.0 * p * s;
  });
  return grad;
}

namespace {

struct ColumnResult {
  std::size_t iterations = 0;
  double initial_grad = 0.0;
  double final_grad = 0.0;
  bool converged = true;
  std::vector<double> energies;
};

/// Newton direction: solves H_ff d = -g_f with H the Hessian Laplacian,
/// weights 2p(p-1) G_ij (|u_i - u_j|^(p-2) + tau).
bool newton_direction(const SparseSymMatrix& g, std::span<const double> u, double p,
                      const std::vector<Index>& free, const std::vector<Index>& slot,
                      std::span<const double> grad_free, std::vector<double>& dir) {
  const std::size_t n = g.size();
  const std::size_t nf = free.size();
  double max_pow = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto j : g.row_cols(i)) max_pow = std::max(max_pow, abs_pow(u[i] - u[j], p - 2.0));
  }
  const double tau = max_pow > 0.0 ? 1e-10 * max_pow : 1.0;
  const double c = 2.0 * p * (p - 1.0);

  std::vector<SparseRow> rows(nf);
  std::vector<double> diag(nf, 0.0);
  parallel_for(0, nf, [&](std::size_t m) {
    const Index i = free[m];
    const auto cols = g.row_cols(i);
    const auto vals = g.row_vals(i);
    auto& row = rows[m];
    row.reserve(cols.size() + 1);
    double deg = 0.0;
    for (std::size_t t = 0; t < cols.size(); ++t) {
      const Index j = cols[t];
      const double h = c * vals[t] * (abs_pow(u[i] - u[j], p - 2.0) + tau);
      deg += h;
      if (slot[j] != n) row.emplace_back(slot[j], -h);
    }
    row.emplace_back(m, deg);
    diag[m] = deg;
  });
  const SparseSymMatrix h = SparseSymMatrix::from_rows(std::move(rows));

  LinearOperator op;
  op.n = nf;
  op.apply = [&h](std::span<const double> x, std::span<double> y) { h.multiply(x, y); };
  CgOptions cg;
  cg.tol = 1e-8;
  cg.max_iter = std::min<std::size_t>(10 * nf, 2000);
  cg.diagonal = std::move(diag);
  std::vector<double> rhs(grad_free.begin(), grad_free.end());
  for (double& v : rhs) v = -v;
  const CgResult res = cg_solve(op, rhs, cg);
  if (res.status == CgStatus::breakdown) return false;
  for (double v : res.x) {
    if (!std::isfinite(v)) return false;
  }
  dir = res.x;
  return dot(dir, grad_free) < 0.0;
}

// gradient size when every edge at a free vertex spans the label range; a
// remaining gradient far below it is roundoff
double gradient_scale(const SparseSymMatrix& g, double p, double range,
                      const std::vector<Index>& free) {
  double degree = 0.0;
  for (Index i : free) {
    double s = 0.0;
    for (double w : g.row_vals(i)) s += w;
    degree = std::max(degree, s);
  }
  return 2.0 * p * degree * std::pow(range > 0.0 ? range : 1.0, p - 1.0);
}

ColumnResult descend_column(const SparseSymMatrix& g, std::vector<double>& u, double p,
                            const std::vector<Index>& free, const DescentOptions& options,
                            bool record) {
  const std::size_t n = g.size();
  const std::size_t nf = free.size();
  std::vector<Index> slot(n, n);
  for (std::size_t m = 0; m < nf; ++m) slot[free[m]] = m;

  ColumnResult out;
  if (nf == 0) return out;
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    if (slot[i] != n) continue;
    lo = std::min(lo, u[i]);
    hi = std::max(hi, u[i]);
  }
  const double roundoff = 1e-13 * gradient_scale(g, p, hi - lo, free);
  std::vector<double> grad_free(nf), dir(nf), trial(n);
  double energy = pairwise_energy(g, u, p);
  if (record) out.energies.push_back(energy);
  double step_hint = 0.0;

  for (;;) {
    const std::vector<double> grad = pairwise_gradient(g, u, p);
    for (std::size_t m = 0; m < nf; ++m) grad_free[m] = grad[free[m]];
    const double gsup = sup_norm(grad_free);
    if (out.iterations == 0) out.initial_grad = gsup;
    out.final_grad = gsup;
    if (gsup <= options.grad_tol * out.initial_grad || gsup <= roundoff) {
      break;
    }
    if (out.iterations == options.max_iter) {
      out.converged = false;
      break;
    }

    bool newton = options.method == DescentMethod::newton &&
                  newton_direction(g, u, p, free, slot, grad_free, dir);
    double t = 1.0;
    if (!newton) {
      dir = grad_free;
      for (double& v : dir) v = -v;
      // first trial moves the largest coordinate by 1e-3; later trials
      // start from twice the last accepted step
      if (step_hint == 0.0) step_hint = 1e-3 / sup_norm(dir);
      t = step_hint * 2.0;
    }
    const double slope = dot(grad_free, dir);
    double next_energy = energy;
    bool accepted = false;
    for (int halving = 0; halving < 80; ++halving) {
      trial = u;
      for (std::size_t m = 0; m < nf; ++m) trial[free[m]] += t * dir[m];
      next_energy = pairwise_energy(g, trial, p);
      if (next_energy <= energy + options.armijo * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    ++out.iterations;
    if (!accepted) {
      out.converged = false;
      break;
    }
    if (!newton) step_hint = t;
    u.swap(trial);
    energy = next_energy;
    if (record) out.energies.push_back(energy);
  }
  return out;
}

}  // namespace

DescentResult minimize_hypergraph_energy(const PointCloud& cloud,
                                         std::span<const HypergraphTerm> terms, double p,
                                         double eps, const Kernel& kernel,
                                         std::span<const Index> labeled,
                                         std::span<const double> values, std::size_t classes,
                                         const DescentOptions& options) {
  require(p == 2.0 || p >= 3.0, "minimize_hypergraph_energy: p must be 2 or >= 3");
  require(kernel.compact(), "minimize_hypergraph_energy: kernel must be compactly supported");
  const std::size_t n = cloud.size();
  const SparseSymMatrix g = combined_energy_weights(cloud, terms, p, eps, kernel);

  auto lap = std::make_shared<const Laplacian>(laplacian(g));
  ConstrainedSolveOptions lin;
  lin.kind = SolverKind::cg;
  lin.tol = 1e-10;
  const ConstrainedSolution quad =
      solve_constrained_quadratic(as_operator(lap), labeled, values, classes, lin);

  DescentResult result;
  result.classes = classes;
  result.values = quad.values;
  if (p == 2.0) return result;

  std::vector<char> is_labeled(n, 0);
  for (Index i : labeled) is_labeled[i] = 1;
  std::vector<Index> free;
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_labeled[i]) free.push_back(i);
  }

  std::vector<ColumnResult> columns(classes);
  std::vector<std::vector<double>> cols(classes, std::vector<double>(n));
  for (std::size_t c = 0; c < classes; ++c) {
    for (std::size_t i = 0; i < n; ++i) cols[c][i] = quad.values[i * classes + c];
  }
  for (std::size_t c = 0; c < classes; ++c) {
    columns[c] = descend_column(g, cols[c], p, free, options, options.record_energy && c == 0);
  }
  for (std::size_t c = 0; c < classes; ++c) {
    for (std::size_t i = 0; i < n; ++i) result.values[i * classes + c] = cols[c][i];
    result.iterations = std::max(result.iterations, columns[c].iterations);
    result.initial_grad = std::max(result.initial_grad, columns[c].initial_grad);
    result.final_grad = std::max(result.final_grad, columns[c].final_grad);
    result.converged = result.converged && columns[c].converged;
  }
  result.energy_history = std::move(columns[0].energies);
  return result;
}

}  // namespace hohl
