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

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hohl/common.hpp"
#include "hohl/geometry.hpp"
#include "hohl/graph.hpp"
#include "hohl/kernels.hpp"

namespace hohl {

/// A square linear map given by its action. `dense`, when set, is the same
/// operator as an explicit matrix and enables direct solves.
struct LinearOperator {
  using Apply = std::function<void(std::span<const double>, std::span<double>)>;

  std::size_t n = 0;
  Apply apply;
  bool symmetric = true;
  bool psd = true;
  std::shared_ptr<const Eigen::MatrixXd> dense;

  std::vector<double> operator()(std::span<const double> x) const;
};

LinearOperator as_operator(std::shared_ptr<const Laplacian> laplacian);
LinearOperator as_operator(std::shared_ptr<const Eigen::MatrixXd> matrix);

/// L^p v by p successive products. p must be a positive integer.
std::vector<double> apply_power(const Laplacian& laplacian, double p, std::span<const double> v);

enum class CgStatus { converged, max_iter, breakdown };
std::string to_string(CgStatus status);

struct CgOptions {
  double tol = 1e-8;           // relative residual
  std::size_t max_iter = 0;    // 0 means 10 n
  bool jacobi = true;
  /// Preconditioner diagonal; estimated from the operator when empty.
  std::vector<double> diagonal;
};

struct CgResult {
  std::vector<double> x;
  CgStatus status = CgStatus::converged;
  std::size_t iterations = 0;
  double relative_residual = 0.0;
};

/// Preconditioned conjugate gradients. Negative or zero curvature p^T A p
/// stops with `breakdown`.
CgResult cg_solve(const LinearOperator& a, std::span<const double> b, const CgOptions& options = {},
                  std::span<const double> x0 = {});

/// diag(A): exact by probing e_i when n <= probe_limit, otherwise a
/// Hutchinson estimate v .* (A v) averaged over Rademacher probes.
std::vector<double> estimate_diagonal(const LinearOperator& a, std::size_t probe_limit = 2000,
                                      std::size_t probes = 64, std::uint64_t seed = 0);

enum class SolverKind { automatic, dense, cg };

struct ConstrainedSolveOptions {
  SolverKind kind = SolverKind::automatic;
  double tol = 1e-8;
  std::size_t max_iter = 0;
  /// Automatic mode solves directly up to this size when a dense matrix is
  /// attached to the operator.
  std::size_t dense_limit = 4000;
};

struct ConstrainedSolution {
  /// n x C, row-major.
  std::vector<double> values;
  std::size_t classes = 0;
  std::size_t iterations = 0;     // summed CG iterations (0 for direct)
  double max_residual = 0.0;      // worst reduced-system relative residual
  bool direct = false;
};

/// Minimizes v^T A v per column with v fixed to `values` (|labeled| x C,
/// row-major) on the labeled rows: solves A_ff u_f = -A_fl y_l. Labeled
/// rows of the output are copied from the input.
ConstrainedSolution solve_constrained_quadratic(const LinearOperator& a,
                                                std::span<const Index> labeled,
                                                std::span<const double> values,
                                                std::size_t classes,
                                                const ConstrainedSolveOptions& options = {});

/// One order of a hypergraph objective: lambda * E^(k,p).
struct HypergraphTerm {
  std::size_t k = 1;
  double lambda = 1.0;
};

enum class DescentMethod { newton, gradient };

struct DescentOptions {
  DescentMethod method = DescentMethod::newton;
  double grad_tol = 1e-6;         // relative to the initial gradient sup-norm
  std::size_t max_iter = 10000;
  double armijo = 1e-4;
  bool record_energy = false;
};

struct DescentResult {
  std::vector<double> values;     // n x C, row-major
  std::size_t classes = 0;
  std::size_t iterations = 0;     // maximum over columns
  double initial_grad = 0.0;      // sup-norms on free vertices, worst column
  double final_grad = 0.0;
  bool converged = true;
  /// Energies per iteration of the first column (record_energy only).
  std::vector<double> energy_history;
};

/// Constrained minimizer of sum_k lambda_k E^(k,p) with v fixed on the
/// labeled rows. p = 2 is solved linearly; p >= 3 starts from the p = 2
/// solution and descends on the free coordinates with Armijo backtracking.
DescentResult minimize_hypergraph_energy(const PointCloud& cloud,
                                         std::span<const HypergraphTerm> terms, double p,
                                         double eps, const Kernel& kernel,
                                         std::span<const Index> labeled,
                                         std::span<const double> values, std::size_t classes,
                                         const DescentOptions& options = {});

/// The combined weights G = sum_k lambda_k M_k / (n^(k+1) eps^(p+kd)), so
/// that sum_k lambda_k E^(k,p)(u) = sum_ij G_ij |u_j - u_i|^p.
SparseSymMatrix combined_energy_weights(const PointCloud& cloud,
                                        std::span<const HypergraphTerm> terms, double p,
                                        double eps, const Kernel& kernel);

double pairwise_energy(const SparseSymMatrix& g, std::span<const double> u, double p);
/// Gradient of pairwise_energy: 2p sum_j G_ij |u_i - u_j|^(p-2) (u_i - u_j).
std::vector<double> pairwise_gradient(const SparseSymMatrix& g, std::span<const double> u,
                                      double p);

}  // namespace hohl
