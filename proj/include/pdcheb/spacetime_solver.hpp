#pragma once

// Space-time Chebyshev collocation of u_tt = L(u) on [-1, 1]^2 (after the
// affine maps), solved as one nonlinear least-squares system.
//
// Nodal field layout: entry (n, m) is u(x_n, t_m), rows are spatial nodes and
// columns time nodes. Gauss-Lobatto order is descending, so t_0 = 1 is the final
// time and t_N = -1 carries the initial data.

#include "pdcheb/cheb_core.hpp"
#include "pdcheb/levenberg_marquardt.hpp"
#include "pdcheb/perid_operator.hpp"
#include "pdcheb/problem.hpp"

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <vector>

namespace pdcheb {

struct ResidualVector {
  Eigen::MatrixXd pde_rows;       // (N+1) x N; column m-1 holds time node m = 1..N
  Eigen::VectorXd ic_rows;        // N+1
  Eigen::VectorXd velocity_rows;  // N+1

  Eigen::Index size() const { return pde_rows.size() + ic_rows.size() + velocity_rows.size(); }
  /// PDE rows column-major, then IC rows, then velocity rows.
  Eigen::VectorXd flatten() const;
  double norm_inf() const;
  double norm_l2() const;
};

struct ToleranceSpec {
  double alpha = 1.0;  // modulus W(z) = z^alpha
};

/// sqrt(N) / (2N-2)^2 * W(1 / (2N-2)^2): the residual level of the existence
/// theory. A diagnostic only; never a stopping criterion.
double dismodel_tolerance(int n_max, const ToleranceSpec& spec);

/// Precomputed operators for one problem. The solver's unknowns are, per spatial
/// node, y = (u(t=-1), u_t(t=-1), w_0 .. w_{N-2}) where w are the Chebyshev
/// coefficients of the physical acceleration u_tt. The map y -> nodal u is linear
/// and bijective; the residual is the nodal one but free of the N^4 round-off
/// amplification of differentiating nodal data twice.
class SpaceTimeSystem {
 public:
  explicit SpaceTimeSystem(const ProblemSpec& problem);

  int n_max() const { return grid_.n_max(); }
  const ChebGrid& grid() const { return grid_; }
  const PeridynamicOperator& op() const { return *op_; }
  const Eigen::VectorXd& u0() const { return u0_; }
  const Eigen::VectorXd& v0() const { return v0_; }
  /// d(reference time)/d(physical time) = 2 / (T - t0).
  double time_factor() const { return rho_; }

  ResidualVector residual(const NodalField2D& unknowns) const;

  /// (N+1) x (N+1) integrated-coordinate matrix -> nodal field.
  Eigen::MatrixXd to_nodal(const Eigen::MatrixXd& y) const;
  Eigen::MatrixXd from_nodal(const Eigen::MatrixXd& u) const;

  /// Residual in integrated coordinates; same row order as ResidualVector::flatten.
  void residual_integrated(const Eigen::VectorXd& y, Eigen::VectorXd& r) const;
  std::unique_ptr<Jacobian> linearize_integrated(const Eigen::VectorXd& y) const;
  LeastSquaresProblem least_squares() const;

  /// Columns of the time map: value at t_m of each integrated coordinate.
  const Eigen::MatrixXd& time_map() const { return phi_; }
  /// Acceleration basis T_k(t_m), m = 1..N, k = 0..N-2.
  const Eigen::MatrixXd& acceleration_basis() const { return accel_; }

 private:
  ChebGrid grid_;
  std::shared_ptr<const PeridynamicOperator> op_;
  Eigen::VectorXd u0_;
  Eigen::VectorXd v0_;
  double rho_;
  Eigen::MatrixXd phi_;
  Eigen::MatrixXd accel_;
  Eigen::PartialPivLU<Eigen::MatrixXd> phi_lu_;
};

/// Residual of a nodal field, evaluated through its Chebyshev coefficients.
ResidualVector assemble_residual(const NodalField2D& unknowns, const ProblemSpec& problem);

/// u(x_n, t_m) = u0(x_n) + v0(x_n) (t_m + 1) / rho.
NodalField2D initial_guess(const ProblemSpec& problem);

struct SolveReport {
  Coeffs2D coeffs;
  NodalField2D nodal;
  std::vector<double> residual_history;  // solver residual, inf-norm per accepted step
  std::vector<double> merit_history;     // solver residual, 2-norm per accepted step
  int iterations = 0;
  bool converged = false;
  LmStatus status = LmStatus::max_iterations;
  std::string message;
  double wall_time = 0.0;
  double diagnostic_tolerance = 0.0;
  double nodal_residual_inf = 0.0;  // assemble_residual of the returned nodal field
  double nodal_residual_l2 = 0.0;

  double final_inf() const { return residual_history.empty() ? 0.0 : residual_history.back(); }
};

SolveReport solve(const ProblemSpec& problem, const SolverOptions& options,
                  const ToleranceSpec& tolerance = {});

/// Same pipeline from a caller-provided starting field.
SolveReport solve_from(const SpaceTimeSystem& system, const NodalField2D& start,
                       const SolverOptions& options, const ToleranceSpec& tolerance = {});

}  // namespace pdcheb
