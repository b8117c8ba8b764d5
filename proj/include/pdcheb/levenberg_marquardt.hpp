#pragma once

// Levenberg-Marquardt for nonlinear least squares min ||r(x)||^2 with
// Marquardt scaling: each step solves
//
//   (J^T J + lambda diag(J^T J)) dx = -J^T r.

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pdcheb {

enum class JacobianMode { forward_difference, analytic };

std::string to_string(JacobianMode mode);
JacobianMode jacobian_mode_from_string(const std::string& name);

struct SolverOptions {
  int max_iterations = 200;
  double residual_target = 1e-8;
  double damping_init = 1e-3;
  double damping_up = 2.0;
  double damping_down = 1.0 / 3.0;
  JacobianMode jacobian_mode = JacobianMode::forward_difference;
  double step_tolerance = 1e-14;
};

/// Linearization of a residual at one point.
class Jacobian {
 public:
  virtual ~Jacobian() = default;

  virtual Eigen::Index rows() const = 0;
  virtual Eigen::Index cols() const = 0;
  virtual Eigen::VectorXd apply(const Eigen::VectorXd& v) const = 0;
  virtual Eigen::VectorXd apply_transpose(const Eigen::VectorXd& w) const = 0;
  virtual Eigen::VectorXd column_norms_squared() const = 0;

  /// Damped normal-equation step; std::nullopt when the system is singular.
  /// The default is Jacobi-preconditioned conjugate gradients.
  virtual std::optional<Eigen::VectorXd> solve_damped(const Eigen::VectorXd& residual, double lambda) const;
};

class DenseJacobian final : public Jacobian {
 public:
  explicit DenseJacobian(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {}

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  Eigen::Index rows() const override { return matrix_.rows(); }
  Eigen::Index cols() const override { return matrix_.cols(); }
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const override { return matrix_ * v; }
  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& w) const override {
    return matrix_.transpose() * w;
  }
  Eigen::VectorXd column_norms_squared() const override { return matrix_.colwise().squaredNorm(); }
  std::optional<Eigen::VectorXd> solve_damped(const Eigen::VectorXd& residual, double lambda) const override;

 private:
  Eigen::MatrixXd matrix_;
};

using ResidualFn = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& r)>;
using JacobianFn =
    std::function<std::unique_ptr<Jacobian>(const Eigen::VectorXd& x, const Eigen::VectorXd& r)>;

struct LeastSquaresProblem {
  Eigen::Index num_unknowns = 0;
  Eigen::Index num_residuals = 0;
  ResidualFn residual;  // must be safe to call concurrently
  JacobianFn jacobian;  // analytic linearization; may be empty
};

enum class LmStatus { converged, small_step, max_iterations, singular, non_finite };

std::string to_string(LmStatus status);

struct LmReport {
  Eigen::VectorXd x;
  Eigen::VectorXd residual;
  std::vector<double> residual_history;  // ||r||_inf at the start and every accepted step
  std::vector<double> merit_history;     // ||r||_2 at the same points; strictly decreasing
  int iterations = 0;
  bool converged = false;
  LmStatus status = LmStatus::max_iterations;
  std::string message;

  double final_inf() const { return residual_history.empty() ? 0.0 : residual_history.back(); }
  double final_l2() const { return merit_history.empty() ? 0.0 : merit_history.back(); }
};

/// Forward differences with step 1e-7 (1 + |x_i|), columns in parallel.
DenseJacobian forward_difference_jacobian(const LeastSquaresProblem& problem, const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& r);

LmReport levenberg_marquardt(const LeastSquaresProblem& problem, const Eigen::VectorXd& start,
                             const SolverOptions& options);

}  // namespace pdcheb
