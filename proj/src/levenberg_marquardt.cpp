#include "pdcheb/levenberg_marquardt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pdcheb {
namespace {

constexpr double kDiagonalFloor = 1e-300;
constexpr double kMaxDamping = 1e20;
constexpr int kMaxRejections = 60;

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

}  // namespace

std::string to_string(JacobianMode mode) {
  return mode == JacobianMode::analytic ? "analytic" : "forward_difference";
}

JacobianMode jacobian_mode_from_string(const std::string& name) {
  if (name == "analytic") return JacobianMode::analytic;
  if (name == "forward_difference") return JacobianMode::forward_difference;
  throw std::invalid_argument("unknown jacobian mode '" + name + "'");
}

std::string to_string(LmStatus status) {
  switch (status) {
    case LmStatus::converged: return "converged";
    case LmStatus::small_step: return "small_step";
    case LmStatus::max_iterations: return "max_iterations";
    case LmStatus::singular: return "singular";
    case LmStatus::non_finite: return "non_finite";
  }
  return "unknown";
}

std::optional<Eigen::VectorXd> Jacobian::solve_damped(const Eigen::VectorXd& residual, double lambda) const {
  const Eigen::VectorXd diag = column_norms_squared().cwiseMax(kDiagonalFloor);
  const Eigen::VectorXd damping = lambda * diag;
  const Eigen::VectorXd inv_precond = ((1.0 + lambda) * diag).cwiseInverse();
  const Eigen::VectorXd rhs = -apply_transpose(residual);
  const double rhs_norm = rhs.norm();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(cols());
  if (rhs_norm == 0.0) return x;

  auto normal_op = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return apply_transpose(apply(v)) + damping.cwiseProduct(v);
  };

  constexpr double kRelTol = 1e-13;
  const int max_iter = static_cast<int>(std::min<Eigen::Index>(4 * cols() + 20, 2000));
  Eigen::VectorXd r = rhs;
  Eigen::VectorXd z = inv_precond.cwiseProduct(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd ap = normal_op(p);
    const double pap = p.dot(ap);
    if (!(pap > 0.0) || !std::isfinite(pap)) return it == 0 ? std::nullopt : std::optional(x);
    const double alpha = rz / pap;
    x += alpha * p;
    r -= alpha * ap;
    if (r.norm() <= kRelTol * rhs_norm) break;
    z = inv_precond.cwiseProduct(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  if (!all_finite(x)) return std::nullopt;
  return x;
}

std::optional<Eigen::VectorXd> DenseJacobian::solve_damped(const Eigen::VectorXd& residual, double lambda) const {
  Eigen::MatrixXd normal = matrix_.transpose() * matrix_;
  const Eigen::VectorXd diag = normal.diagonal().cwiseMax(kDiagonalFloor);
  normal.diagonal() += lambda * diag;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
  if (ldlt.info() != Eigen::Success) return std::nullopt;
  Eigen::VectorXd step = ldlt.solve(-(matrix_.transpose() * residual));
  if (!all_finite(step)) return std::nullopt;
  return step;
}

DenseJacobian forward_difference_jacobian(const LeastSquaresProblem& problem, const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& r) {
  Eigen::MatrixXd jac(problem.num_residuals, problem.num_unknowns);
#pragma omp parallel
  {
    Eigen::VectorXd xp = x;
    Eigen::VectorXd rp(problem.num_residuals);
#pragma omp for schedule(static)
    for (Eigen::Index col = 0; col < problem.num_unknowns; ++col) {
      const double h = 1e-7 * (1.0 + std::abs(x[col]));
      xp[col] = x[col] + h;
      problem.residual(xp, rp);
      jac.col(col) = (rp - r) / h;
      xp[col] = x[col];
    }
  }
  return DenseJacobian(std::move(jac));
}

LmReport levenberg_marquardt(const LeastSquaresProblem& problem, const Eigen::VectorXd& start,
                             const SolverOptions& options) {
  if (!(options.damping_init > 0.0)) throw std::invalid_argument("levenberg_marquardt: damping_init must be > 0");
  if (!(options.residual_target >= 0.0)) throw std::invalid_argument("levenberg_marquardt: residual_target must be >= 0");
  if (start.size() != problem.num_unknowns) throw std::invalid_argument("levenberg_marquardt: start has wrong size");

  LmReport report;
  report.x = start;
  report.residual.resize(problem.num_residuals);
  problem.residual(report.x, report.residual);
  if (!all_finite(report.residual)) {
    report.status = LmStatus::non_finite;
    report.message = "non-finite residual at the starting point";
    return report;
  }
  double cost = report.residual.squaredNorm();
  report.residual_history.push_back(report.residual.lpNorm<Eigen::Infinity>());
  report.merit_history.push_back(std::sqrt(cost));

  const bool analytic = options.jacobian_mode == JacobianMode::analytic && problem.jacobian;
  double lambda = options.damping_init;
  Eigen::VectorXd trial_r(problem.num_residuals);

  for (;;) {
    if (report.residual_history.back() <= options.residual_target) {
      report.converged = true;
      report.status = LmStatus::converged;
      break;
    }
    if (report.iterations >= options.max_iterations) {
      report.status = LmStatus::max_iterations;
      break;
    }
    ++report.iterations;

    std::unique_ptr<Jacobian> jac =
        analytic ? problem.jacobian(report.x, report.residual)
                 : std::make_unique<DenseJacobian>(forward_difference_jacobian(problem, report.x, report.residual));

    bool accepted = false;
    bool stop = false;
    for (int attempt = 0; attempt < kMaxRejections && !accepted && !stop; ++attempt) {
      const std::optional<Eigen::VectorXd> step = jac->solve_damped(report.residual, lambda);
      if (!step) {
        lambda *= options.damping_up;
        if (lambda > kMaxDamping) {
          report.status = LmStatus::singular;
          report.message = "normal equations singular at maximal damping";
          stop = true;
        }
        continue;
      }
      const double step_norm = step->lpNorm<Eigen::Infinity>();
      if (step_norm < options.step_tolerance * (1.0 + report.x.lpNorm<Eigen::Infinity>())) {
        report.status = LmStatus::small_step;
        report.message = "step below tolerance";
        stop = true;
        break;
      }
      const Eigen::VectorXd trial_x = report.x + *step;
      problem.residual(trial_x, trial_r);
      if (!all_finite(trial_r)) {
        report.status = LmStatus::non_finite;
        report.message = "non-finite residual at a trial point";
        stop = true;
        break;
      }
      const double trial_cost = trial_r.squaredNorm();
      if (trial_cost < cost) {
        report.x = trial_x;
        report.residual = trial_r;
        cost = trial_cost;
        report.residual_history.push_back(trial_r.lpNorm<Eigen::Infinity>());
        report.merit_history.push_back(std::sqrt(cost));
        lambda = std::max(lambda * options.damping_down, 1e-300);
        accepted = true;
      } else {
        lambda *= options.damping_up;
      }
    }
    if (stop) break;
    if (!accepted) {
      report.status = LmStatus::small_step;
      report.message = "no decrease after repeated damping increases";
      break;
    }
  }

  if (report.message.empty()) {
    std::ostringstream msg;
    msg << to_string(report.status) << " after " << report.iterations << " iterations, |r|_inf = "
        << report.final_inf();
    report.message = msg.str();
  }
  report.converged = report.final_inf() <= options.residual_target;
  if (report.converged) report.status = LmStatus::converged;
  return report;
}

}  // namespace pdcheb
