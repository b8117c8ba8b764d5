#include "pdcheb/spacetime_solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pdcheb {
namespace {

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double alternating_sum(const Eigen::MatrixXd& coeffs, Eigen::Index row) {
  double sum = 0.0;
  for (Eigen::Index k = 0; k < coeffs.cols(); ++k) sum += (k % 2 == 0) ? coeffs(row, k) : -coeffs(row, k);
  return sum;
}

// Linearization in integrated coordinates, applied matrix-free from the
// per-slice Jacobians of L.
class IntegratedJacobian final : public Jacobian {
 public:
  IntegratedJacobian(const SpaceTimeSystem& system, const Eigen::MatrixXd& u)
      : system_(system), len_(system.grid().size()), slices_(system.n_max()) {
    const int n = system.n_max();
#pragma omp parallel for schedule(dynamic)
    for (int m = 1; m <= n; ++m) {
      const Eigen::VectorXd col = u.col(m);
      slices_[m - 1] = system.op().linearize({col.data(), static_cast<std::size_t>(col.size())});
    }
  }

  Eigen::Index rows() const override { return len_ * (len_ + 1); }
  Eigen::Index cols() const override { return len_ * len_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const override {
    const int n = system_.n_max();
    const Eigen::Map<const Eigen::MatrixXd> y(v.data(), len_, len_);
    const Eigen::MatrixXd du = y * system_.time_map().transpose();
    Eigen::VectorXd out(rows());
    Eigen::Map<Eigen::MatrixXd> pde(out.data(), len_, n);
    pde.noalias() = y.rightCols(n - 1) * system_.acceleration_basis().transpose();
#pragma omp parallel for schedule(static)
    for (int m = 1; m <= n; ++m) pde.col(m - 1) -= slices_[m - 1] * du.col(m);
    out.segment(len_ * n, len_) = y.col(0);
    out.segment(len_ * (n + 1), len_) = y.col(1);
    return out;
  }

  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& w) const override {
    const int n = system_.n_max();
    const Eigen::Map<const Eigen::MatrixXd> pde(w.data(), len_, n);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(len_, len_);
#pragma omp parallel for schedule(static)
    for (int m = 1; m <= n; ++m) g.col(m) = -slices_[m - 1].transpose() * pde.col(m - 1);
    Eigen::VectorXd out(cols());
    Eigen::Map<Eigen::MatrixXd> grad(out.data(), len_, len_);
    grad.noalias() = g * system_.time_map();
    grad.rightCols(n - 1).noalias() += pde * system_.acceleration_basis();
    grad.col(0) += w.segment(len_ * n, len_);
    grad.col(1) += w.segment(len_ * (n + 1), len_);
    return out;
  }

  Eigen::VectorXd column_norms_squared() const override {
    const int n = system_.n_max();
    const Eigen::MatrixXd phi = system_.time_map().bottomRows(n);  // rows m = 1..N
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, len_);
    e.rightCols(n - 1) = system_.acceleration_basis();

    Eigen::MatrixXd diag(len_, n), colsq(len_, n);
    for (int m = 0; m < n; ++m) {
      diag.col(m) = slices_[m].diagonal();
      colsq.col(m) = slices_[m].colwise().squaredNorm().transpose();
    }
    Eigen::VectorXd out(cols());
    Eigen::Map<Eigen::MatrixXd> norms(out.data(), len_, len_);
    norms = colsq * phi.cwiseAbs2() - 2.0 * diag * e.cwiseProduct(phi);
    norms.rowwise() += e.cwiseAbs2().colwise().sum();
    norms.col(0).array() += 1.0;
    norms.col(1).array() += 1.0;
    return out;
  }

 private:
  const SpaceTimeSystem& system_;
  Eigen::Index len_;
  std::vector<Eigen::MatrixXd> slices_;
};

Eigen::MatrixXd start_coordinates(const SpaceTimeSystem& system) {
  const Eigen::Index len = system.grid().size();
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(len, len);
  y.col(0) = system.u0();
  y.col(1) = system.v0();
  return y;
}

SolveReport run_solver(const SpaceTimeSystem& system, const Eigen::MatrixXd& y0, const SolverOptions& options,
                       const ToleranceSpec& tolerance) {
  const auto started = std::chrono::steady_clock::now();
  const LeastSquaresProblem lsq = system.least_squares();
  const Eigen::VectorXd start = Eigen::Map<const Eigen::VectorXd>(y0.data(), y0.size());
  LmReport lm = levenberg_marquardt(lsq, start, options);

  SolveReport report;
  const Eigen::Index len = system.grid().size();
  report.nodal.values = system.to_nodal(Eigen::Map<const Eigen::MatrixXd>(lm.x.data(), len, len));
  report.coeffs = forward_2d(report.nodal, system.grid(), system.grid());
  report.residual_history = std::move(lm.residual_history);
  report.merit_history = std::move(lm.merit_history);
  report.iterations = lm.iterations;
  report.converged = lm.converged;
  report.status = lm.status;
  report.message = std::move(lm.message);
  report.diagnostic_tolerance = dismodel_tolerance(system.n_max(), tolerance);
  if (report.nodal.values.allFinite()) {
    const ResidualVector nodal = system.residual(report.nodal);
    report.nodal_residual_inf = nodal.norm_inf();
    report.nodal_residual_l2 = nodal.norm_l2();
  } else {
    report.converged = false;
    report.nodal_residual_inf = report.nodal_residual_l2 = std::numeric_limits<double>::infinity();
  }
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace

Eigen::VectorXd ResidualVector::flatten() const {
  Eigen::VectorXd out(size());
  out.head(pde_rows.size()) = Eigen::Map<const Eigen::VectorXd>(pde_rows.data(), pde_rows.size());
  out.segment(pde_rows.size(), ic_rows.size()) = ic_rows;
  out.tail(velocity_rows.size()) = velocity_rows;
  return out;
}

double ResidualVector::norm_inf() const { return flatten().lpNorm<Eigen::Infinity>(); }
double ResidualVector::norm_l2() const { return flatten().norm(); }

double dismodel_tolerance(int n_max, const ToleranceSpec& spec) {
  if (n_max < 2) throw std::invalid_argument("dismodel_tolerance: n_max must be >= 2");
  if (!(spec.alpha > 0.0 && spec.alpha <= 1.0)) throw std::invalid_argument("dismodel_tolerance: alpha must lie in (0, 1]");
  const double h2 = std::pow(2.0 * n_max - 2.0, 2);
  return std::sqrt(static_cast<double>(n_max)) / h2 * std::pow(1.0 / h2, spec.alpha);
}

SpaceTimeSystem::SpaceTimeSystem(const ProblemSpec& problem) : grid_((problem.validate(), problem.n_max)) {
  const int n = problem.n_max;
  const int len = n + 1;
  op_ = std::make_shared<const PeridynamicOperator>(problem.kernel, grid_, problem.space_map.scale());
  u0_ = to_eigen(problem.u0.sample(grid_, problem.space_map));
  v0_ = to_eigen(problem.v0.sample(grid_, problem.space_map));
  rho_ = 1.0 / problem.time_map.scale();

  const std::span<const double> t = grid_.nodes();
  phi_.resize(len, len);
  for (int m = 0; m < len; ++m) {
    phi_(m, 0) = 1.0;
    phi_(m, 1) = (t[m] + 1.0) / rho_;
  }
  for (int k = 0; k + 2 < len; ++k) {
    Coeffs1D basis{std::vector<double>(k + 1, 0.0)};
    basis.values[k] = 1.0;
    const std::vector<double> twice = inverse_1d(integrate_coeffs(integrate_coeffs(basis)), t);
    for (int m = 0; m < len; ++m) phi_(m, k + 2) = twice[m] / (rho_ * rho_);
  }
  accel_.resize(n, n - 1);
  for (int m = 1; m <= n; ++m) {
    for (int k = 0; k < n - 1; ++k) accel_(m - 1, k) = eval_cheb(k, t[m]);
  }
  phi_lu_.compute(phi_);
}

ResidualVector SpaceTimeSystem::residual(const NodalField2D& unknowns) const {
  const Eigen::MatrixXd& u = unknowns.values;
  const int n = n_max();
  if (u.rows() != grid_.size() || u.cols() != grid_.size()) {
    throw std::invalid_argument("assemble_residual: field must be " + std::to_string(grid_.size()) + "x" +
                                std::to_string(grid_.size()));
  }
  if (!u.allFinite()) throw std::invalid_argument("assemble_residual: non-finite unknowns");

  const Coeffs2D coeffs = forward_2d(unknowns, grid_, grid_);
  const NodalField2D utt = inverse_2d(second_time_derivative(coeffs));
  const Eigen::MatrixXd lu = op_->apply_slices(u);

  ResidualVector out;
  out.pde_rows = rho_ * rho_ * utt.values.rightCols(n) - lu.rightCols(n);

  // time coefficients per spatial node; T_k(-1) = (-1)^k
  Eigen::MatrixXd ct = u;
  forward_rows(ct);
  Eigen::MatrixXd dct = ct;
  for (Eigen::Index row = 0; row < dct.rows(); ++row) {
    diff_coeffs_inplace(dct.data() + row, static_cast<int>(dct.cols()), static_cast<int>(dct.outerStride()));
  }
  out.ic_rows.resize(grid_.size());
  out.velocity_rows.resize(grid_.size());
  for (Eigen::Index row = 0; row < ct.rows(); ++row) {
    out.ic_rows[row] = alternating_sum(ct, row) - u0_[row];
    out.velocity_rows[row] = rho_ * alternating_sum(dct, row) - v0_[row];
  }
  return out;
}

Eigen::MatrixXd SpaceTimeSystem::to_nodal(const Eigen::MatrixXd& y) const { return y * phi_.transpose(); }

Eigen::MatrixXd SpaceTimeSystem::from_nodal(const Eigen::MatrixXd& u) const {
  return phi_lu_.solve(u.transpose()).transpose();
}

void SpaceTimeSystem::residual_integrated(const Eigen::VectorXd& yv, Eigen::VectorXd& r) const {
  const int n = n_max();
  const Eigen::Index len = grid_.size();
  const Eigen::Map<const Eigen::MatrixXd> y(yv.data(), len, len);
  const Eigen::MatrixXd u = y * phi_.transpose();
  const Eigen::MatrixXd lu = op_->apply_slices(u);
  r.resize(len * (len + 1));
  Eigen::Map<Eigen::MatrixXd> pde(r.data(), len, n);
  pde.noalias() = y.rightCols(n - 1) * accel_.transpose();
  pde -= lu.rightCols(n);
  r.segment(len * n, len) = y.col(0) - u0_;
  r.segment(len * (n + 1), len) = y.col(1) - v0_;
}

std::unique_ptr<Jacobian> SpaceTimeSystem::linearize_integrated(const Eigen::VectorXd& yv) const {
  const Eigen::Index len = grid_.size();
  const Eigen::Map<const Eigen::MatrixXd> y(yv.data(), len, len);
  return std::make_unique<IntegratedJacobian>(*this, y * phi_.transpose());
}

LeastSquaresProblem SpaceTimeSystem::least_squares() const {
  const Eigen::Index len = grid_.size();
  LeastSquaresProblem lsq;
  lsq.num_unknowns = len * len;
  lsq.num_residuals = len * (len + 1);
  lsq.residual = [this](const Eigen::VectorXd& y, Eigen::VectorXd& r) { residual_integrated(y, r); };
  lsq.jacobian = [this](const Eigen::VectorXd& y, const Eigen::VectorXd&) { return linearize_integrated(y); };
  return lsq;
}

ResidualVector assemble_residual(const NodalField2D& unknowns, const ProblemSpec& problem) {
  return SpaceTimeSystem(problem).residual(unknowns);
}

NodalField2D initial_guess(const ProblemSpec& problem) {
  problem.validate();
  const ChebGrid grid(problem.n_max);
  const Eigen::VectorXd u0 = to_eigen(problem.u0.sample(grid, problem.space_map));
  const Eigen::VectorXd v0 = to_eigen(problem.v0.sample(grid, problem.space_map));
  const double scale = problem.time_map.scale();
  NodalField2D out{Eigen::MatrixXd(grid.size(), grid.size())};
  for (int m = 0; m < grid.size(); ++m) out.values.col(m) = u0 + v0 * ((grid.node(m) + 1.0) * scale);
  return out;
}

SolveReport solve(const ProblemSpec& problem, const SolverOptions& options, const ToleranceSpec& tolerance) {
  const SpaceTimeSystem system(problem);
  return run_solver(system, start_coordinates(system), options, tolerance);
}

SolveReport solve_from(const SpaceTimeSystem& system, const NodalField2D& start, const SolverOptions& options,
                       const ToleranceSpec& tolerance) {
  if (start.values.rows() != system.grid().size() || start.values.cols() != system.grid().size()) {
    throw std::invalid_argument("solve_from: start field has the wrong shape");
  }
  return run_solver(system, system.from_nodal(start.values), options, tolerance);
}

}  // namespace pdcheb
