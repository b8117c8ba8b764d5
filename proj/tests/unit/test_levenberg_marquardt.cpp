#include "oracles/oracles.hpp"
#include "pdcheb/levenberg_marquardt.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace pdcheb;

namespace {

// Same matrix as DenseJacobian but keeps the default (conjugate gradient) step.
class IterativeJacobian final : public Jacobian {
 public:
  explicit IterativeJacobian(Eigen::MatrixXd m) : m_(std::move(m)) {}
  Eigen::Index rows() const override { return m_.rows(); }
  Eigen::Index cols() const override { return m_.cols(); }
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const override { return m_ * v; }
  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& w) const override { return m_.transpose() * w; }
  Eigen::VectorXd column_norms_squared() const override { return m_.colwise().squaredNorm(); }

 private:
  Eigen::MatrixXd m_;
};

LeastSquaresProblem rosenbrock() {
  LeastSquaresProblem p;
  p.num_unknowns = 2;
  p.num_residuals = 2;
  p.residual = [](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
    r.resize(2);
    r << 10.0 * (x[1] - x[0] * x[0]), 1.0 - x[0];
  };
  return p;
}

}  // namespace

TEST_SUITE("levenberg_marquardt") {
  TEST_CASE("scalar linear residual") {
    LeastSquaresProblem p;
    p.num_unknowns = 1;
    p.num_residuals = 1;
    p.residual = [](const Eigen::VectorXd& x, Eigen::VectorXd& r) { r.resize(1); r[0] = x[0] - 3.0; };
    SolverOptions options;
    options.residual_target = 1e-12;
    const auto report = levenberg_marquardt(p, Eigen::VectorXd::Zero(1), options);
    CHECK(report.converged);
    CHECK(report.status == LmStatus::converged);
    CHECK(std::abs(report.x[0] - 3.0) <= 1e-12);
  }

  TEST_CASE("Rosenbrock in both Jacobian modes") {
    auto p = rosenbrock();
    p.jacobian = [](const Eigen::VectorXd& x, const Eigen::VectorXd&) {
      Eigen::MatrixXd j(2, 2);
      j << -20.0 * x[0], 10.0, -1.0, 0.0;
      return std::make_unique<DenseJacobian>(j);
    };
    Eigen::VectorXd start(2);
    start << -1.2, 1.0;
    for (auto mode : {JacobianMode::forward_difference, JacobianMode::analytic}) {
      SolverOptions options;
      options.jacobian_mode = mode;
      options.residual_target = 1e-12;
      const auto report = levenberg_marquardt(p, start, options);
      CHECK(report.converged);
      CHECK(std::abs(report.x[0] - 1.0) <= 1e-8);
      CHECK(std::abs(report.x[1] - 1.0) <= 1e-8);
      CHECK(report.iterations <= 200);
    }
  }

  TEST_CASE("forward differences match the analytic Jacobian") {
    const auto p = rosenbrock();
    Eigen::VectorXd x(2), r(2);
    x << 0.3, -0.7;
    p.residual(x, r);
    const auto fd = forward_difference_jacobian(p, x, r);
    Eigen::MatrixXd exact(2, 2);
    exact << -20.0 * x[0], 10.0, -1.0, 0.0;
    CHECK((fd.matrix() - exact).cwiseAbs().maxCoeff() < 1e-5);
  }

  TEST_CASE("property: dense and conjugate-gradient damped steps agree") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 25; ++trial) {
      const int cols = 3 + trial % 7;
      const Eigen::MatrixXd m = oracle::random_matrix(cols + 4, cols, rng);
      const Eigen::VectorXd r = oracle::random_matrix(cols + 4, 1, rng);
      for (double lambda : {1e-3, 1.0, 50.0}) {
        const auto dense = DenseJacobian(m).solve_damped(r, lambda);
        const auto iterative = IterativeJacobian(m).solve_damped(r, lambda);
        REQUIRE(dense.has_value());
        REQUIRE(iterative.has_value());
        // independent: normal equations with Marquardt scaling
        const Eigen::MatrixXd jtj = m.transpose() * m;
        Eigen::MatrixXd a = jtj;
        a.diagonal() += lambda * jtj.diagonal();
        const Eigen::VectorXd expected = a.fullPivLu().solve(-(m.transpose() * r));
        const double scale = 1.0 + expected.cwiseAbs().maxCoeff();
        CHECK((*dense - expected).cwiseAbs().maxCoeff() < 1e-9 * scale);
        CHECK((*iterative - expected).cwiseAbs().maxCoeff() < 1e-8 * scale);
      }
    }
  }

  TEST_CASE("property: accepted steps decrease the 2-norm merit") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
      auto p = rosenbrock();
      Eigen::VectorXd start(2);
      start << dist(rng), dist(rng);
      const auto report = levenberg_marquardt(p, start, SolverOptions{});
      CHECK(report.residual_history.size() == report.merit_history.size());
      for (std::size_t i = 1; i < report.merit_history.size(); ++i) {
        CHECK(report.merit_history[i] < report.merit_history[i - 1]);
      }
      CHECK(report.merit_history.size() <= static_cast<std::size_t>(report.iterations) + 1);
    }
  }

  TEST_CASE("non-finite residuals abort") {
    LeastSquaresProblem p;
    p.num_unknowns = 1;
    p.num_residuals = 1;
    p.residual = [](const Eigen::VectorXd&, Eigen::VectorXd& r) {
      r.resize(1);
      r[0] = std::numeric_limits<double>::quiet_NaN();
    };
    const auto report = levenberg_marquardt(p, Eigen::VectorXd::Zero(1), SolverOptions{});
    CHECK_FALSE(report.converged);
    CHECK(report.status == LmStatus::non_finite);

    // finite at the start, infinite one step away
    p.residual = [](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
      r.resize(1);
      r[0] = x[0] == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    };
    p.jacobian = [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
      return std::make_unique<DenseJacobian>(Eigen::MatrixXd::Ones(1, 1));
    };
    SolverOptions analytic;
    analytic.jacobian_mode = JacobianMode::analytic;
    CHECK(levenberg_marquardt(p, Eigen::VectorXd::Zero(1), analytic).status == LmStatus::non_finite);
  }

  TEST_CASE("invalid options and sizes") {
    auto p = rosenbrock();
    SolverOptions bad;
    bad.damping_init = 0.0;
    CHECK_THROWS_AS(levenberg_marquardt(p, Eigen::VectorXd::Zero(2), bad), std::invalid_argument);
    bad = SolverOptions{};
    bad.residual_target = -1.0;
    CHECK_THROWS_AS(levenberg_marquardt(p, Eigen::VectorXd::Zero(2), bad), std::invalid_argument);
    CHECK_THROWS_AS(levenberg_marquardt(p, Eigen::VectorXd::Zero(3), SolverOptions{}), std::invalid_argument);
  }

  TEST_CASE("iteration cap") {
    SolverOptions options;
    options.max_iterations = 2;
    options.residual_target = 0.0;
    Eigen::VectorXd start(2);
    start << -1.2, 1.0;
    const auto report = levenberg_marquardt(rosenbrock(), start, options);
    CHECK_FALSE(report.converged);
    CHECK(report.iterations <= 2);
  }

  TEST_CASE("mode names round-trip") {
    for (auto m : {JacobianMode::forward_difference, JacobianMode::analytic}) {
      CHECK(jacobian_mode_from_string(to_string(m)) == m);
    }
    CHECK_THROWS_AS(jacobian_mode_from_string("secant"), std::invalid_argument);
  }
}
