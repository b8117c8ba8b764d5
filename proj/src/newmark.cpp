#include "pdcheb/newmark.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <string>

namespace pdcheb {
namespace {

void check_coefficients(double dt, const NewmarkOptions& options) {
  if (!(dt > 0.0)) throw std::invalid_argument("newmark_step: dt must be positive");
  if (!(options.beta >= 0.0 && options.beta <= 0.5)) throw std::invalid_argument("newmark_step: beta must lie in [0, 1/2]");
  if (!(options.gamma >= 0.0 && options.gamma <= 1.0)) throw std::invalid_argument("newmark_step: gamma must lie in [0, 1]");
}

[[noreturn]] void closure_failed(int sweeps, double residual) {
  std::ostringstream msg;
  msg << "newmark_step: acceleration did not settle after " << sweeps << " sweeps, last update " << residual;
  throw NewmarkClosureError(msg.str(), residual);
}

struct OperatorForce {
  std::shared_ptr<const PeridynamicOperator> op;

  Eigen::VectorXd operator()(const Eigen::VectorXd& u) const {
    const std::vector<double> out = op->apply({u.data(), static_cast<std::size_t>(u.size())});
    return Eigen::Map<const Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
  }
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& u) const {
    return op->linearize({u.data(), static_cast<std::size_t>(u.size())});
  }
};

OperatorForce make_force(const ProblemSpec& problem) {
  problem.validate();
  return {std::make_shared<const PeridynamicOperator>(problem.kernel, ChebGrid(problem.n_max),
                                                      problem.space_map.scale())};
}

}  // namespace

MarchState newmark_step(const MarchState& state, double dt, const ForceFn& force, const NewmarkOptions& options,
                        const ForceJacobianFn& jacobian) {
  check_coefficients(dt, options);
  const double b = options.beta, g = options.gamma;
  const Eigen::VectorXd predictor =
      state.displacement + dt * state.velocity + dt * dt * (0.5 - b) * state.acceleration;

  Eigen::VectorXd accel = state.acceleration;
  double update = std::numeric_limits<double>::infinity();
  int sweep = 0;
  if (options.closure == NewmarkClosure::newton && !jacobian) {
    throw std::invalid_argument("newmark_step: Newton closure needs a force Jacobian");
  }
  for (; sweep < options.max_sweeps; ++sweep) {
    const Eigen::VectorXd u = predictor + dt * dt * b * accel;
    Eigen::VectorXd next;
    if (options.closure == NewmarkClosure::fixed_point) {
      next = force(u);
    } else {
      // g(a) = a - f(predictor + b dt^2 a)
      Eigen::MatrixXd jg = -dt * dt * b * jacobian(u);
      jg.diagonal().array() += 1.0;
      next = accel - jg.partialPivLu().solve(accel - force(u));
    }
    if (!next.allFinite()) closure_failed(sweep + 1, std::numeric_limits<double>::infinity());
    update = (next - accel).lpNorm<Eigen::Infinity>();
    accel = std::move(next);
    if (update <= options.tolerance) break;
  }
  if (update > options.tolerance) closure_failed(options.max_sweeps, update);

  MarchState out;
  out.time = state.time + dt;
  out.acceleration = accel;
  out.displacement = predictor + dt * dt * b * accel;
  out.velocity = state.velocity + dt * ((1.0 - g) * state.acceleration + g * accel);
  return out;
}

MarchState newmark_step(const MarchState& state, double dt, double beta, double gamma, const ProblemSpec& problem) {
  const OperatorForce force = make_force(problem);
  NewmarkOptions options;
  options.beta = beta;
  options.gamma = gamma;
  return newmark_step(state, dt, force, options);
}

std::vector<MarchState> run_newmark(const ProblemSpec& problem, double dt, const NewmarkOptions& options) {
  const OperatorForce force = make_force(problem);
  const double length = problem.time_map.hi - problem.time_map.lo;
  if (!(dt > 0.0)) throw std::invalid_argument("run_newmark: dt must be positive");
  const long steps = std::lround(length / dt);
  if (steps < 1 || std::abs(steps * dt - length) > 1e-9 * length) {
    throw std::invalid_argument("run_newmark: dt must divide the time interval");
  }

  const ChebGrid grid(problem.n_max);
  const std::vector<double> u0 = problem.u0.sample(grid, problem.space_map);
  const std::vector<double> v0 = problem.v0.sample(grid, problem.space_map);
  MarchState state;
  state.time = problem.time_map.lo;
  state.displacement = Eigen::Map<const Eigen::VectorXd>(u0.data(), static_cast<Eigen::Index>(u0.size()));
  state.velocity = Eigen::Map<const Eigen::VectorXd>(v0.data(), static_cast<Eigen::Index>(v0.size()));
  state.acceleration = force(state.displacement);

  ForceJacobianFn jac;
  if (options.closure == NewmarkClosure::newton) jac = [&force](const Eigen::VectorXd& u) { return force.jacobian(u); };

  std::vector<MarchState> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(state);
  for (long s = 0; s < steps; ++s) {
    out.push_back(newmark_step(out.back(), dt, force, options, jac));
    out.back().time = problem.time_map.lo + (s + 1) * dt;
  }
  return out;
}

double richardson_order(const Eigen::VectorXd& coarse, const Eigen::VectorXd& medium, const Eigen::VectorXd& fine) {
  const double d1 = (coarse - medium).lpNorm<Eigen::Infinity>();
  const double d2 = (medium - fine).lpNorm<Eigen::Infinity>();
  if (!(d2 > 0.0)) throw std::domain_error("richardson_order: successive differences vanish");
  return std::log2(d1 / d2);
}

}  // namespace pdcheb
