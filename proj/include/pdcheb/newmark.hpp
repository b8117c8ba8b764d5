#pragma once

// Chebyshev collocation in space, Newmark-beta in time: the comparison method
// for the space-time solver.

#include "pdcheb/perid_operator.hpp"
#include "pdcheb/problem.hpp"

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <vector>

namespace pdcheb {

struct MarchState {
  double time = 0.0;
  Eigen::VectorXd displacement;
  Eigen::VectorXd velocity;
  Eigen::VectorXd acceleration;
};

enum class NewmarkClosure { fixed_point, newton };

struct NewmarkOptions {
  double beta = 0.25;
  double gamma = 0.5;
  NewmarkClosure closure = NewmarkClosure::fixed_point;
  double tolerance = 1e-10;  // on the acceleration update, inf-norm
  int max_sweeps = 50;
};

/// Thrown when the implicit acceleration solve does not settle.
class NewmarkClosureError : public std::runtime_error {
 public:
  NewmarkClosureError(const std::string& what, double last_residual)
      : std::runtime_error(what), last_residual_(last_residual) {}
  double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};

using ForceFn = std::function<Eigen::VectorXd(const Eigen::VectorXd& u)>;
using ForceJacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd& u)>;

/// One step of u'' = f(u):
///   u+ = u + dt v + dt^2 ((1/2 - beta) a + beta a+),
///   v+ = v + dt ((1 - gamma) a + gamma a+),   a+ = f(u+).
/// Newton closure needs `jacobian`.
MarchState newmark_step(const MarchState& state, double dt, const ForceFn& force, const NewmarkOptions& options,
                        const ForceJacobianFn& jacobian = {});

MarchState newmark_step(const MarchState& state, double dt, double beta, double gamma, const ProblemSpec& problem);

/// Marches from the start to the end of the time map with a fixed step; the
/// first element is the initial state with a = L(u0).
std::vector<MarchState> run_newmark(const ProblemSpec& problem, double dt, const NewmarkOptions& options = {});

/// Observed order log2(|u_dt - u_dt/2| / |u_dt/2 - u_dt/4|) in the inf-norm.
double richardson_order(const Eigen::VectorXd& coarse, const Eigen::VectorXd& medium, const Eigen::VectorXd& fine);

}  // namespace pdcheb
