#pragma once

// Nonlinear peridynamic operator with cubic pairwise response,
//
//   L u(x) = (C*u^3)(x) - 3 u(x) (C*u^2)(x) + 3 u(x)^2 (C*u)(x) - m(x) u(x)^3,
//
// which is the expansion of int C(x - y) (u(y) - u(x))^3 dy over the part of
// the interaction ball inside the bar [-1, 1]. The displacement is extended by
// zero outside the bar, and m(x) = (C*1)(x) is the kernel mass seen by x; it
// equals beta = int C at nodes whose ball lies inside the bar.

#include "pdcheb/cheb_core.hpp"
#include "pdcheb/micromodulus.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace pdcheb {

enum class ConvolutionMode { fast, direct };

/// Convolution with a fixed kernel on a fixed Gauss-Lobatto grid, expressed in
/// Chebyshev space: entry (n, j) of `modal()` is (C*T_j)(x_n), so the nodal
/// convolution of a series with coefficients u_j is modal() * u. Built once per
/// (kernel, grid, scale); immutable afterwards.
///
/// `space_scale` s = (b - a)/2 maps a physical bar [a, b] to [-1, 1]; the kernel
/// acting on the reference coordinate is s * C(s * xi).
class ConvolutionOperator {
 public:
  ConvolutionOperator(const Micromodulus& kernel, const ChebGrid& grid, double space_scale = 1.0);

  int n_max() const { return static_cast<int>(modal_.rows()) - 1; }
  const Eigen::MatrixXd& modal() const { return modal_; }
  /// Nodal samples -> nodal convolution values.
  const Eigen::MatrixXd& nodal() const { return nodal_; }
  /// Kernel mass (C*1)(x_n) at every node.
  const Eigen::VectorXd& mass() const { return mass_; }

 private:
  Eigen::MatrixXd modal_;
  Eigen::MatrixXd nodal_;
  Eigen::VectorXd mass_;
};

/// Integration limits [lo, hi] of the interaction ball of reference point x.
struct InteractionInterval {
  double lo;
  double hi;
};
InteractionInterval interaction_interval(const Micromodulus& kernel, double x, double space_scale = 1.0);

/// (C*u)(x_n) from the Chebyshev coefficients of u.
std::vector<double> convolve_fast(const ConvolutionOperator& op, const Coeffs1D& u_coeffs);

/// (C*u)(x_n) by composite Gauss-Legendre quadrature of the interpolant of
/// `u_samples`, refined until successive levels differ by less than 1e-9.
std::vector<double> convolve_direct(const Micromodulus& kernel, std::span<const double> u_samples,
                                    const ChebGrid& grid, double space_scale = 1.0);

std::vector<double> apply_L(std::span<const double> u, const ConvolutionOperator& op);
std::vector<double> apply_L(std::span<const double> u, const Micromodulus& kernel, const ChebGrid& grid,
                            ConvolutionMode mode, double space_scale = 1.0);

/// Fast-path operator for whole space-time fields plus its linearization.
class PeridynamicOperator {
 public:
  PeridynamicOperator(const Micromodulus& kernel, const ChebGrid& grid, double space_scale = 1.0);

  const Micromodulus& kernel() const { return kernel_; }
  const ChebGrid& grid() const { return grid_; }
  const ConvolutionOperator& convolution() const { return conv_; }
  double space_scale() const { return space_scale_; }

  std::vector<double> apply(std::span<const double> u) const { return apply_L(u, conv_); }

  /// L applied to every column (time slice) of `u`.
  Eigen::MatrixXd apply_slices(const Eigen::MatrixXd& u) const;

  /// Jacobian dL/du at `u`: 3 K_pq (u_p - u_q)^2 off the diagonal, rows summing to zero.
  Eigen::MatrixXd linearize(std::span<const double> u) const;

 private:
  Micromodulus kernel_;
  ChebGrid grid_;
  double space_scale_;
  ConvolutionOperator conv_;
};

}  // namespace pdcheb
