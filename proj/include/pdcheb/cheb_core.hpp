#pragma once

// Chebyshev machinery on Gauss-Lobatto grids: nodes, transforms between
// nodal samples and coefficients, and differentiation in coefficient space.
//
// Conventions used throughout the library:
//  * nodes are descending, x_k = cos(k*pi/N), so x_0 = 1 and x_N = -1;
//  * coefficients follow f_n = (1/gamma_n) sum_k f(x_k) T_n(x_k) w_k;
//  * 2D arrays are (spatial index) x (temporal index).

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace pdcheb {

class ChebGrid {
 public:
  /// Gauss-Lobatto grid of polynomial degree `n_max` (n_max + 1 nodes).
  explicit ChebGrid(int n_max);

  int n_max() const { return n_max_; }
  int size() const { return n_max_ + 1; }

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> norms() const { return norms_; }
  double node(int k) const { return nodes_[k]; }

 private:
  int n_max_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> norms_;
};

struct Coeffs1D {
  std::vector<double> values;

  int degree() const { return static_cast<int>(values.size()) - 1; }
};

/// Spectral coefficients f_{jk}: row j = spatial mode, column k = temporal mode.
struct Coeffs2D {
  Eigen::MatrixXd values;

  int degree_x() const { return static_cast<int>(values.rows()) - 1; }
  int degree_t() const { return static_cast<int>(values.cols()) - 1; }
};

/// Nodal values u_{nm} at (x_n, t_m) on a tensor Gauss-Lobatto grid.
struct NodalField2D {
  Eigen::MatrixXd values;

  int degree_x() const { return static_cast<int>(values.rows()) - 1; }
  int degree_t() const { return static_cast<int>(values.cols()) - 1; }
};

struct DerivativeMatrix {
  int order = 1;
  Eigen::MatrixXd entries;
};

ChebGrid gauss_lobatto_grid(int n_max);

/// T_n(x) = cos(n arccos x); exact at x = +-1. Throws for |x| > 1.
double eval_cheb(int n, double x);

/// Nodal samples -> coefficients via a DCT-I, O(N log N).
Coeffs1D forward_1d(std::span<const double> samples, const ChebGrid& grid);

/// Evaluates sum f_n T_n(x) at arbitrary points in [-1, 1] (Clenshaw).
std::vector<double> inverse_1d(const Coeffs1D& coeffs, std::span<const double> points);

/// Evaluates the series on its own Gauss-Lobatto grid via a DCT-I.
std::vector<double> inverse_1d(const Coeffs1D& coeffs);

DerivativeMatrix derivative_matrix(int n_max, int order);

/// Coefficients of the derivative, O(N) parity-split running sums.
Coeffs1D diff_coeffs(const Coeffs1D& coeffs);

/// Antiderivative vanishing at x = -1; one degree higher than the input.
Coeffs1D integrate_coeffs(const Coeffs1D& coeffs);

Coeffs2D forward_2d(const NodalField2D& samples, const ChebGrid& grid_x, const ChebGrid& grid_t);
NodalField2D inverse_2d(const Coeffs2D& coeffs);

/// Applies D^2 along the temporal index of the coefficient array.
Coeffs2D second_time_derivative(const Coeffs2D& coeffs);

// In-place batch transforms used by the solver kernels. Columns hold
// vectors along the first index, rows along the second.
void forward_columns(Eigen::Ref<Eigen::MatrixXd> values);
void inverse_columns(Eigen::Ref<Eigen::MatrixXd> values);
void forward_rows(Eigen::Ref<Eigen::MatrixXd> values);
void inverse_rows(Eigen::Ref<Eigen::MatrixXd> values);

/// In-place first derivative of a coefficient vector of length `len`
/// with element stride `stride`.
void diff_coeffs_inplace(double* coeffs, int len, int stride);

}  // namespace pdcheb
