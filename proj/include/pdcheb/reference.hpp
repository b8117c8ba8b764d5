#pragma once

// Serial O(N^2) reference kernels kept for testing and benchmarking the
// parallel FFT/GEMM paths.

#include "pdcheb/cheb_core.hpp"
#include "pdcheb/perid_operator.hpp"

#include <span>
#include <vector>

namespace pdcheb::reference {

/// Direct summation f_n = (1/gamma_n) sum_k f(x_k) T_n(x_k) w_k.
Coeffs1D forward_1d_direct(std::span<const double> samples, const ChebGrid& grid);

/// Direct evaluation sum_n f_n T_n(x_k) at the grid nodes.
std::vector<double> inverse_1d_direct(const Coeffs1D& coeffs, const ChebGrid& grid);

/// Slice-by-slice fast operator without batching, one thread.
Eigen::MatrixXd apply_slices_serial(const ConvolutionOperator& op, const Eigen::MatrixXd& u);

}  // namespace pdcheb::reference
