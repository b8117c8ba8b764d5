#include "pdcheb/reference.hpp"

#include <stdexcept>

namespace pdcheb::reference {

Coeffs1D forward_1d_direct(std::span<const double> samples, const ChebGrid& grid) {
  if (samples.size() != static_cast<std::size_t>(grid.size())) {
    throw std::invalid_argument("forward_1d_direct: length mismatch");
  }
  const int len = grid.size();
  Coeffs1D out{std::vector<double>(len, 0.0)};
  for (int n = 0; n < len; ++n) {
    double sum = 0.0;
    for (int k = 0; k < len; ++k) sum += samples[k] * eval_cheb(n, grid.node(k)) * grid.weights()[k];
    out.values[n] = sum / grid.norms()[n];
  }
  return out;
}

std::vector<double> inverse_1d_direct(const Coeffs1D& coeffs, const ChebGrid& grid) {
  std::vector<double> out(grid.size(), 0.0);
  for (int k = 0; k < grid.size(); ++k) {
    for (int n = 0; n <= coeffs.degree(); ++n) out[k] += coeffs.values[n] * eval_cheb(n, grid.node(k));
  }
  return out;
}

Eigen::MatrixXd apply_slices_serial(const ConvolutionOperator& op, const Eigen::MatrixXd& u) {
  Eigen::MatrixXd out(u.rows(), u.cols());
  for (Eigen::Index m = 0; m < u.cols(); ++m) {
    const Eigen::VectorXd slice = u.col(m);
    const auto lu = apply_L(std::span<const double>(slice.data(), slice.size()), op);
    out.col(m) = Eigen::Map<const Eigen::VectorXd>(lu.data(), static_cast<Eigen::Index>(lu.size()));
  }
  return out;
}

}  // namespace pdcheb::reference
