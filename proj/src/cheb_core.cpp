#include "pdcheb/cheb_core.hpp"

#include "dct.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pdcheb {
namespace {

void require_grid_length(std::size_t length, const ChebGrid& grid, const char* what) {
  if (length != static_cast<std::size_t>(grid.size())) {
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(grid.size()) +
                                " samples, got " + std::to_string(length));
  }
}

// DCT-I output -> coefficients: ends carry 1/(2N), interior 1/N.
void scale_forward(double* v, int len, int stride) {
  const int n = len - 1;
  for (int k = 0; k < len; ++k) v[k * stride] /= (k == 0 || k == n) ? 2.0 * n : double(n);
}

// Coefficients -> DCT-I input whose transform is the nodal series.
void scale_inverse(double* v, int len, int stride) {
  for (int k = 1; k + 1 < len; ++k) v[k * stride] *= 0.5;
}

}  // namespace

ChebGrid::ChebGrid(int n_max) : n_max_(n_max) {
  if (n_max < 1) throw std::invalid_argument("gauss_lobatto_grid: n_max must be >= 1");
  const double pi = std::numbers::pi;
  const int n = n_max;
  nodes_.resize(n + 1);
  weights_.assign(n + 1, pi / n);
  norms_.assign(n + 1, pi / 2.0);
  // sin form of cos(k pi / N): exactly antisymmetric and exact at 0, +-1
  for (int k = 0; k <= n; ++k) nodes_[k] = std::sin(pi * (n - 2 * k) / (2.0 * n));
  weights_.front() = weights_.back() = pi / (2.0 * n);
  norms_.front() = norms_.back() = pi;
}

ChebGrid gauss_lobatto_grid(int n_max) { return ChebGrid(n_max); }

double eval_cheb(int n, double x) {
  if (n < 0) throw std::invalid_argument("eval_cheb: negative degree");
  if (!(std::abs(x) <= 1.0)) throw std::domain_error("eval_cheb: x outside [-1, 1]");
  if (x == 1.0) return 1.0;
  if (x == -1.0) return (n % 2 == 0) ? 1.0 : -1.0;
  return std::cos(n * std::acos(x));
}

Coeffs1D forward_1d(std::span<const double> samples, const ChebGrid& grid) {
  require_grid_length(samples.size(), grid, "forward_1d");
  Coeffs1D out{std::vector<double>(samples.begin(), samples.end())};
  detail::dct1(out.values.data(), grid.size());
  scale_forward(out.values.data(), grid.size(), 1);
  return out;
}

std::vector<double> inverse_1d(const Coeffs1D& coeffs, std::span<const double> points) {
  const auto& c = coeffs.values;
  std::vector<double> out(points.size(), 0.0);
  if (c.empty()) return out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double x = points[i];
    if (!(std::abs(x) <= 1.0)) throw std::domain_error("inverse_1d: point outside [-1, 1]");
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = c.size() - 1; k >= 1; --k) {
      const double b0 = 2.0 * x * b1 - b2 + c[k];
      b2 = b1;
      b1 = b0;
    }
    out[i] = x * b1 - b2 + c[0];
  }
  return out;
}

std::vector<double> inverse_1d(const Coeffs1D& coeffs) {
  if (coeffs.values.size() < 2) throw std::invalid_argument("inverse_1d: degree must be >= 1");
  std::vector<double> out = coeffs.values;
  const int len = static_cast<int>(out.size());
  scale_inverse(out.data(), len, 1);
  detail::dct1(out.data(), len);
  return out;
}

DerivativeMatrix derivative_matrix(int n_max, int order) {
  if (n_max < 1) throw std::invalid_argument("derivative_matrix: n_max must be >= 1");
  if (order != 1 && order != 2) throw std::invalid_argument("derivative_matrix: order must be 1 or 2");
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    const double c_n = (n == 0) ? 2.0 : 1.0;
    for (int k = n + 1; k <= n_max; k += 2) d(n, k) = 2.0 * k / c_n;
  }
  if (order == 2) d = (d * d).eval();
  return DerivativeMatrix{order, std::move(d)};
}

void diff_coeffs_inplace(double* f, int len, int stride) {
  double sums[2] = {0.0, 0.0};  // sum of k f_k over k > n, split by parity of k
  for (int n = len - 1; n >= 0; --n) {
    const double original = f[n * stride];
    const double c_n = (n == 0) ? 2.0 : 1.0;
    f[n * stride] = 2.0 / c_n * sums[(n + 1) % 2];
    sums[n % 2] += n * original;
  }
}

Coeffs1D diff_coeffs(const Coeffs1D& coeffs) {
  Coeffs1D out = coeffs;
  diff_coeffs_inplace(out.values.data(), static_cast<int>(out.values.size()), 1);
  return out;
}

Coeffs1D integrate_coeffs(const Coeffs1D& coeffs) {
  const auto& c = coeffs.values;
  std::vector<double> out(c.size() + 1, 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (k == 0) {
      out[1] += c[0];
    } else if (k == 1) {
      out[2] += 0.25 * c[1];
    } else {
      out[k + 1] += c[k] / (2.0 * (k + 1));
      out[k - 1] -= c[k] / (2.0 * (k - 1));
    }
  }
  double at_minus_one = 0.0;
  for (std::size_t j = 0; j < out.size(); ++j) at_minus_one += (j % 2 == 0) ? out[j] : -out[j];
  out[0] -= at_minus_one;
  return Coeffs1D{std::move(out)};
}

void forward_columns(Eigen::Ref<Eigen::MatrixXd> v) {
  const int len = static_cast<int>(v.rows());
  const int stride = static_cast<int>(v.outerStride());
  detail::dct1_many(v.data(), len, static_cast<int>(v.cols()), 1, stride);
  for (Eigen::Index c = 0; c < v.cols(); ++c) scale_forward(v.data() + c * stride, len, 1);
}

void inverse_columns(Eigen::Ref<Eigen::MatrixXd> v) {
  const int len = static_cast<int>(v.rows());
  const int stride = static_cast<int>(v.outerStride());
  for (Eigen::Index c = 0; c < v.cols(); ++c) scale_inverse(v.data() + c * stride, len, 1);
  detail::dct1_many(v.data(), len, static_cast<int>(v.cols()), 1, stride);
}

void forward_rows(Eigen::Ref<Eigen::MatrixXd> v) {
  const int len = static_cast<int>(v.cols());
  const int stride = static_cast<int>(v.outerStride());
  detail::dct1_many(v.data(), len, static_cast<int>(v.rows()), stride, 1);
  for (Eigen::Index r = 0; r < v.rows(); ++r) scale_forward(v.data() + r, len, stride);
}

void inverse_rows(Eigen::Ref<Eigen::MatrixXd> v) {
  const int len = static_cast<int>(v.cols());
  const int stride = static_cast<int>(v.outerStride());
  for (Eigen::Index r = 0; r < v.rows(); ++r) scale_inverse(v.data() + r, len, stride);
  detail::dct1_many(v.data(), len, static_cast<int>(v.rows()), stride, 1);
}

Coeffs2D forward_2d(const NodalField2D& samples, const ChebGrid& grid_x, const ChebGrid& grid_t) {
  if (samples.values.rows() != grid_x.size() || samples.values.cols() != grid_t.size()) {
    throw std::invalid_argument("forward_2d: field is " + std::to_string(samples.values.rows()) + "x" +
                                std::to_string(samples.values.cols()) + ", grids expect " +
                                std::to_string(grid_x.size()) + "x" + std::to_string(grid_t.size()));
  }
  Coeffs2D out{samples.values};
  forward_columns(out.values);
  forward_rows(out.values);
  return out;
}

NodalField2D inverse_2d(const Coeffs2D& coeffs) {
  if (coeffs.values.rows() < 2 || coeffs.values.cols() < 2) {
    throw std::invalid_argument("inverse_2d: degrees must be >= 1");
  }
  NodalField2D out{coeffs.values};
  inverse_columns(out.values);
  inverse_rows(out.values);
  return out;
}

Coeffs2D second_time_derivative(const Coeffs2D& coeffs) {
  Coeffs2D out = coeffs;
  auto& v = out.values;
  const int len = static_cast<int>(v.cols());
  const int stride = static_cast<int>(v.outerStride());
  for (Eigen::Index j = 0; j < v.rows(); ++j) {
    diff_coeffs_inplace(v.data() + j, len, stride);
    diff_coeffs_inplace(v.data() + j, len, stride);
  }
  return out;
}

}  // namespace pdcheb
