#include "pdcheb/perid_operator.hpp"

#include "pdcheb/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pdcheb {
namespace {

void require_size(std::size_t got, int expected, const char* what) {
  if (got != static_cast<std::size_t>(expected)) {
    throw std::invalid_argument(std::string(what) + ": expected length " + std::to_string(expected) +
                                ", got " + std::to_string(got));
  }
}

// Splits [lo, hi] at x so the even kernel's apex sits on a panel boundary.
template <typename Fn>
void for_each_half(const InteractionInterval& iv, double x, Fn&& fn) {
  if (x > iv.lo) fn(iv.lo, std::min(x, iv.hi));
  if (x < iv.hi) fn(std::max(x, iv.lo), iv.hi);
}

}  // namespace

InteractionInterval interaction_interval(const Micromodulus& kernel, double x, double space_scale) {
  const double radius = kernel.support_radius() / space_scale;
  return {std::max(-1.0, x - radius), std::min(1.0, x + radius)};
}

ConvolutionOperator::ConvolutionOperator(const Micromodulus& kernel, const ChebGrid& grid,
                                         double space_scale) {
  if (!(space_scale > 0.0)) throw std::invalid_argument("ConvolutionOperator: space scale must be positive");
  const int n = grid.n_max();
  const int len = grid.size();
  // exact for T_j times a degree-40 surrogate of the kernel on each panel
  const auto rule = gauss_legendre(n + 40);
  modal_ = Eigen::MatrixXd::Zero(len, len);

#pragma omp parallel
  {
    std::vector<double> cheb(len);
#pragma omp for schedule(dynamic)
    for (int row = 0; row < len; ++row) {
      const double x = grid.node(row);
      for_each_half(interaction_interval(kernel, x, space_scale), x, [&](double a, double b) {
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        for (std::size_t q = 0; q < rule->nodes.size(); ++q) {
          const double y = mid + half * rule->nodes[q];
          const double w = half * rule->weights[q] * space_scale * kernel(space_scale * (x - y));
          if (w == 0.0) continue;
          cheb[0] = 1.0;
          if (len > 1) cheb[1] = y;
          for (int j = 2; j < len; ++j) cheb[j] = 2.0 * y * cheb[j - 1] - cheb[j - 2];
          for (int j = 0; j < len; ++j) modal_(row, j) += w * cheb[j];
        }
      });
    }
  }

  Eigen::MatrixXd transform = Eigen::MatrixXd::Identity(len, len);
  forward_columns(transform);
  nodal_ = modal_ * transform;
  mass_ = modal_.col(0);
}

std::vector<double> convolve_fast(const ConvolutionOperator& op, const Coeffs1D& u_coeffs) {
  if (u_coeffs.degree() != op.n_max()) {
    throw std::invalid_argument("convolve_fast: coefficient degree " + std::to_string(u_coeffs.degree()) +
                                " does not match operator degree " + std::to_string(op.n_max()));
  }
  const Eigen::Map<const Eigen::VectorXd> u(u_coeffs.values.data(), u_coeffs.values.size());
  const Eigen::VectorXd out = op.modal() * u;
  return {out.data(), out.data() + out.size()};
}

std::vector<double> convolve_direct(const Micromodulus& kernel, std::span<const double> u_samples,
                                    const ChebGrid& grid, double space_scale) {
  require_size(u_samples.size(), grid.size(), "convolve_direct");
  const Coeffs1D coeffs = forward_1d(u_samples, grid);
  constexpr int kPanelPoints = 10;
  constexpr double kLevelTolerance = 1e-9;
  constexpr int kMaxLevels = 14;
  const auto rule = gauss_legendre(kPanelPoints);
  const double panel_width = kernel.horizon() / space_scale / 8.0;

  std::vector<double> out(grid.size(), 0.0);
#pragma omp parallel for schedule(dynamic)
  for (int row = 0; row < grid.size(); ++row) {
    const double x = grid.node(row);

    auto composite = [&](double a, double b, int panels) {
      std::vector<double> pts;
      std::vector<double> wts;
      pts.reserve(static_cast<std::size_t>(panels) * kPanelPoints);
      const double h = (b - a) / panels;
      for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (int q = 0; q < kPanelPoints; ++q) {
          const double y = std::clamp(mid + 0.5 * h * rule->nodes[q], -1.0, 1.0);
          pts.push_back(y);
          wts.push_back(0.5 * h * rule->weights[q] * space_scale * kernel(space_scale * (x - y)));
        }
      }
      const std::vector<double> uy = inverse_1d(coeffs, pts);
      double sum = 0.0;
      for (std::size_t i = 0; i < pts.size(); ++i) sum += wts[i] * uy[i];
      return sum;
    };

    double total = 0.0;
    for_each_half(interaction_interval(kernel, x, space_scale), x, [&](double a, double b) {
      int panels = std::max(1, static_cast<int>(std::ceil((b - a) / panel_width)));
      double coarse = composite(a, b, panels);
      for (int level = 0; level < kMaxLevels; ++level) {
        panels *= 2;
        const double fine = composite(a, b, panels);
        const bool settled = std::abs(fine - coarse) < kLevelTolerance;
        coarse = fine;
        if (settled) break;
      }
      total += coarse;
    });
    out[row] = total;
  }
  return out;
}

namespace {

std::vector<double> combine(std::span<const double> u, const std::vector<double>& cu,
                            const std::vector<double>& cu2, const std::vector<double>& cu3,
                            std::span<const double> mass) {
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double v = u[i];
    out[i] = cu3[i] - 3.0 * v * cu2[i] + 3.0 * v * v * cu[i] - v * v * v * mass[i];
  }
  return out;
}

}  // namespace

std::vector<double> apply_L(std::span<const double> u, const ConvolutionOperator& op) {
  require_size(u.size(), op.n_max() + 1, "apply_L");
  const ChebGrid grid(op.n_max());
  std::vector<double> u2(u.size()), u3(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    u2[i] = u[i] * u[i];
    u3[i] = u2[i] * u[i];
  }
  const auto cu = convolve_fast(op, forward_1d(u, grid));
  const auto cu2 = convolve_fast(op, forward_1d(u2, grid));
  const auto cu3 = convolve_fast(op, forward_1d(u3, grid));
  return combine(u, cu, cu2, cu3, {op.mass().data(), static_cast<std::size_t>(op.mass().size())});
}

std::vector<double> apply_L(std::span<const double> u, const Micromodulus& kernel, const ChebGrid& grid,
                            ConvolutionMode mode, double space_scale) {
  require_size(u.size(), grid.size(), "apply_L");
  if (mode == ConvolutionMode::fast) return apply_L(u, ConvolutionOperator(kernel, grid, space_scale));

  std::vector<double> u2(u.size()), u3(u.size()), ones(u.size(), 1.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    u2[i] = u[i] * u[i];
    u3[i] = u2[i] * u[i];
  }
  const auto cu = convolve_direct(kernel, u, grid, space_scale);
  const auto cu2 = convolve_direct(kernel, u2, grid, space_scale);
  const auto cu3 = convolve_direct(kernel, u3, grid, space_scale);
  const auto mass = convolve_direct(kernel, ones, grid, space_scale);
  return combine(u, cu, cu2, cu3, mass);
}

PeridynamicOperator::PeridynamicOperator(const Micromodulus& kernel, const ChebGrid& grid,
                                         double space_scale)
    : kernel_(kernel), grid_(grid), space_scale_(space_scale), conv_(kernel, grid, space_scale) {}

Eigen::MatrixXd PeridynamicOperator::apply_slices(const Eigen::MatrixXd& u) const {
  if (u.rows() != grid_.size()) throw std::invalid_argument("apply_slices: row count must match the grid");
  const Eigen::Index cols = u.cols();
  const Eigen::ArrayXXd ua = u.array();
  // [u | u^2 | u^3] in Chebyshev space, one GEMM against the modal table
  Eigen::MatrixXd powers(u.rows(), 3 * cols);
  powers.leftCols(cols) = u;
  powers.middleCols(cols, cols) = (ua * ua).matrix();
  powers.rightCols(cols) = (ua * ua * ua).matrix();
  forward_columns(powers);
  const Eigen::MatrixXd conv = conv_.modal() * powers;

  const Eigen::ArrayXXd cu = conv.leftCols(cols).array();
  const Eigen::ArrayXXd cu2 = conv.middleCols(cols, cols).array();
  const Eigen::ArrayXXd cu3 = conv.rightCols(cols).array();
  const Eigen::ArrayXXd mass = conv_.mass().replicate(1, cols).array();
  return (cu3 - 3.0 * ua * cu2 + 3.0 * ua.square() * cu - ua.cube() * mass).matrix();
}

Eigen::MatrixXd PeridynamicOperator::linearize(std::span<const double> u) const {
  require_size(u.size(), grid_.size(), "linearize");
  const Eigen::MatrixXd& k = conv_.nodal();
  const Eigen::Index len = k.rows();
  Eigen::MatrixXd jac(len, len);
  for (Eigen::Index q = 0; q < len; ++q) {
    for (Eigen::Index p = 0; p < len; ++p) {
      const double d = u[p] - u[q];
      jac(p, q) = 3.0 * k(p, q) * d * d;
    }
  }
  jac.diagonal() -= jac.rowwise().sum();
  return jac;
}

}  // namespace pdcheb
