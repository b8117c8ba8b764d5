#include "pdcheb/micromodulus.hpp"

#include "pdcheb/cheb_core.hpp"
#include "pdcheb/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pdcheb {

std::string to_string(KernelKind kind) {
  return kind == KernelKind::gaussian ? "gaussian" : "tabulated";
}

KernelKind kernel_kind_from_string(const std::string& name) {
  if (name == "gaussian") return KernelKind::gaussian;
  if (name == "tabulated") return KernelKind::tabulated;
  throw std::invalid_argument("unknown kernel kind '" + name + "'");
}

Micromodulus::Micromodulus(KernelKind kind, double horizon, bool truncate)
    : kind_(kind), horizon_(horizon), truncate_(truncate) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("Micromodulus: horizon must be positive");
  }
}

Micromodulus Micromodulus::gaussian(double horizon, bool truncate) {
  Micromodulus c(KernelKind::gaussian, horizon, truncate);
  c.beta_ = compute_beta(c);
  return c;
}

std::vector<double> Micromodulus::tabulation_points(double extent, int degree) {
  const ChebGrid grid(degree);
  std::vector<double> r(grid.size());
  for (int k = 0; k < grid.size(); ++k) r[k] = 0.5 * extent * (grid.node(k) + 1.0);
  return r;
}

Micromodulus Micromodulus::tabulated(double horizon, double extent, std::vector<double> samples,
                                     bool truncate) {
  if (!(extent > 0.0)) throw std::invalid_argument("Micromodulus: tabulation extent must be positive");
  if (samples.size() < 2) throw std::invalid_argument("Micromodulus: need at least two samples");
  Micromodulus c(KernelKind::tabulated, horizon, truncate);
  c.extent_ = extent;
  c.samples_ = std::move(samples);
  c.coeffs_ = forward_1d(c.samples_, ChebGrid(static_cast<int>(c.samples_.size()) - 1)).values;
  c.beta_ = compute_beta(c);
  return c;
}

double Micromodulus::support_radius() const {
  const double natural =
      kind_ == KernelKind::gaussian ? std::numeric_limits<double>::infinity() : extent_;
  return truncate_ ? std::min(horizon_, natural) : natural;
}

double Micromodulus::operator()(double xi) const {
  const double r = std::abs(xi);
  if (truncate_ && r > horizon_) return 0.0;
  if (kind_ == KernelKind::gaussian) return std::exp(-r * r);
  if (r > extent_) return 0.0;
  const double x = std::clamp(2.0 * r / extent_ - 1.0, -1.0, 1.0);
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = coeffs_.size() - 1; k >= 1; --k) {
    const double b0 = 2.0 * x * b1 - b2 + coeffs_[k];
    b2 = b1;
    b1 = b0;
  }
  return x * b1 - b2 + coeffs_[0];
}

double eval_micromodulus(const Micromodulus& c, double xi) { return c(xi); }

double compute_beta(const Micromodulus& c) {
  const double reach = c.truncated() ? c.horizon() : 1.0 + c.horizon();
  const double upper = std::min(reach, c.support_radius());
  const double half = integrate_adaptive([&c](double xi) { return c(xi); }, 0.0, upper, 1e-13);
  return 2.0 * half;
}

}  // namespace pdcheb
