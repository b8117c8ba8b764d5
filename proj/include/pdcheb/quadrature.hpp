#pragma once

#include <functional>
#include <memory>
#include <vector>

namespace pdcheb {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Shared, immutable rule with `points` nodes; cached across calls.
std::shared_ptr<const GaussLegendreRule> gauss_legendre(int points);

/// Adaptive Gauss-Kronrod integral of f over [a, b] to relative accuracy
/// `rel_tol`. Throws std::runtime_error if the integrand is not integrable
/// to that accuracy or produces non-finite values.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-12);

}  // namespace pdcheb
