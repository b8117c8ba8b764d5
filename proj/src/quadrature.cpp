#include "pdcheb/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace pdcheb {

std::shared_ptr<const GaussLegendreRule> gauss_legendre(int points) {
  if (points < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const GaussLegendreRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  if (auto it = cache.find(points); it != cache.end()) return it->second;

  gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(points);
  if (table == nullptr) throw std::runtime_error("gauss_legendre: table allocation failed");
  auto rule = std::make_shared<GaussLegendreRule>();
  rule->nodes.resize(points);
  rule->weights.resize(points);
  for (int i = 0; i < points; ++i) {
    gsl_integration_glfixed_point(-1.0, 1.0, i, &rule->nodes[i], &rule->weights[i], table);
    // GSL's untabulated orders (e.g. 48, 80) carry weight errors near 1e-12;
    // polish each node by Newton in long double and rebuild its weight.
    long double x = rule->nodes[i], dp = 1.0L;
    for (int sweep = 0; sweep < 3; ++sweep) {
      long double p0 = 1.0L, p1 = x;
      for (int k = 2; k <= points; ++k) {
        const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = points * (x * p1 - p0) / (x * x - 1.0L);
      x -= p1 / dp;
    }
    rule->nodes[i] = static_cast<double>(x);
    rule->weights[i] = static_cast<double>(2.0L / ((1.0L - x * x) * dp * dp));
  }
  gsl_integration_glfixed_table_free(table);
  cache.emplace(points, rule);
  return rule;
}

namespace {

double trampoline(double x, void* params) {
  return (*static_cast<const std::function<double(double)>*>(params))(x);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  constexpr std::size_t kLimit = 2000;
  gsl_set_error_handler_off();
  gsl_integration_workspace* ws = gsl_integration_workspace_alloc(kLimit);
  gsl_function fn{&trampoline, const_cast<std::function<double(double)>*>(&f)};
  double result = 0.0, abserr = 0.0;
  const int status = gsl_integration_qag(&fn, a, b, 0.0, rel_tol, kLimit, GSL_INTEG_GAUSS61, ws,
                                         &result, &abserr);
  gsl_integration_workspace_free(ws);
  if (status != GSL_SUCCESS || !std::isfinite(result)) {
    throw std::runtime_error(std::string("integrate_adaptive: integrand not integrable (") +
                             gsl_strerror(status) + ")");
  }
  return result;
}

}  // namespace pdcheb
