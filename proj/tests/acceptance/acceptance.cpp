// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "oracles/oracles.hpp"
#include "pdcheb/experiments.hpp"
#include "pdcheb/newmark.hpp"
#include "pdcheb/reference.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace pdcheb;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::vector<double> random_vec(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> out(n);
  for (double& x : out) x = d(rng);
  return out;
}

Outcome transforms() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1001);
  double round_trip = 0.0, fast_vs_direct = 0.0;
  for (int n : {2, 3, 5, 8, 17, 32, 63, 64, 100, 128, 255, 256, 333, 511, 512}) {
    const ChebGrid g(n);
    const auto u = random_vec(n + 1, rng);
    const Coeffs1D fast = forward_1d(u, g);
    const Coeffs1D direct = reference::forward_1d_direct(u, g);
    std::vector<double> diff(n + 1);
    for (int k = 0; k <= n; ++k) diff[k] = fast.values[k] - direct.values[k];
    fast_vs_direct = std::max(fast_vs_direct, max_abs(diff) / max_abs(direct.values));
    const auto back = inverse_1d(fast);
    for (int k = 0; k <= n; ++k) round_trip = std::max(round_trip, std::abs(back[k] - u[k]));
  }
  for (int n : {2, 7, 16, 33, 64}) {
    const ChebGrid g(n);
    const NodalField2D u{oracle::random_matrix(n + 1, n + 1, rng)};
    const NodalField2D back = inverse_2d(forward_2d(u, g, g));
    round_trip = std::max(round_trip, (back.values - u.values).cwiseAbs().maxCoeff());
  }
  const double secs = since(start);
  return {round_trip <= 1e-12 && fast_vs_direct <= 1e-12 && secs < 5.0,
          "round trip " + sci(round_trip) + ", fast vs direct " + sci(fast_vs_direct) + " (rel), " + sci(secs) + " s"};
}

Outcome differentiation() {
  std::mt19937_64 rng(1002);
  double worst = 0.0;
  for (int n : {1, 2, 8, 31, 64, 128, 200, 256}) {
    const auto c = random_vec(n + 1, rng);
    const auto fast = diff_coeffs(Coeffs1D{c}).values;
    const Eigen::VectorXd dense = derivative_matrix(n, 1).entries * Eigen::Map<const Eigen::VectorXd>(c.data(), n + 1);
    for (int k = 0; k <= n; ++k) worst = std::max(worst, std::abs(fast[k] - dense[k]) / std::max(1.0, dense.cwiseAbs().maxCoeff()));
  }
  double endpoint = 0.0;
  for (int n = 1; n <= 32; ++n) {
    std::vector<double> c(n + 1, 0.0);
    c[n] = 1.0;
    const Coeffs1D d1 = diff_coeffs(Coeffs1D{c});
    const auto v1 = inverse_1d(d1, std::vector<double>{1.0, -1.0});
    const auto v2 = inverse_1d(diff_coeffs(d1), std::vector<double>{1.0, -1.0});
    for (int side = 0; side < 2; ++side) {
      const double s = side == 0 ? 1.0 : -1.0;
      const double first = std::pow(s, n + 1) * n * n;
      const double second = std::pow(s, n) * n * n * (n * n - 1.0) / 3.0;
      endpoint = std::max(endpoint, std::abs(v1[side] - first) / std::abs(first));
      if (second != 0.0) endpoint = std::max(endpoint, std::abs(v2[side] - second) / std::abs(second));
    }
  }
  return {worst <= 1e-13 && endpoint <= 1e-8, "diff_coeffs vs D " + sci(worst) + ", endpoint formulas " + sci(endpoint)};
}

Outcome operator_oracle() {
  const auto start = Clock::now();
  const ChebGrid g(128);
  std::vector<double> u(g.size());
  for (int k = 0; k < g.size(); ++k) u[k] = std::exp(-g.node(k) * g.node(k));
  double gap = 0.0, equilibrium = 0.0;
  for (bool truncated : {false, true}) {
    const auto kernel = Micromodulus::gaussian(0.1, truncated);
    const auto fast = apply_L(u, kernel, g, ConvolutionMode::fast);
    const auto direct = apply_L(u, kernel, g, ConvolutionMode::direct);
    double num = 0.0, den = 0.0;
    for (int k = 0; k < g.size(); ++k) {
      if (1.0 - std::abs(g.node(k)) < 0.1) continue;
      num = std::max(num, std::abs(fast[k] - direct[k]));
      den = std::max(den, std::abs(direct[k]));
    }
    gap = std::max(gap, num / den);
    for (double c : {-1.0, 0.5, 2.0}) {
      const std::vector<double> constant(g.size(), c);
      equilibrium = std::max(equilibrium, max_abs(apply_L(constant, kernel, g, ConvolutionMode::fast)));
    }
    const std::vector<double> constant(g.size(), 1.7);
    equilibrium = std::max(equilibrium, max_abs(apply_L(constant, kernel, g, ConvolutionMode::direct)));
  }
  const double secs = since(start);
  return {gap <= 1e-6 && equilibrium <= 1e-10 && secs < 10.0,
          "interior relative gap " + sci(gap) + ", equilibrium " + sci(equilibrium) + ", " + sci(secs) + " s"};
}

Outcome residual_oracle() {
  std::mt19937_64 rng(1004);
  ProblemSpec p;
  p.n_max = 8;
  p.kernel = Micromodulus::gaussian(0.1, false);
  p.u0 = InitialData([](double x) { return std::exp(-x * x); });
  const SpaceTimeSystem system(p);
  const auto kernel = [&](double xi) { return p.kernel(xi); };
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const NodalField2D field{oracle::random_matrix(9, 9, rng)};
    const Eigen::VectorXd lib = assemble_residual(field, p).flatten();
    const Eigen::VectorXd ref =
        oracle::naive_residual(field.values, kernel, 10.0, system.u0(), system.v0(), system.time_factor());
    worst = std::max(worst, (lib - ref).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-11, "max abs difference over 10 fields " + sci(worst)};
}

Outcome solver_self_consistency() {
  ProblemSpec p;
  p.n_max = 32;
  p.kernel = Micromodulus::gaussian(0.1, false);
  p.u0 = InitialData([](double x) { return std::exp(-x * x); });
  const SolverOptions options;  // library defaults
  const SolveReport report = solve(p, options);

  ProblemSpec flat = p;
  flat.u0 = InitialData([](double) { return 0.42; });
  const SolveReport constant = solve(flat, options);
  const double drift = (constant.nodal.values.array() - 0.42).abs().maxCoeff();

  const bool ok = report.converged && report.final_inf() <= 1e-8 && report.iterations <= 200 &&
                  report.wall_time <= 120.0 && constant.converged && drift <= 1e-9;
  return {ok, "|r|_inf " + sci(report.final_inf()) + " in " + std::to_string(report.iterations) + " iterations, " +
                  sci(report.wall_time) + " s (" + to_string(options.jacobian_mode) + "); constant drift " + sci(drift)};
}

std::string rates_text(const ErrorTable& t) {
  std::ostringstream s;
  for (const auto& row : t.rows) {
    s << "N=" << row.n << " E=" << sci(row.error);
    if (row.rate) s << " rate=" << std::to_string(*row.rate).substr(0, 5);
    if (!row.converged) s << " (not converged)";
    s << "; ";
  }
  return s.str();
}

ErrorTable smooth_table;

Outcome convergence_trend() {
  ExperimentConfig c;
  c.n_values = {16, 32, 64};
  smooth_table = run_validation(c);
  bool ok = smooth_table.rows.size() == 3;
  for (std::size_t i = 1; i < smooth_table.rows.size(); ++i) {
    ok = ok && smooth_table.rows[i].error < smooth_table.rows[i - 1].error && *smooth_table.rows[i].rate >= 2.0;
  }
  return {ok, rates_text(smooth_table)};
}

Outcome discontinuous_order() {
  ExperimentConfig c;
  c.n_values = {16, 32, 64};
  c.ic = InitialCondition::indicator;
  const ErrorTable t = run_discontinuous(c);
  bool ok = t.rows.size() == 3 && smooth_table.rows.size() == 3;
  for (std::size_t i = 1; ok && i < t.rows.size(); ++i) {
    const double r = *t.rows[i].rate;
    ok = r >= 1.0 && r < 2.0 && r < *smooth_table.rows[i].rate;
  }
  return {ok, rates_text(t)};
}

Outcome cross_method() {
  ExperimentConfig c;
  c.n_values = {64};
  c.experiment = ExperimentKind::compare;
  const ComparisonReport report = run_compare(c);
  const double gap = report.gap.contains(64) ? report.gap.at(64) : INFINITY;

  ProblemSpec p = make_problem(c, 64);
  const double dt = 2.0 / 64;
  const auto coarse = run_newmark(p, dt).back().displacement;
  const auto medium = run_newmark(p, dt / 2).back().displacement;
  const auto fine = run_newmark(p, dt / 4).back().displacement;
  const double order = richardson_order(coarse, medium, fine);
  return {gap <= 1e-3 && order >= 1.9 && report.failures.empty(),
          "gap at N=64 " + sci(gap) + ", Newmark Richardson order " + std::to_string(order).substr(0, 5)};
}

Outcome scaling() {
  ExperimentConfig c;
  c.n_values = {32, 64, 128};
  c.experiment = ExperimentKind::bench;
  const TimingTable t = run_bench(c);
  const double slope = t.slope("residual");
  std::ostringstream s;
  s << "residual cost slope " << std::to_string(slope).substr(0, 5) << " (";
  for (const auto& row : t.rows) {
    if (row.method == "residual") s << "N=" << row.n << ": " << sci(row.wall_seconds) << " s ";
  }
  s << ")";
  return {std::isfinite(slope) && slope <= 3.0, s.str()};
}

Outcome diagnostic_tolerance() {
  const double v = dismodel_tolerance(100, ToleranceSpec{1.0});
  return {std::abs(v - 6.5065e-9) <= 1e-12, "dismodel_tolerance(100) = " + sci(v)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"transform exactness", transforms},
      {"differentiation", differentiation},
      {"operator oracle", operator_oracle},
      {"brute-force residual equivalence", residual_oracle},
      {"solver self-consistency", solver_self_consistency},
      {"convergence trend", convergence_trend},
      {"order loss for discontinuous data", discontinuous_order},
      {"cross-method agreement", cross_method},
      {"scaling", scaling},
      {"diagnostic tolerance", diagnostic_tolerance},
  };
  int failed = 0, index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome out;
    try {
      out = check();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    failed += !out.pass;
    std::printf("%s %2d %s: %s\n", out.pass ? "PASS" : "FAIL", index, name, out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
