#include "pdcheb/experiments.hpp"

#include "pdcheb/newmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pdcheb {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

ErrorTable convergence_table(const ExperimentConfig& config) {
  config.validate();
  ErrorTable table;
  if (config.n_values.empty()) return table;
  const SolverOptions options = make_solver_options(config);
  const ToleranceSpec tolerance{config.alpha};

  table.reference_n = 2 * config.n_values.back();
  const SolveReport reference = solve(make_problem(config, table.reference_n), options, tolerance);
  table.reference_converged = reference.converged;

  for (int n : config.n_values) {
    const SolveReport report = solve(make_problem(config, n), options, tolerance);
    const Eigen::VectorXd final_slice = report.nodal.values.col(0);
    const std::vector<double> numerical(final_slice.data(), final_slice.data() + final_slice.size());
    ErrorRow row;
    row.n = n;
    row.error = relative_error(numerical, final_profile_at(reference, n));
    row.converged = report.converged;
    row.iterations = report.iterations;
    row.residual_inf = report.final_inf();
    if (!table.rows.empty()) {
      const ErrorRow& prev = table.rows.back();
      row.rate = std::log(prev.error / row.error) / std::log(static_cast<double>(n) / prev.n);
    }
    table.rows.push_back(row);
  }
  return table;
}

Eigen::VectorXd final_column(const SolveReport& report) { return report.nodal.values.col(0); }

}  // namespace

double relative_error(std::span<const double> numerical, std::span<const double> reference) {
  if (numerical.size() != reference.size()) throw std::invalid_argument("relative_error: length mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < numerical.size(); ++i) {
    const double d = numerical[i] - reference[i];
    num += d * d;
    den += numerical[i] * numerical[i];
  }
  if (!(den > 0.0)) throw std::domain_error("relative_error: numerical solution is identically zero");
  return num / den;
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("log_log_slope: length mismatch");
  if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double count = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw std::domain_error("log_log_slope: values must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

bool ErrorTable::all_converged() const {
  return reference_converged &&
         std::all_of(rows.begin(), rows.end(), [](const ErrorRow& r) { return r.converged; });
}

double TimingTable::slope(const std::string& method) const {
  std::vector<double> n, t;
  for (const auto& row : rows) {
    if (row.method != method) continue;
    n.push_back(row.n);
    t.push_back(row.wall_seconds);
  }
  return log_log_slope(n, t);
}

std::vector<double> final_profile_at(const SolveReport& report, int n) {
  const Eigen::VectorXd slice = final_column(report);
  const ChebGrid source(static_cast<int>(slice.size()) - 1);
  const ChebGrid target(n);
  const Coeffs1D coeffs = forward_1d({slice.data(), static_cast<std::size_t>(slice.size())}, source);
  return inverse_1d(coeffs, target.nodes());
}

ErrorTable run_validation(const ExperimentConfig& config) { return convergence_table(config); }

ErrorTable run_discontinuous(const ExperimentConfig& config) {
  ExperimentConfig local = config;
  local.ic = InitialCondition::indicator;
  return convergence_table(local);
}

ComparisonReport run_compare(const ExperimentConfig& config) {
  config.validate();
  ComparisonReport out;
  const SolverOptions options = make_solver_options(config);
  for (int n : config.n_values) {
    const ProblemSpec problem = make_problem(config, n);
    const ChebGrid grid(n);
    Eigen::VectorXd spacetime, newmark;

    try {
      const auto start = Clock::now();
      const SolveReport report = solve(problem, options, ToleranceSpec{config.alpha});
      out.timing.rows.push_back({n, "spacetime", seconds_since(start)});
      out.spacetime_converged[n] = report.converged;
      spacetime = final_column(report);
    } catch (const std::exception& e) {
      out.failures.push_back("spacetime n=" + std::to_string(n) + ": " + e.what());
    }
    try {
      const auto start = Clock::now();
      const std::vector<MarchState> march = run_newmark(problem, 2.0 / n);
      out.timing.rows.push_back({n, "newmark", seconds_since(start)});
      newmark = march.back().displacement;
    } catch (const std::exception& e) {
      out.failures.push_back("newmark n=" + std::to_string(n) + ": " + e.what());
    }
    if (spacetime.size() == 0 || newmark.size() == 0) continue;

    out.gap[n] = (spacetime - newmark).lpNorm<Eigen::Infinity>();
    for (int k = 0; k < grid.size(); ++k) out.profiles.push_back({n, grid.node(k), spacetime[k], newmark[k]});
  }
  return out;
}

TimingTable run_bench(const ExperimentConfig& config) {
  config.validate();
  TimingTable table;
  const SolverOptions options = make_solver_options(config);
  constexpr int kMinRepeats = 7;
  constexpr double kMinSeconds = 0.25;
  for (int n : config.n_values) {
    const ProblemSpec problem = make_problem(config, n);
    const SpaceTimeSystem system(problem);
    const NodalField2D field = initial_guess(problem);

    // best of several runs; the first warms the FFTW plan cache
    double best = std::numeric_limits<double>::infinity();
    const auto series_start = Clock::now();
    for (int rep = 0; rep < kMinRepeats || seconds_since(series_start) < kMinSeconds; ++rep) {
      const auto start = Clock::now();
      const ResidualVector r = system.residual(field);
      const double elapsed = seconds_since(start);
      if (r.size() != static_cast<Eigen::Index>(n + 1) * (n + 2)) {
        throw std::logic_error("run_bench: residual length mismatch");
      }
      best = std::min(best, elapsed);
    }
    table.rows.push_back({n, "residual", best});

    const auto start = Clock::now();
    solve(problem, options, ToleranceSpec{config.alpha});
    table.rows.push_back({n, "solve", seconds_since(start)});
  }
  return table;
}

}  // namespace pdcheb
