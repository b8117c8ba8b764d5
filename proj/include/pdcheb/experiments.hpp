#pragma once

// Experiment harness: convergence tables, discontinuous data, method
// comparison and timing, plus CSV/JSON output.

#include "pdcheb/levenberg_marquardt.hpp"
#include "pdcheb/micromodulus.hpp"
#include "pdcheb/problem.hpp"
#include "pdcheb/spacetime_solver.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pdcheb {

enum class ExperimentKind { validate, discontinuous, compare, bench, solve };
enum class InitialCondition { gaussian, linear, indicator };

std::string to_string(ExperimentKind kind);
std::string to_string(InitialCondition ic);
ExperimentKind experiment_kind_from_string(const std::string& name);
InitialCondition initial_condition_from_string(const std::string& name);

struct KernelConfig {
  KernelKind kind = KernelKind::gaussian;
  bool truncated = false;
  double extent = 0.0;          // tabulated only
  std::vector<double> samples;  // tabulated only, at Micromodulus::tabulation_points

  bool operator==(const KernelConfig&) const = default;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::validate;
  std::vector<int> n_values = {16, 32, 64};
  double horizon = 0.1;
  KernelConfig kernel;
  InitialCondition ic = InitialCondition::gaussian;
  double alpha = 1.0;
  std::string output_path = "out";
  std::uint64_t seed = 0;
  JacobianMode jacobian_mode = JacobianMode::analytic;
  double residual_target = 1e-12;

  bool operator==(const ExperimentConfig&) const = default;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

std::string serialize_config(const ExperimentConfig& config);
/// Missing keys take their defaults; unknown keys and bad values throw std::invalid_argument.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

Micromodulus make_kernel(const ExperimentConfig& config);
InitialData make_initial_condition(InitialCondition ic);
ProblemSpec make_problem(const ExperimentConfig& config, int n_max);
SolverOptions make_solver_options(const ExperimentConfig& config);

/// sum |u_n - u*_n|^2 / sum |u_n|^2, no square root. Throws std::domain_error
/// when the numerical solution is identically zero.
double relative_error(std::span<const double> numerical, std::span<const double> reference);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

struct ErrorRow {
  int n = 0;
  double error = 0.0;
  std::optional<double> rate;
  bool converged = false;
  int iterations = 0;
  double residual_inf = 0.0;
};

struct ErrorTable {
  std::vector<ErrorRow> rows;
  int reference_n = 0;
  bool reference_converged = false;

  bool all_converged() const;
};

struct TimingRow {
  int n = 0;
  std::string method;
  double wall_seconds = 0.0;
};

struct TimingTable {
  std::vector<TimingRow> rows;

  /// log-log slope of wall time against n for one method; NaN with fewer than two rows.
  double slope(const std::string& method) const;
};

struct ProfileRow {
  int n = 0;
  double x = 0.0;
  double spacetime = 0.0;
  double newmark = 0.0;
};

struct ComparisonReport {
  TimingTable timing;
  std::vector<ProfileRow> profiles;  // final-time profiles at the spatial nodes
  std::map<int, double> gap;         // final-time inf-norm gap per n
  std::map<int, bool> spacetime_converged;
  std::vector<std::string> failures;
};

/// E^m at the final time t = 1 against a solve at 2 max(n_values).
ErrorTable run_validation(const ExperimentConfig& config);
/// run_validation with the indicator datum of [0, 1].
ErrorTable run_discontinuous(const ExperimentConfig& config);
ComparisonReport run_compare(const ExperimentConfig& config);
/// Rows for methods "residual" (one full residual evaluation) and "solve".
TimingTable run_bench(const ExperimentConfig& config);

/// Final-time nodal profile (column t = 1) resampled at the nodes of degree `n`.
std::vector<double> final_profile_at(const SolveReport& report, int n);

// Output -----------------------------------------------------------------

std::string format_double(double value);
std::string error_table_csv(const ErrorTable& table);
std::string timing_table_csv(const TimingTable& table);
std::string profiles_csv(const std::vector<ProfileRow>& rows);

/// Writes `contents` to `path` through a temporary file and a rename.
/// Throws std::runtime_error with the path on failure.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

/// Versions of this library and its numerical dependencies.
std::map<std::string, std::string> library_versions();

/// UTC timestamp usable in file names, e.g. 20261016T101500Z.
std::string file_timestamp();

}  // namespace pdcheb
