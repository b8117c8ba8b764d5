// pdcheb: run the space-time peridynamics experiments from the command line.
//
// Exit codes: 0 success, 1 solver non-convergence or numerical failure,
// 2 configuration or I/O error.

#include "pdcheb/experiments.hpp"
#include "pdcheb/newmark.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <stdexcept>

namespace {

using Json = nlohmann::ordered_json;
using namespace pdcheb;

constexpr int kExitOk = 0;
constexpr int kExitNonConvergence = 1;
constexpr int kExitConfig = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunResult {
  bool converged = true;
  Json results = Json::object();
  std::vector<std::string> outputs;
};

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

void write_output(const std::filesystem::path& path, const std::string& contents, RunResult& result) {
  try {
    write_atomic(path, contents);
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
  result.outputs.push_back(path.string());
}

Json error_table_json(const ErrorTable& table) {
  Json rows = Json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"n", r.n},
                    {"error", r.error},
                    {"rate", r.rate ? number_or_null(*r.rate) : Json(nullptr)},
                    {"converged", r.converged},
                    {"iterations", r.iterations},
                    {"residual_inf", r.residual_inf}});
  }
  return {{"reference_n", table.reference_n}, {"reference_converged", table.reference_converged}, {"rows", rows}};
}

void print_error_table(const ErrorTable& table) {
  std::cout << "reference N = " << table.reference_n << (table.reference_converged ? "" : " (not converged)") << "\n";
  for (const auto& r : table.rows) {
    std::cout << "  N=" << r.n << "  E=" << format_double(r.error);
    if (r.rate) std::cout << "  rate=" << format_double(*r.rate);
    if (!r.converged) std::cout << "  [not converged]";
    std::cout << "\n";
  }
}

RunResult run(const ExperimentConfig& config, const std::filesystem::path& stem, bool quiet) {
  RunResult result;
  switch (config.experiment) {
    case ExperimentKind::validate:
    case ExperimentKind::discontinuous: {
      const ErrorTable table =
          config.experiment == ExperimentKind::validate ? run_validation(config) : run_discontinuous(config);
      write_output(stem.string() + ".csv", error_table_csv(table), result);
      result.results = error_table_json(table);
      result.converged = table.all_converged();
      if (!quiet) print_error_table(table);
      break;
    }
    case ExperimentKind::compare: {
      const ComparisonReport report = run_compare(config);
      write_output(stem.string() + ".csv", timing_table_csv(report.timing), result);
      write_output(stem.string() + "_profiles.csv", profiles_csv(report.profiles), result);
      Json gaps = Json::object();
      for (const auto& [n, gap] : report.gap) gaps[std::to_string(n)] = gap;
      Json converged = Json::object();
      for (const auto& [n, ok] : report.spacetime_converged) {
        converged[std::to_string(n)] = ok;
        result.converged = result.converged && ok;
      }
      result.results = {{"gap_inf", gaps}, {"spacetime_converged", converged}, {"failures", report.failures}};
      if (!report.failures.empty()) result.converged = false;
      if (!quiet) {
        for (const auto& [n, gap] : report.gap) std::cout << "  N=" << n << "  gap=" << format_double(gap) << "\n";
        for (const auto& f : report.failures) std::cout << "  failure: " << f << "\n";
      }
      break;
    }
    case ExperimentKind::bench: {
      const TimingTable table = run_bench(config);
      write_output(stem.string() + ".csv", timing_table_csv(table), result);
      const double slope = table.slope("residual");
      result.results = {{"residual_slope", number_or_null(slope)}, {"solve_slope", number_or_null(table.slope("solve"))}};
      if (!quiet) {
        for (const auto& r : table.rows) {
          std::cout << "  N=" << r.n << "  " << r.method << "  " << format_double(r.wall_seconds) << " s\n";
        }
        std::cout << "residual log-log slope: " << format_double(slope) << "\n";
      }
      break;
    }
    case ExperimentKind::solve: {
      TimingTable timing;
      std::vector<ProfileRow> profile;
      Json solves = Json::array();
      for (int n : config.n_values) {
        const SolveReport report =
            solve(make_problem(config, n), make_solver_options(config), ToleranceSpec{config.alpha});
        timing.rows.push_back({n, "spacetime", report.wall_time});
        const ChebGrid grid(n);
        for (int k = 0; k < grid.size(); ++k) profile.push_back({n, grid.node(k), report.nodal.values(k, 0), 0.0});
        solves.push_back({{"n", n},
                          {"converged", report.converged},
                          {"status", to_string(report.status)},
                          {"iterations", report.iterations},
                          {"residual_inf", report.final_inf()},
                          {"nodal_residual_inf", report.nodal_residual_inf},
                          {"diagnostic_tolerance", report.diagnostic_tolerance}});
        result.converged = result.converged && report.converged;
        if (!quiet) {
          std::cout << "  N=" << n << "  " << to_string(report.status) << "  iterations=" << report.iterations
                    << "  |r|_inf=" << format_double(report.final_inf()) << "\n";
        }
      }
      write_output(stem.string() + ".csv", timing_table_csv(timing), result);
      std::string csv = "n,x,u_final\n";
      for (const auto& p : profile) csv += std::to_string(p.n) + "," + format_double(p.x) + "," + format_double(p.spacetime) + "\n";
      write_output(stem.string() + "_profile.csv", csv, result);
      result.results = {{"solves", solves}};
      break;
    }
  }
  return result;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Space-time Chebyshev solver for nonlinear peridynamics"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::vector<int> n_override;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON experiment configuration");
  app.add_option("--out", out_dir, "output directory (overrides output_path)");
  app.add_option("--n", n_override, "polynomial degrees, overrides n_values")->delimiter(',');
  app.add_flag("--quiet", quiet, "suppress progress output");

  for (const char* name : {"solve", "validate", "discontinuous", "compare", "bench"}) {
    app.add_subcommand(name, std::string("run the ") + name + " experiment");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const auto started = std::chrono::steady_clock::now();
  try {
    ExperimentConfig config = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    config.experiment = experiment_kind_from_string(app.get_subcommands().front()->get_name());
    if (!n_override.empty()) config.n_values = n_override;
    if (!out_dir.empty()) config.output_path = out_dir;
    config.validate();

    const std::filesystem::path dir(config.output_path);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());

    const std::string timestamp = file_timestamp();
    const std::filesystem::path stem = dir / (to_string(config.experiment) + "_" + timestamp);
    RunResult result = run(config, stem, quiet);

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    Json versions = Json::object();
    for (const auto& [name, version] : library_versions()) versions[name] = version;
    const Json manifest = {{"experiment", to_string(config.experiment)},
                           {"timestamp", timestamp},
                           {"wall_seconds", wall},
                           {"converged", result.converged},
                           {"config", Json::parse(serialize_config(config))},
                           {"versions", versions},
                           {"outputs", result.outputs},
                           {"results", result.results}};
    try {
      write_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
    } catch (const std::runtime_error& e) {
      throw ConfigError(e.what());
    }
    if (!quiet) {
      for (const auto& path : result.outputs) std::cout << "wrote " << path << "\n";
    }
    return result.converged ? kExitOk : kExitNonConvergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNonConvergence;
  }
}
