#include "pdcheb/experiments.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pdcheb {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void bad_config(const std::string& what) { throw std::invalid_argument("config: " + what); }

void reject_unknown_keys(const Json& object, const std::set<std::string>& known, const std::string& where) {
  for (const auto& item : object.items()) {
    if (!known.contains(item.key())) bad_config("unknown key '" + item.key() + "' in " + where);
  }
}

template <typename T>
T get_field(const Json& object, const char* key, const T& fallback) {
  const auto it = object.find(key);
  if (it == object.end()) return fallback;
  try {
    return it->template get<T>();
  } catch (const Json::exception&) {
    bad_config(std::string("field '") + key + "' has the wrong type");
  }
}

Json kernel_to_json(const KernelConfig& kernel) {
  Json out;
  out["kind"] = to_string(kernel.kind);
  out["truncated"] = kernel.truncated;
  if (kernel.kind == KernelKind::tabulated) {
    out["extent"] = kernel.extent;
    out["samples"] = kernel.samples;
  }
  return out;
}

KernelConfig kernel_from_json(const Json& object) {
  if (!object.is_object()) bad_config("'kernel' must be an object");
  reject_unknown_keys(object, {"kind", "truncated", "extent", "samples"}, "kernel");
  KernelConfig out;
  try {
    out.kind = kernel_kind_from_string(get_field<std::string>(object, "kind", to_string(out.kind)));
  } catch (const std::invalid_argument& e) {
    bad_config(e.what());
  }
  out.truncated = get_field(object, "truncated", out.truncated);
  out.extent = get_field(object, "extent", out.extent);
  out.samples = get_field(object, "samples", out.samples);
  return out;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::validate: return "validate";
    case ExperimentKind::discontinuous: return "discontinuous";
    case ExperimentKind::compare: return "compare";
    case ExperimentKind::bench: return "bench";
    case ExperimentKind::solve: return "solve";
  }
  return "unknown";
}

std::string to_string(InitialCondition ic) {
  switch (ic) {
    case InitialCondition::gaussian: return "gaussian";
    case InitialCondition::linear: return "linear";
    case InitialCondition::indicator: return "indicator";
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  for (auto kind : {ExperimentKind::validate, ExperimentKind::discontinuous, ExperimentKind::compare,
                    ExperimentKind::bench, ExperimentKind::solve}) {
    if (to_string(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

InitialCondition initial_condition_from_string(const std::string& name) {
  for (auto ic : {InitialCondition::gaussian, InitialCondition::linear, InitialCondition::indicator}) {
    if (to_string(ic) == name) return ic;
  }
  throw std::invalid_argument("unknown initial condition '" + name + "'");
}

void ExperimentConfig::validate() const {
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 2) bad_config("n_values entries must be >= 2");
    if (i > 0 && n_values[i] <= n_values[i - 1]) bad_config("n_values must be strictly increasing");
  }
  if (!(horizon > 0.0 && horizon < 1.0)) bad_config("horizon must lie in (0, 1)");
  if (!(alpha > 0.0 && alpha <= 1.0)) bad_config("alpha must lie in (0, 1]");
  if (!(residual_target >= 0.0)) bad_config("residual_target must be >= 0");
  if (output_path.empty()) bad_config("output_path must not be empty");
  if (kernel.kind == KernelKind::tabulated) {
    if (!(kernel.extent > 0.0)) bad_config("tabulated kernel needs a positive extent");
    if (kernel.samples.size() < 2) bad_config("tabulated kernel needs at least two samples");
  }
}

std::string serialize_config(const ExperimentConfig& config) {
  Json out;
  out["experiment"] = to_string(config.experiment);
  out["n_values"] = config.n_values;
  out["horizon"] = config.horizon;
  out["kernel"] = kernel_to_json(config.kernel);
  out["ic"] = to_string(config.ic);
  out["alpha"] = config.alpha;
  out["output_path"] = config.output_path;
  out["seed"] = config.seed;
  out["jacobian_mode"] = to_string(config.jacobian_mode);
  out["residual_target"] = config.residual_target;
  return out.dump(2);
}

ExperimentConfig parse_config(const std::string& json_text) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    bad_config(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) bad_config("top level must be an object");
  reject_unknown_keys(root,
                      {"experiment", "n_values", "horizon", "kernel", "ic", "alpha", "output_path", "seed",
                       "jacobian_mode", "residual_target"},
                      "config");
  ExperimentConfig out;
  try {
    out.experiment = experiment_kind_from_string(get_field<std::string>(root, "experiment", to_string(out.experiment)));
    out.ic = initial_condition_from_string(get_field<std::string>(root, "ic", to_string(out.ic)));
    out.jacobian_mode =
        jacobian_mode_from_string(get_field<std::string>(root, "jacobian_mode", to_string(out.jacobian_mode)));
  } catch (const std::invalid_argument& e) {
    bad_config(e.what());
  }
  out.n_values = get_field(root, "n_values", out.n_values);
  out.horizon = get_field(root, "horizon", out.horizon);
  if (root.contains("kernel")) out.kernel = kernel_from_json(root["kernel"]);
  out.alpha = get_field(root, "alpha", out.alpha);
  out.output_path = get_field(root, "output_path", out.output_path);
  out.seed = get_field(root, "seed", out.seed);
  out.residual_target = get_field(root, "residual_target", out.residual_target);
  out.validate();
  return out;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

Micromodulus make_kernel(const ExperimentConfig& config) {
  if (config.kernel.kind == KernelKind::tabulated) {
    return Micromodulus::tabulated(config.horizon, config.kernel.extent, config.kernel.samples,
                                   config.kernel.truncated);
  }
  return Micromodulus::gaussian(config.horizon, config.kernel.truncated);
}

InitialData make_initial_condition(InitialCondition ic) {
  switch (ic) {
    case InitialCondition::gaussian: return InitialData([](double x) { return std::exp(-x * x); });
    case InitialCondition::linear: return InitialData([](double x) { return 0.5 * x; });
    case InitialCondition::indicator: return InitialData([](double x) { return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0; });
  }
  throw std::invalid_argument("make_initial_condition: unknown initial condition");
}

ProblemSpec make_problem(const ExperimentConfig& config, int n_max) {
  ProblemSpec problem;
  problem.n_max = n_max;
  problem.kernel = make_kernel(config);
  problem.u0 = make_initial_condition(config.ic);
  problem.v0 = InitialData([](double) { return 0.0; });
  problem.validate();
  return problem;
}

SolverOptions make_solver_options(const ExperimentConfig& config) {
  SolverOptions options;
  options.jacobian_mode = config.jacobian_mode;
  options.residual_target = config.residual_target;
  return options;
}

}  // namespace pdcheb
