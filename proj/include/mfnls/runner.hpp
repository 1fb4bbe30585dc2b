#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mfnls/io.hpp"
#include "mfnls/potentials.hpp"

namespace mfnls {

enum class ExperimentKind { convergence, energy_suite, collapse_suite, lens_suite, bbgky_residual, nls_validate };

std::string to_string(ExperimentKind k);
ExperimentKind kind_from_string(const std::string& s);

// Every field has a per-kind default; see config_schema() for the JSON form.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::convergence;
  std::uint64_t seed = 1;
  int threads = 1;
  double L = 8.0;
  std::size_t n = 32;
  PotentialSpec potential;  // beta lives here
  double omega = 0.0;
  std::vector<int> Ns{2, 3, 4};
  double dt = 0.01;
  double T = 0.5;
  std::size_t outputs = 5;  // stored times besides t = 0
  std::vector<double> epsilons{0.25, 0.0};
  std::vector<double> kappas{0.4, 0.2, 0.1, 0.05, 0.025};
  std::size_t pair_n = 32;  // two-particle grid of the dense energy checks
  std::size_t draws = 20;   // random states per energy-estimate cell
  double scan_range = 50.0;
  double scan_step = 10.0;
  std::vector<double> deltas{1e-2, 1e-3, 1e-4, 1e-5};
  std::vector<double> dts{0.02, 0.01, 0.005};
};

ExperimentConfig default_config(ExperimentKind kind);
// Missing fields take the kind defaults; unknown fields, wrong types and
// violated preconditions throw ConfigError naming the field path.
ExperimentConfig parse_config(const json& j, std::optional<ExperimentKind> expected = std::nullopt);
// Canonical form with every field spelled out; this is what gets hashed.
// threads is left out: results do not depend on it.
json config_to_json(const ExperimentConfig& c);
json config_schema();
json module_versions();

struct CheckResult {
  std::string name;
  bool assertable = true;  // informational lines never fail the run
  bool pass = true;
  double value = 0.0;
  double bound = 0.0;
  std::string note;
};

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct Report {
  ExperimentKind kind = ExperimentKind::convergence;
  std::vector<CheckResult> checks;
  std::vector<Table> tables;
  bool pass() const;
};

Report run_convergence(const ExperimentConfig& c);
Report run_suite(const ExperimentConfig& c);
Report run_experiment(const ExperimentConfig& c);

// <dir>/summary.json plus <dir>/<table>.csv, each stamped with hash, conventions and versions
void write_report(const std::filesystem::path& dir, const ExperimentConfig& c, const Report& r);

}  // namespace mfnls
