#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mfnls/errors.hpp"
#include "mfnls/runner.hpp"

namespace {

using mfnls::ExperimentKind;

constexpr int kPass = 0, kFail = 1, kConfig = 2, kAbort = 3;

const std::vector<std::pair<std::string, ExperimentKind>> kCommands{
    {"convergence", ExperimentKind::convergence},   {"energy", ExperimentKind::energy_suite},
    {"collapse", ExperimentKind::collapse_suite},   {"lens", ExperimentKind::lens_suite},
    {"bbgky", ExperimentKind::bbgky_residual},      {"nls-validate", ExperimentKind::nls_validate},
};

mfnls::json load(const std::string& path) {
  if (path.empty()) return mfnls::json::object();
  std::ifstream is(path);
  if (!is) throw mfnls::ConfigError("--config: cannot open " + path);
  try {
    return mfnls::json::parse(is);
  } catch (const mfnls::json::parse_error& e) {
    throw mfnls::ConfigError("--config: " + std::string(e.what()));
  }
}

void print(const mfnls::Report& r) {
  for (const auto& c : r.checks) {
    const char* tag = !c.assertable ? "INFO" : c.pass ? "PASS" : "FAIL";
    std::cout << tag << ' ' << c.name << " value=" << c.value;
    if (c.assertable) std::cout << " bound=" << c.bound;
    if (!c.note.empty()) std::cout << "  (" << c.note << ')';
    std::cout << '\n';
  }
  std::cout << (r.pass() ? "PASS" : "FAIL") << ' ' << mfnls::to_string(r.kind) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean-field NLS lab: N-body dynamics, marginal densities and the inequality suites"};
  app.require_subcommand(1);
  std::string config, out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  app.add_option("--config", config, "experiment configuration (JSON)")->envname("MFNLS_CONFIG");
  app.add_option("--out", out, "output directory (default mfnls-out/<kind>)")->envname("MFNLS_OUT");
  app.add_option("--seed", seed, "base seed; overrides the config")->envname("MFNLS_SEED");
  app.add_option("--threads", threads, "worker threads; overrides the config")->envname("MFNLS_THREADS");

  std::optional<ExperimentKind> chosen;
  for (const auto& [name, kind] : kCommands) {
    auto* sub = app.add_subcommand(name, "run the " + mfnls::to_string(kind) + " experiment");
    sub->fallthrough();
    sub->callback([&chosen, k = kind] { chosen = k; });
  }
  bool schema = false;
  app.add_subcommand("schema", "print the configuration JSON schema")->callback([&schema] { schema = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfig;
  }
  if (schema) {
    std::cout << mfnls::config_schema().dump(2) << '\n';
    return kPass;
  }

  try {
    mfnls::json j = load(config);
    if (seed) j["seed"] = *seed;
    if (threads) j["threads"] = *threads;
    const mfnls::ExperimentConfig cfg = mfnls::parse_config(j, chosen);
    const mfnls::Report rep = mfnls::run_experiment(cfg);
    const std::string dir = out.empty() ? "mfnls-out/" + mfnls::to_string(cfg.kind) : out;
    mfnls::write_report(dir, cfg, rep);
    print(rep);
    return rep.pass() ? kPass : kFail;
  } catch (const mfnls::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const mfnls::DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return kAbort;
  }
}
