#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mfnls/errors.hpp"
#include "mfnls/runner.hpp"

using namespace mfnls;
namespace fs = std::filesystem;

namespace {

std::string error_of(const json& j, std::optional<ExperimentKind> k = std::nullopt) {
  try {
    parse_config(j, k);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("kind names") {
  for (auto k : {ExperimentKind::convergence, ExperimentKind::energy_suite, ExperimentKind::collapse_suite,
                 ExperimentKind::lens_suite, ExperimentKind::bbgky_residual, ExperimentKind::nls_validate})
    CHECK(kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(kind_from_string("plot"), ConfigError);
}

TEST_CASE("defaults and overrides") {
  const auto c = parse_config(json{{"kind", "convergence"}});
  CHECK(c.Ns == std::vector<int>{2, 3, 4});
  CHECK(c.potential.beta == 0.3);
  const auto e = parse_config(json::object(), ExperimentKind::energy_suite);
  CHECK(e.omega == 1.0);
  CHECK(e.n == 16);
  const auto o = parse_config(json{{"grid", {{"n", 16}}}, {"beta", 0.4}, {"potential", {{"shape", "mixed_sign"}, {"r", 0.5}}}},
                              ExperimentKind::convergence);
  CHECK(o.n == 16);
  CHECK(o.potential.beta == 0.4);
  CHECK(o.potential.shape == PotentialShape::mixed_sign);
  // canonical form parses back to itself
  CHECK(config_to_json(parse_config(config_to_json(o))) == config_to_json(o));
}

TEST_CASE("errors name the field path") {
  CHECK(error_of(json::object()).find("config.kind") != std::string::npos);
  CHECK(error_of(json{{"kind", "lens_suite"}}, ExperimentKind::energy_suite).find("config.kind") != std::string::npos);
  CHECK(error_of(json{{"grid", {{"m", 3}}}}, ExperimentKind::convergence).find("config.grid.m: unknown field") !=
        std::string::npos);
  CHECK(error_of(json{{"N", {2, "three"}}}, ExperimentKind::convergence).find("config.N[1]") != std::string::npos);
  CHECK(error_of(json{{"grid", {{"n", 24}}}}, ExperimentKind::convergence).find("config.grid.n") != std::string::npos);
  CHECK(error_of(json{{"dt", 0.03}}, ExperimentKind::convergence).find("config.T") != std::string::npos);
  CHECK(error_of(json{{"grid", {{"L", 2.0}}}}, ExperimentKind::convergence).find("config.potential") !=
        std::string::npos);
  CHECK(error_of(json{{"potential", {{"shape", "square"}}}}, ExperimentKind::convergence)
            .find("config.potential.shape") != std::string::npos);
  CHECK(error_of(json{{"epsilon", {0.25, 0.7}}}, ExperimentKind::collapse_suite).find("config.epsilon[1]") !=
        std::string::npos);
  CHECK(error_of(json{{"seed", -4}}, ExperimentKind::lens_suite).find("config.seed") != std::string::npos);
}

TEST_CASE("schema lists every canonical field") {
  const json s = config_schema();
  const json c = config_to_json(default_config(ExperimentKind::collapse_suite));
  for (auto it = c.begin(); it != c.end(); ++it) CHECK(s["properties"].contains(it.key()));
  CHECK(s["properties"].contains("threads"));
}

TEST_CASE("informational lines never fail a report") {
  Report r;
  r.checks.push_back({"a", true, true, 1.0, 2.0, ""});
  r.checks.push_back({"b", false, false, 1.0, 0.0, ""});
  CHECK(r.pass());
  r.checks.push_back({"c", true, false, 3.0, 2.0, ""});
  CHECK_FALSE(r.pass());
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
  const fs::path base = fs::temp_directory_path() / "mfnls_test_runner";
  fs::remove_all(base);
  json j{{"T", 0.04}, {"dts", {0.02, 0.01}}, {"N", {2, 3}}, {"seed", 17}};
  auto c1 = parse_config(j, ExperimentKind::bbgky_residual);
  j["threads"] = 3;
  auto c3 = parse_config(j, ExperimentKind::bbgky_residual);
  write_report(base / "a", c1, run_experiment(c1));
  write_report(base / "b", c3, run_experiment(c3));
  write_report(base / "c", c1, run_experiment(c1));
  for (const char* f : {"summary.json", "bbgky_residual.csv"}) {
    CHECK(slurp(base / "a" / f) == slurp(base / "b" / f));
    CHECK(slurp(base / "a" / f) == slurp(base / "c" / f));
  }
  const json s = json::parse(slurp(base / "a" / "summary.json"));
  CHECK(s["config_hash"].get<std::string>().size() == 16);
  CHECK(s.contains("conventions"));
  CHECK(s["modules"].contains("collapse_checks"));
  CHECK(slurp(base / "a" / "bbgky_residual.csv").rfind("# kind=bbgky_residual\n# config_hash=", 0) == 0);

  // a different seed changes the hash
  j["seed"] = 18;
  CHECK(config_hash(config_to_json(parse_config(j, ExperimentKind::bbgky_residual))) !=
        config_hash(config_to_json(c1)));
}

TEST_CASE("mixed_sign control of the convergence experiment") {
  // integral zero: the mean field vanishes, distances are reported, not asserted
  json j{{"potential", {{"shape", "mixed_sign"}, {"r", 0.5}}}, {"N", {2, 3}}, {"grid", {{"n", 16}}}, {"T", 0.2}, {"outputs", 2}};
  const auto c = parse_config(j, ExperimentKind::convergence);
  const Report r = run_experiment(c);
  CHECK(r.pass());
  bool control = false;
  for (const auto& ch : r.checks)
    if (ch.name.rfind("control_spread", 0) == 0) {
      control = true;
      CHECK_FALSE(ch.assertable);
      CHECK(ch.value < 0.05);
    }
  CHECK(control);
  CHECK(r.tables.size() == 2);
  CHECK(r.tables[0].rows.size() == 3);
}
