#include <doctest.h>

#include <fstream>
#include <sstream>

#include "compop/errors.hpp"
#include "compop/experiment.hpp"

using namespace compop;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string config_error(const std::string& text) {
  try {
    parse_config(text, "run.json");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    return e.what();
  }
  FAIL("no error for: " << text);
  return {};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("compop_cli_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("config round trip") {
  for (const auto& name : preset_names()) {
    const Preset p = preset(name);
    const json j = to_json(p.config);
    const ExperimentConfig back = parse_config(j.dump(), name);
    CHECK(to_json(back) == j);
  }
  const auto c = parse_config(R"({"schema_version": 1, "experiment": "x",
      "symbol": {"variant": "polynomial", "coefficients": [[0.5, 0], [0.25, 0]]},
      "params": {"taylor_N": 4}, "seed": 7, "output": "o"})");
  CHECK(c.seed == 7u);
  CHECK(c.output == "o");
  CHECK(to_json(parse_config(to_json(c).dump())) == to_json(c));
}

TEST_CASE("syntax errors carry line and column") {
  const std::string msg = config_error("{\n  \"schema_version\": 1,\n  \"experiment\": ,\n}");
  CHECK(msg.find("run.json:3:") != std::string::npos);
}

TEST_CASE("schema errors name the field") {
  CHECK(config_error(R"({"experiment": "x"})").find("'schema_version'") != std::string::npos);
  CHECK(config_error(R"({"schema_version": 2})").find("unsupported") != std::string::npos);
  CHECK(config_error(R"({"schema_version": 1, "sead": 3})").find("'sead': unknown field") != std::string::npos);
  CHECK(config_error(R"({"schema_version": 1, "seed": -3})").find("'seed'") != std::string::npos);
  CHECK(config_error(R"({"schema_version": 1, "experiment": "../x"})").find("'experiment'") != std::string::npos);
  const std::string msg = config_error(
      R"({"schema_version": 1, "symbol": {"variant": "outer", "weight": {"family": "power", "c": 1}, "set": {"arcs": [[0, 0]]}}})");
  CHECK(msg.find("gamma") != std::string::npos);
}

TEST_CASE("parameter errors surface at run time with params paths") {
  const fs::path out = scratch("params");
  auto cfg = parse_config(R"({"schema_version": 1, "params": {"operator": "hankel"}})");
  try {
    run_experiment("spectrum", cfg, out);
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("'params.operator': unknown value 'hankel'") != std::string::npos);
  }
  cfg = parse_config(R"({"schema_version": 1, "params": {"task": "estimate", "set": {"arcs": [[0, 1]]}, "alpha": "half"}})");
  CHECK_THROWS_WITH_AS(run_experiment("capacity", cfg, out), doctest::Contains("'params.alpha'"), Error);
}

TEST_CASE("Monte Carlo runs need a seed") {
  auto cfg = preset("one-point-linear-h").config;
  cfg.seed.reset();
  CHECK_THROWS_WITH_AS(run_experiment("criteria", cfg, scratch("seed")), doctest::Contains("'seed'"), Error);
}

TEST_CASE("unknown preset lists the valid names") {
  CHECK_THROWS_WITH_AS(preset("nope"), doctest::Contains("arc-capacity"), Error);
}

TEST_CASE("symbol subcommand writes evaluations and Taylor coefficients") {
  const fs::path out = scratch("symbol");
  const auto cfg = parse_config(R"({"schema_version": 1, "experiment": "poly",
      "symbol": {"variant": "polynomial", "coefficients": [[0, 0], [0.5, 0], [0.25, 0]]},
      "params": {"points": [[0.5, 0]], "taylor_N": 4}})");
  const RunResult r = run_experiment("symbol", cfg, out);
  CHECK(r.exit_code == 0);
  const std::string eval = slurp(out / "poly" / "eval.csv");
  // φ(1/2) = 1/4 + 1/16, φ'(1/2) = 1/2 + 1/4
  CHECK(eval.find("0.5,0,0.3125,0,0.75,0") != std::string::npos);
  CHECK(slurp(out / "poly" / "taylor.csv").find("2,0.25,0") != std::string::npos);
}

TEST_CASE("preset outputs are reproducible byte for byte") {
  for (const char* name : {"scaled-rotation-exact", "rank-one-toeplitz", "cantor-logpower", "weak-type-suite"}) {
    const Preset p = preset(name);
    const fs::path a = scratch(std::string(name) + "_a"), b = scratch(std::string(name) + "_b");
    const RunResult ra = run_experiment(p.command, p.config, a);
    const RunResult rb = run_experiment(p.command, p.config, b);
    CHECK(ra.exit_code == rb.exit_code);
    REQUIRE(ra.files.size() == rb.files.size());
    for (std::size_t i = 0; i < ra.files.size(); ++i) {
      CHECK(ra.files[i].filename() == rb.files[i].filename());
      CHECK(slurp(ra.files[i]) == slurp(rb.files[i]));
    }
  }
}

TEST_CASE("scaled rotation preset reproduces s_n = 0.5^n") {
  const Preset p = preset("scaled-rotation-exact");
  const fs::path out = scratch("rotation");
  const RunResult r = run_experiment(p.command, p.config, out);
  CHECK(r.exit_code == 0);
  std::istringstream csv(slurp(out / "scaled-rotation-exact" / "spectrum.csv"));
  std::string line;
  std::getline(csv, line);
  int n = 0;
  while (std::getline(csv, line) && n < 40) {
    const double s = std::stod(line.substr(line.find(',') + 1));
    CHECK(s == doctest::Approx(std::pow(0.5, n)).epsilon(1e-12));
    ++n;
  }
  CHECK(n == 40);
}
