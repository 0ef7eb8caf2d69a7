#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "levyfisher/cli.hpp"

using namespace levyfisher;

namespace {

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

int run_args(std::vector<std::string> args) {
  args.insert(args.begin(), "levyfisher");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("config round trip") {
  RunConfig c;
  c.command = Command::Sweep;
  c.model = {1.3, 1.5, 0.7, 0.05};
  c.spec = CompoundPoisson{2.0, JumpDensity::laplace(0.5)};
  c.quadrature["rel_tol"] = 1e-9;
  c.deltas = {0.1, 0.01};
  c.entry = Entry::TT;
  c.theorem = TheoremId::T6;
  c.seed = 99;
  c.free_params = {"sigma", "theta"};
  const auto j = run_config_to_json(c);
  const auto back = run_config_from_json(j);
  CHECK(run_config_to_json(back) == j);
  CHECK(back.quadrature_config().rel_tol == 1e-9);
  CHECK(back.model.theta == 0.7);
  CHECK(back.spec.index() == 3);
}

TEST_CASE("overrides") {
  std::map<std::string, double> q;
  apply_override(q, "max_panels=8000");
  CHECK(q.at("max_panels") == 8000.0);
  CHECK_THROWS_AS(apply_override(q, "speed=2"), ConfigError);
  CHECK_THROWS_AS(apply_override(q, "rel_tol"), ConfigError);
  CHECK_THROWS_AS(run_config_from_json(nlohmann::json::array()), ConfigError);
  CHECK_THROWS_AS(run_config_from_json(nlohmann::json{{"command", "plot"}}), ConfigError);
}

TEST_CASE("fisher with drift prints the closed form") {
  RunConfig c;
  c.command = Command::Fisher;
  c.model = {1.0, 2.0, 1.0, 0.25};
  c.spec = UnitDrift{};
  std::ostringstream out, err;
  REQUIRE(run(c, out, err) == 0);
  const auto rows = csv_rows(out.str());
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"param", "sigma", "theta"});
  CHECK(std::stod(rows[1][1]) == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(std::stod(rows[2][2]) == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(std::abs(std::stod(rows[1][2])) < 1e-6);
}

TEST_CASE("constants as json") {
  RunConfig c;
  c.command = Command::Constants;
  c.model.beta = 2.0;
  std::ostringstream out, err;
  REQUIRE(run(c, out, err) == 0);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j.at("calK").is_null());
  CHECK(j.at("calI").get<double>() == doctest::Approx(2.0));
}

TEST_CASE("density output") {
  RunConfig c;
  c.command = Command::Density;
  c.model = {2.0, 1.0, 0.0, 4.0};
  c.x = {0.0, 1.0};
  c.format = "json";
  std::ostringstream out, err;
  REQUIRE(run(c, out, err) == 0);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j.size() == 2);
  CHECK(j[0].at("p").get<double>() == doctest::Approx(0.0795774715).epsilon(1e-8));
}

TEST_CASE("exit codes") {
  std::ostringstream out, err;
  RunConfig bad;
  bad.model.sigma = -1.0;
  CHECK(run(bad, out, err) == 3);
  RunConfig fmt;
  fmt.format = "xml";
  CHECK(run(fmt, out, err) == 3);
  RunConfig hyp;
  hyp.command = Command::Sweep;
  hyp.model = {1.0, 1.5, 1.0, 0.1};
  hyp.spec = SymmetricStable{1.0};
  hyp.theorem = TheoremId::T7_SS1;
  CHECK(run(hyp, out, err) == 2);
  CHECK(run_args({"fisher", "--sigma", "-1"}) == 3);
  CHECK(run_args({"fisher", "--bogus"}) == 3);
  CHECK(run_args({"--beta", "1.5"}) == 3);
}

TEST_CASE("command line overrides a config file") {
  const char* path = "cli_test_config.json";
  const char* out_path = "cli_test_out.json";
  RunConfig c;
  c.command = Command::Constants;
  c.model.beta = 1.5;
  {
    std::ofstream f(path);
    f << run_config_to_json(c).dump();
  }
  REQUIRE(run_args({"--config", path, "--beta", "1", "--out", out_path}) == 0);
  std::ifstream in(out_path);
  const auto j = nlohmann::json::parse(in);
  CHECK(j.at("beta").get<double>() == 1.0);
  CHECK(j.at("calI").get<double>() == doctest::Approx(0.5).epsilon(1e-8));
  std::remove(path);
  std::remove(out_path);
}

TEST_CASE("manifest") {
  RunConfig c;
  c.command = Command::Verify;
  c.manifest = true;
  std::ostringstream out, err;
  REQUIRE(run(c, out, err) == 0);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j.size() == 12);
}
