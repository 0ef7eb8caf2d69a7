#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "levyfisher/asymptotics.hpp"

namespace levyfisher {

enum class Command { Density, Constants, Fisher, Sweep, Verify, Simulate };

std::string command_name(Command c);
Command parse_command(const std::string& s);

struct RunConfig {
  Command command = Command::Fisher;
  ModelParams model{1.0, 2.0, 0.0, 0.1};
  PerturbationSpec spec = NoPerturbation{};
  // Quadrature settings given as key=value overrides of the defaults.
  std::map<std::string, double> quadrature;
  std::string out_path;       // empty writes to stdout
  std::string format;         // csv or json; empty picks the command default

  std::vector<double> x{0.0};                 // density points
  std::vector<double> deltas;                 // sweep grid; empty uses the default
  Entry entry = Entry::SS;
  std::optional<TheoremId> theorem;           // sweep and verify
  std::vector<int> criteria;                  // verify; empty runs all when no theorem
  bool manifest = false;                      // verify: print the criteria manifest only
  std::uint64_t seed = 1;
  std::int64_t n = 10000;
  std::vector<std::string> free_params;       // simulate: run the MLE for these
  int reps = 0;                               // simulate: MLE replications

  QuadratureConfig quadrature_config() const;
};

nlohmann::json run_config_to_json(const RunConfig& c);
RunConfig run_config_from_json(const nlohmann::json& j);

// Applies one key=value override; throws ConfigError for unknown keys.
void apply_override(std::map<std::string, double>& q, const std::string& kv);

// Exit status: 0 success, 1 verification failure, 2 numerical error, 3 config error.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

int cli_main(int argc, char** argv);

}  // namespace levyfisher
