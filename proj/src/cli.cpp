#include "levyfisher/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "levyfisher/info_constants.hpp"
#include "levyfisher/montecarlo.hpp"
#include "levyfisher/verification.hpp"

namespace levyfisher {

namespace {

constexpr std::array<const char*, 6> kCommands{"density", "constants", "fisher", "sweep", "verify", "simulate"};

std::string sci(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

nlohmann::json num_or_null(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("not a number: " + item);
    }
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

FreeParam parse_free(const std::string& s) {
  if (s == "sigma") return FreeParam::Sigma;
  if (s == "theta") return FreeParam::Theta;
  throw ConfigError("free parameter must be sigma or theta: " + s);
}

// Picks the first theorem whose displays cover the entry for this spec.
std::optional<TheoremPrediction> auto_prediction(const RunConfig& c, const QuadratureConfig& q) {
  if (c.theorem) return predict(*c.theorem, c.entry, c.model, c.spec, q);
  for (int i = 0; i <= static_cast<int>(TheoremId::T10); ++i) {
    const auto id = static_cast<TheoremId>(i);
    if (id == TheoremId::T2c || id == TheoremId::T3bound) continue;
    try {
      return predict(id, c.entry, c.model, c.spec, q);
    } catch (const std::exception&) {
    }
  }
  return std::nullopt;
}

int cmd_density(const RunConfig& c, const QuadratureConfig& q, std::ostream& out, bool json) {
  const DensityModel model(c.model, c.spec, q);
  nlohmann::json rows = nlohmann::json::array();
  if (!json) out << "x,p,dp_dsigma,dp_dtheta,dp_dbeta,v\n";
  for (double x : c.x) {
    const DensityBundle b = model.bundle(x);
    if (json) {
      rows.push_back({{"x", x},
                      {"p", b.p},
                      {"dp_dsigma", b.dp_dsigma},
                      {"dp_dtheta", b.dp_dtheta},
                      {"dp_dbeta", num_or_null(b.dp_dbeta)},
                      {"v", num_or_null(b.v)}});
    } else {
      out << sci(x) << ',' << sci(b.p) << ',' << sci(b.dp_dsigma) << ',' << sci(b.dp_dtheta) << ','
          << (b.dp_dbeta ? sci(*b.dp_dbeta) : "") << ',' << (b.v ? sci(*b.v) : "") << '\n';
    }
  }
  if (json) out << rows.dump(2) << '\n';
  return 0;
}

int cmd_constants(const RunConfig& c, const QuadratureConfig& q, std::ostream& out, bool json) {
  const InfoConstants k = info_constants(c.model.beta, q);
  nlohmann::json j{{"beta", k.beta},
                   {"calI", k.calI},
                   {"calJ", k.calJ},
                   {"calK", num_or_null(k.calK)},
                   {"calM", num_or_null(k.calM)},
                   {"c_beta", c_beta(c.model.beta)},
                   {"warnings", k.warnings}};
  if (json) {
    out << j.dump(2) << '\n';
  } else {
    out << "beta,calI,calJ,calK,calM,c_beta\n"
        << sci(k.beta) << ',' << sci(k.calI) << ',' << sci(k.calJ) << ',' << (k.calK ? sci(*k.calK) : "") << ','
        << (k.calM ? sci(*k.calM) : "") << ',' << sci(c_beta(c.model.beta)) << '\n';
  }
  return 0;
}

int cmd_fisher(const RunConfig& c, const QuadratureConfig& q, std::ostream& out, bool json) {
  const FisherMatrix m = information_matrix(c.model, c.spec, q);
  std::vector<std::pair<std::string, Param>> rows{{"sigma", Param::Sigma}};
  if (m.beta_row_valid) rows.push_back({"beta", Param::Beta});
  if (m.theta_identified) rows.push_back({"theta", Param::Theta});
  if (json) {
    nlohmann::json entries = nlohmann::json::object(), errors = nlohmann::json::object();
    for (const auto& [na, a] : rows)
      for (const auto& [nb, b] : rows) {
        entries[na][nb] = m(a, b);
        errors[na][nb] = m.errors[static_cast<int>(a)][static_cast<int>(b)];
      }
    out << nlohmann::json{{"params", rows.size()},
                          {"entries", entries},
                          {"errors", errors},
                          {"beta_row_valid", m.beta_row_valid},
                          {"theta_identified", m.theta_identified},
                          {"ill_conditioned", m.ill_conditioned}}
               .dump(2)
        << '\n';
    return 0;
  }
  out << "param";
  for (const auto& r : rows) out << ',' << r.first;
  out << '\n';
  for (const auto& [na, a] : rows) {
    out << na;
    for (const auto& r : rows) out << ',' << sci(m(a, r.second));
    out << '\n';
  }
  return 0;
}

int cmd_sweep(const RunConfig& c, const QuadratureConfig& q, std::ostream& out, bool json) {
  const auto pred = auto_prediction(c, q);
  const Rate rate = pred ? pred->rate : Rate{};
  const double limit = pred ? pred->limit : NAN;
  const auto deltas = c.deltas.empty() ? default_deltas() : c.deltas;
  const SweepResult r = sweep(c.model, c.spec, c.entry, deltas, rate, q);
  auto ratio = [&](double v) { return std::isfinite(limit) && limit != 0.0 ? v / limit : NAN; };
  if (json) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < r.deltas.size(); ++i)
      rows.push_back({{"delta", r.deltas[i]},
                      {"entry", entry_name(c.entry)},
                      {"normalized", r.normalized[i]},
                      {"predicted_limit", num_or_null(limit)},
                      {"ratio", num_or_null(ratio(r.normalized[i]))}});
    out << nlohmann::json{{"theorem", pred ? nlohmann::json(theorem_name(pred->theorem)) : nlohmann::json()},
                          {"rate", {{"exponent", rate.exponent}, {"log_power", rate.log_power}}},
                          {"rows", rows},
                          {"fitted_exponent", r.fitted_exponent},
                          {"fitted_log_power", r.fitted_log_power},
                          {"log_power_kept", r.fit.log_power_kept},
                          {"extrapolated_limit", r.extrapolated_limit},
                          {"richardson_limit", r.richardson_limit}}
               .dump(2)
        << '\n';
    return 0;
  }
  out << "delta,entry,normalized,predicted_limit,ratio\n";
  for (std::size_t i = 0; i < r.deltas.size(); ++i)
    out << sci(r.deltas[i]) << ',' << entry_name(c.entry) << ',' << sci(r.normalized[i]) << ',' << sci(limit) << ','
        << sci(ratio(r.normalized[i])) << '\n';
  return 0;
}

std::string csv_text(std::string s) {
  for (auto& ch : s)
    if (ch == ',' || ch == '\n') ch = ';';
  return s;
}

int cmd_verify(const RunConfig& c, const QuadratureConfig& q, std::ostream& out, bool json) {
  if (c.manifest) {
    out << manifest_json().dump(2) << '\n';
    return 0;
  }
  bool all_ok = true;
  if (c.theorem) {
    const PerturbationSpec spec =
        std::holds_alternative<NoPerturbation>(c.spec) ? default_spec_for(*c.theorem, c.model.beta) : c.spec;
    ModelParams p = c.model;
    if (p.theta == 0.0) p.theta = 1.0;
    const auto rows = verify_theorem(*c.theorem, p, spec, c.deltas.empty() ? default_deltas() : c.deltas, q);
    nlohmann::json jr = nlohmann::json::array();
    if (!json) out << "theorem,entry,kind,delta,observed,predicted,lower,tolerance,passed,note\n";
    for (const auto& r : rows) {
      all_ok = all_ok && r.passed;
      if (json) {
        jr.push_back({{"theorem", theorem_name(r.theorem)},
                      {"entry", entry_name(r.entry)},
                      {"kind", r.kind},
                      {"delta", r.delta},
                      {"observed", r.observed},
                      {"predicted", r.predicted},
                      {"lower", r.lower},
                      {"tolerance", r.tolerance},
                      {"passed", r.passed},
                      {"note", r.note}});
      } else {
        out << theorem_name(r.theorem) << ',' << entry_name(r.entry) << ',' << r.kind << ',' << sci(r.delta) << ','
            << sci(r.observed) << ',' << sci(r.predicted) << ',' << sci(r.lower) << ',' << sci(r.tolerance) << ','
            << (r.passed ? "true" : "false") << ',' << csv_text(r.note) << '\n';
      }
    }
    if (json) out << jr.dump(2) << '\n';
    return all_ok ? 0 : 1;
  }
  std::vector<int> ids = c.criteria;
  if (ids.empty())
    for (const auto& info : criteria_manifest()) ids.push_back(info.id);
  nlohmann::json jr = nlohmann::json::array();
  if (!json) out << "id,name,passed,seconds,details\n";
  for (int id : ids) {
    const CheckResult r = run_criterion(id, q);
    all_ok = all_ok && r.passed;
    if (json) {
      jr.push_back(
          {{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"seconds", r.seconds}, {"details", r.details}});
    } else {
      std::string d;
      for (const auto& line : r.details) d += (d.empty() ? "" : " | ") + csv_text(line);
      out << r.id << ',' << r.name << ',' << (r.passed ? "true" : "false") << ',' << sci(r.seconds) << ',' << d
          << '\n';
    }
    out.flush();
  }
  if (json) out << jr.dump(2) << '\n';
  return all_ok ? 0 : 1;
}

int cmd_simulate(const RunConfig& c, const QuadratureConfig& q, std::ostream& out, bool json) {
  SimConfig sc;
  sc.seed = c.seed;
  sc.n = c.n;
  sc.params = c.model;
  sc.spec = c.spec;
  const auto sample = sample_increments(sc);
  nlohmann::json j{{"seed", c.seed}, {"n", c.n}, {"spec", spec_to_json(c.spec)}};
  double mean = 0.0;
  for (double x : sample) mean += x;
  j["sample_mean"] = mean / static_cast<double>(sample.size());

  const ScoreMoment e = empirical_information(sc, sample, c.entry, q);
  FisherOptions fo;
  fo.skip_beta = c.entry != Entry::SB && c.entry != Entry::BB && c.entry != Entry::BT;
  ModelParams mp = c.model;
  double quad = 0.0;
  if (c.entry == Entry::Mult)
    quad = multiplicative_information(mp, c.spec, q);
  else
    quad = entry_value(information_matrix(mp, c.spec, q, fo), c.entry);
  j["information"] = {{"entry", entry_name(c.entry)},
                      {"empirical", e.value},
                      {"standard_error", e.standard_error},
                      {"quadrature", quad},
                      {"z", (e.value - quad) / e.standard_error},
                      {"score_mean", e.score_mean},
                      {"score_mean_se", e.score_mean_se}};
  if (!c.free_params.empty()) {
    std::vector<FreeParam> fp;
    for (const auto& s : c.free_params) fp.push_back(parse_free(s));
    nlohmann::json est = nlohmann::json::array();
    for (const auto& r : mle(sc, sample, fp, q))
      est.push_back({{"param", r.param == FreeParam::Sigma ? "sigma" : "theta"},
                     {"estimate", r.estimate},
                     {"standard_error", r.standard_error},
                     {"n_used", r.n_used},
                     {"predicted_variance", r.predicted_variance}});
    j["mle"] = est;
    if (c.reps > 1) {
      const auto s = mle_replications(sc, fp, c.reps, q);
      j["replications"] = {{"reps", c.reps},
                           {"mean", s.mean},
                           {"variance", s.variance},
                           {"predicted_variance", s.predicted_variance},
                           {"ratio", s.ratio}};
    }
  }
  if (json) {
    out << j.dump(2) << '\n';
  } else {
    const auto& inf = j["information"];
    out << "entry,empirical,standard_error,quadrature,z\n"
        << entry_name(c.entry) << ',' << sci(inf["empirical"]) << ',' << sci(inf["standard_error"]) << ','
        << sci(inf["quadrature"]) << ',' << sci(inf["z"]) << '\n';
  }
  return 0;
}

}  // namespace

std::string command_name(Command c) { return kCommands[static_cast<int>(c)]; }

Command parse_command(const std::string& s) {
  for (std::size_t i = 0; i < kCommands.size(); ++i)
    if (s == kCommands[i]) return static_cast<Command>(i);
  throw ConfigError("unknown command: " + s);
}

QuadratureConfig RunConfig::quadrature_config() const {
  QuadratureConfig q;
  for (const auto& [k, v] : quadrature) {
    if (k == "rel_tol")
      q.rel_tol = v;
    else if (k == "abs_tol")
      q.abs_tol = v;
    else if (k == "max_panels")
      q.max_panels = static_cast<int>(v);
    else if (k == "u_truncation")
      q.u_truncation = v;
    else if (k == "x_truncation")
      q.x_truncation = v;
    else if (k == "fd_step")
      q.fd_step = v;
    else
      throw ConfigError("unknown quadrature setting: " + k);
  }
  q.validate();
  return q;
}

void apply_override(std::map<std::string, double>& q, const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos) throw ConfigError("override must look like key=value: " + kv);
  const std::string key = kv.substr(0, eq);
  const auto val = parse_list(kv.substr(eq + 1));
  if (val.size() != 1) throw ConfigError("override takes one value: " + kv);
  static const std::array<const char*, 6> keys{"rel_tol", "abs_tol", "max_panels", "u_truncation", "x_truncation",
                                               "fd_step"};
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError("unknown quadrature setting: " + key);
  q[key] = val.front();
}

nlohmann::json run_config_to_json(const RunConfig& c) {
  nlohmann::json j;
  j["command"] = command_name(c.command);
  j["model"] = {{"sigma", c.model.sigma}, {"beta", c.model.beta}, {"theta", c.model.theta}, {"delta", c.model.delta}};
  j["spec"] = spec_to_json(c.spec);
  j["quadrature"] = c.quadrature;
  j["output"] = {{"path", c.out_path}, {"format", c.format}};
  j["x"] = c.x;
  j["deltas"] = c.deltas;
  j["entry"] = entry_name(c.entry);
  j["theorem"] = c.theorem ? nlohmann::json(theorem_name(*c.theorem)) : nlohmann::json();
  j["criteria"] = c.criteria;
  j["manifest"] = c.manifest;
  j["seed"] = c.seed;
  j["n"] = c.n;
  j["free"] = c.free_params;
  j["reps"] = c.reps;
  return j;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  try {
    if (j.contains("command")) c.command = parse_command(j.at("command").get<std::string>());
    if (j.contains("model")) {
      const auto& m = j.at("model");
      c.model.sigma = m.value("sigma", c.model.sigma);
      c.model.beta = m.value("beta", c.model.beta);
      c.model.theta = m.value("theta", c.model.theta);
      c.model.delta = m.value("delta", c.model.delta);
    }
    if (j.contains("spec")) c.spec = spec_from_json(j.at("spec"));
    if (j.contains("quadrature"))
      for (const auto& [k, v] : j.at("quadrature").items()) apply_override(c.quadrature, k + "=" + v.dump());
    if (j.contains("output")) {
      c.out_path = j.at("output").value("path", std::string());
      c.format = j.at("output").value("format", std::string());
    }
    if (j.contains("x")) c.x = j.at("x").get<std::vector<double>>();
    if (j.contains("deltas")) c.deltas = j.at("deltas").get<std::vector<double>>();
    if (j.contains("entry")) c.entry = parse_entry(j.at("entry").get<std::string>());
    if (j.contains("theorem") && !j.at("theorem").is_null())
      c.theorem = parse_theorem(j.at("theorem").get<std::string>());
    if (j.contains("criteria")) c.criteria = j.at("criteria").get<std::vector<int>>();
    c.manifest = j.value("manifest", false);
    c.seed = j.value("seed", c.seed);
    c.n = j.value("n", c.n);
    if (j.contains("free")) c.free_params = j.at("free").get<std::vector<std::string>>();
    c.reps = j.value("reps", c.reps);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return c;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const QuadratureConfig q = config.quadrature_config();
    config.model.validate();
    validate_spec(config.spec);
    std::string fmt = config.format;
    if (fmt.empty())
      fmt = (config.command == Command::Constants || config.command == Command::Simulate) ? "json" : "csv";
    if (fmt != "csv" && fmt != "json") throw ConfigError("format must be csv or json");
    const bool json = fmt == "json";

    std::ofstream file;
    std::ostream* os = &out;
    if (!config.out_path.empty()) {
      file.open(config.out_path);
      if (!file) throw ConfigError("cannot write " + config.out_path);
      os = &file;
    }
    switch (config.command) {
      case Command::Density:
        return cmd_density(config, q, *os, json);
      case Command::Constants:
        return cmd_constants(config, q, *os, json);
      case Command::Fisher:
        return cmd_fisher(config, q, *os, json);
      case Command::Sweep:
        return cmd_sweep(config, q, *os, json);
      case Command::Verify:
        return cmd_verify(config, q, *os, json);
      case Command::Simulate:
        return cmd_simulate(config, q, *os, json);
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 3;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return 2;
  }
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Fisher information for a stable process observed with a perturbation"};
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::string config_file, spec_text, deltas_text, entry_text, format, out_path, theorem_text, x_text, free_text,
      criteria_text;
  double sigma = 0, beta = 0, theta = 0, delta = 0;
  std::uint64_t seed = 0;
  std::int64_t n = 0;
  int reps = 0;
  std::vector<std::string> overrides;
  bool manifest = false;

  app.add_option("--config", config_file, "JSON run configuration; flags override its values");
  auto* o_sigma = app.add_option("--sigma", sigma, "scale of the stable part");
  auto* o_beta = app.add_option("--beta", beta, "stable index in (0, 2]");
  auto* o_theta = app.add_option("--theta", theta, "perturbation coefficient");
  auto* o_delta = app.add_option("--delta", delta, "sampling interval");
  auto* o_spec = app.add_option("--spec", spec_text, "perturbation: JSON, file, or none|drift|poisson|cp|stable:<a>");
  auto* o_deltas = app.add_option("--deltas", deltas_text, "comma separated sweep grid");
  auto* o_entry = app.add_option("--entry", entry_text, "ss|sb|bb|st|bt|tt|mult");
  auto* o_seed = app.add_option("--seed", seed, "random seed");
  auto* o_n = app.add_option("--n", n, "sample size");
  auto* o_out = app.add_option("--out", out_path, "output file");
  auto* o_format = app.add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--tol-override", overrides, "quadrature setting key=value (repeatable)");
  auto* o_x = app.add_option("--x", x_text, "density: comma separated points");
  auto* o_theorem = app.add_option("--theorem", theorem_text, "sweep/verify: theorem id such as T5 or T7_SS1");
  auto* o_criteria = app.add_option("--criterion", criteria_text, "verify: comma separated criterion ids");
  app.add_flag("--manifest", manifest, "verify: print the criteria manifest");
  auto* o_free = app.add_option("--free", free_text, "simulate: run the MLE for sigma, theta or sigma,theta");
  auto* o_reps = app.add_option("--reps", reps, "simulate: MLE replications");

  std::vector<CLI::App*> subs;
  for (const char* name : kCommands) subs.push_back(app.add_subcommand(name, std::string("run ") + name));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    RunConfig c;
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw ConfigError("cannot read " + config_file);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
      }
      c = run_config_from_json(j);
    }
    bool have_command = !config_file.empty();
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (subs[i]->parsed()) {
        c.command = static_cast<Command>(i);
        have_command = true;
      }
    if (!have_command) throw ConfigError("choose a command: density, constants, fisher, sweep, verify, simulate");
    if (o_sigma->count()) c.model.sigma = sigma;
    if (o_beta->count()) c.model.beta = beta;
    if (o_theta->count()) c.model.theta = theta;
    if (o_delta->count()) c.model.delta = delta;
    if (o_spec->count()) c.spec = parse_spec(spec_text);
    if (o_deltas->count()) c.deltas = parse_list(deltas_text);
    if (o_entry->count()) c.entry = parse_entry(entry_text);
    if (o_seed->count()) c.seed = seed;
    if (o_n->count()) c.n = n;
    if (o_out->count()) c.out_path = out_path;
    if (o_format->count()) c.format = format;
    for (const auto& kv : overrides) apply_override(c.quadrature, kv);
    if (o_x->count()) c.x = parse_list(x_text);
    if (o_theorem->count()) c.theorem = parse_theorem(theorem_text);
    if (o_criteria->count()) {
      c.criteria.clear();
      for (double v : parse_list(criteria_text)) c.criteria.push_back(static_cast<int>(v));
    }
    if (manifest) c.manifest = true;
    if (o_free->count()) c.free_params = split(free_text);
    if (o_reps->count()) c.reps = reps;
    return run(c, std::cout, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace levyfisher
