#include "levyfisher/levy_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <fstream>
#include <sstream>

namespace levyfisher {

using nlohmann::json;

std::string spec_name(const PerturbationSpec& spec) {
  switch (spec.index()) {
    case 0:
      return "none";
    case 1:
      return "unit_drift";
    case 2:
      return "standard_poisson";
    case 3:
      return "compound_poisson";
    default:
      return "symmetric_stable";
  }
}

void validate_spec(const PerturbationSpec& spec) {
  if (const auto* cp = std::get_if<CompoundPoisson>(&spec)) {
    if (!(cp->lambda > 0.0) || !std::isfinite(cp->lambda)) throw ConfigError("lambda must be positive");
    cp->jumps.check_regularity();
  }
  if (const auto* ss = std::get_if<SymmetricStable>(&spec)) {
    if (!(ss->alpha > 0.0 && ss->alpha < 2.0)) throw ConfigError("stable perturbation index must lie in (0, 2)");
  }
}

void validate_pairing(const PerturbationSpec& spec, double beta) {
  validate_spec(spec);
  if (const auto* ss = std::get_if<SymmetricStable>(&spec)) {
    if (!(ss->alpha < beta)) throw ConfigError("stable perturbation index must be below beta");
  }
}

json spec_to_json(const PerturbationSpec& spec) {
  json j;
  j["variant"] = spec_name(spec);
  if (const auto* cp = std::get_if<CompoundPoisson>(&spec)) {
    j["lambda"] = cp->lambda;
    json jd;
    jd["kind"] = cp->jumps.name();
    if (cp->jumps.kind() == JumpDensity::Kind::Gaussian)
      jd["sigma"] = cp->jumps.scale();
    else
      jd["scale"] = cp->jumps.scale();
    j["jump_density"] = jd;
  }
  if (const auto* ss = std::get_if<SymmetricStable>(&spec)) j["alpha"] = ss->alpha;
  return j;
}

PerturbationSpec spec_from_json(const json& j) {
  if (!j.is_object() || !j.contains("variant") || !j["variant"].is_string())
    throw ConfigError("perturbation spec needs a string field 'variant'");
  const std::string v = j["variant"].get<std::string>();
  auto number = [&](const json& obj, const char* key, double fallback, bool required) {
    if (!obj.contains(key)) {
      if (required) throw ConfigError(std::string("perturbation spec is missing '") + key + "'");
      return fallback;
    }
    if (!obj[key].is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
    return obj[key].get<double>();
  };
  PerturbationSpec out;
  if (v == "none") {
    out = NoPerturbation{};
  } else if (v == "unit_drift" || v == "drift") {
    out = UnitDrift{};
  } else if (v == "standard_poisson" || v == "poisson") {
    out = StandardPoisson{};
  } else if (v == "compound_poisson") {
    CompoundPoisson cp;
    cp.lambda = number(j, "lambda", 1.0, false);
    if (j.contains("jump_density")) {
      const json& jd = j["jump_density"];
      if (!jd.is_object() || !jd.contains("kind") || !jd["kind"].is_string())
        throw ConfigError("jump_density needs a string field 'kind'");
      const std::string kind = jd["kind"].get<std::string>();
      if (kind == "gaussian" || kind == "normal") {
        cp.jumps = JumpDensity::gaussian(number(jd, "sigma", 1.0, false));
      } else if (kind == "laplace" || kind == "double_exponential") {
        cp.jumps = JumpDensity::laplace(number(jd, "scale", 1.0, false));
      } else {
        throw ConfigError("unknown jump density kind '" + kind + "'");
      }
    }
    out = cp;
  } else if (v == "symmetric_stable" || v == "stable") {
    out = SymmetricStable{number(j, "alpha", 0.0, true)};
  } else {
    throw ConfigError("unknown perturbation variant '" + v + "'");
  }
  validate_spec(out);
  return out;
}

PerturbationSpec parse_spec(const std::string& text) {
  if (text == "none") return NoPerturbation{};
  if (text == "drift" || text == "unit_drift") return UnitDrift{};
  if (text == "poisson" || text == "standard_poisson") return StandardPoisson{};
  if (text == "cp" || text == "compound_poisson") return CompoundPoisson{};
  if (text.rfind("stable:", 0) == 0) {
    try {
      return spec_from_json(json{{"variant", "symmetric_stable"}, {"alpha", std::stod(text.substr(7))}});
    } catch (const std::invalid_argument&) {
      throw ConfigError("cannot parse stable index in '" + text + "'");
    }
  }
  std::string body = text;
  if (!text.empty() && text.front() != '{') {
    std::ifstream in(text);
    if (!in) throw ConfigError("spec is neither JSON, a shorthand, nor a readable file: " + text);
    std::stringstream ss;
    ss << in.rdbuf();
    body = ss.str();
  }
  try {
    return spec_from_json(json::parse(body));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed spec JSON: ") + e.what());
  }
}

LevyTriple levy_triple(const PerturbationSpec& spec) {
  LevyTriple t;
  t.levy_measure_tail = [](double) { return 0.0; };
  t.truncated_second_moment = [](double) { return 0.0; };
  if (std::holds_alternative<UnitDrift>(spec)) t.b = 1.0;
  if (std::holds_alternative<StandardPoisson>(spec)) {
    t.b = 1.0;
    t.levy_measure_tail = [](double x) { return x < 1.0 ? 1.0 : 0.0; };
    t.truncated_second_moment = [](double x) { return x >= 1.0 ? 1.0 : 0.0; };
  }
  if (const auto* cp = std::get_if<CompoundPoisson>(&spec)) {
    const double lambda = cp->lambda;
    const JumpDensity f = cp->jumps;
    t.levy_measure_tail = [lambda, f](double x) { return lambda * f.tail(x); };
    t.truncated_second_moment = [lambda, f](double x) {
      // lambda * E[J^2; |J| <= x] for the even jump law.
      const double s = f.scale();
      if (f.kind() == JumpDensity::Kind::Gaussian) {
        const double z = x / s;
        return lambda * s * s * (std::erf(z / std::sqrt(2.0)) - 2.0 * z * std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi));
      }
      const double z = x / s;
      return lambda * s * s * (2.0 - std::exp(-z) * (z * z + 2.0 * z + 2.0));
    };
  }
  if (const auto* ss = std::get_if<SymmetricStable>(&spec)) {
    const double a = ss->alpha;
    const double c = c_beta(a);
    t.levy_measure_tail = [a, c](double x) { return 2.0 * c / (a * std::pow(x, a)); };
    t.truncated_second_moment = [a, c](double x) { return 2.0 * c * std::pow(x, 2.0 - a) / (2.0 - a); };
  }
  return t;
}

std::vector<double> default_membership_grid() {
  std::vector<double> g;
  for (int j = 0; j <= 24; ++j) g.push_back(std::pow(10.0, -0.5 * j));
  return g;
}

ClassMembershipReport class_membership(const PerturbationSpec& spec, double alpha, const std::vector<double>& test_grid,
                                       double threshold) {
  if (test_grid.empty()) throw ConfigError("membership test grid is empty");
  if (!(alpha > 0.0 && alpha <= 2.0)) throw ConfigError("class index must lie in (0, 2]");
  const LevyTriple t = levy_triple(spec);
  std::vector<double> xs = test_grid;
  std::sort(xs.begin(), xs.end());
  ClassMembershipReport r;
  r.alpha = alpha;
  double running = 0.0;
  for (double x : xs) {
    if (!(x > 0.0 && x <= 1.0)) throw ConfigError("membership grid points must lie in (0, 1]");
    double stat = std::pow(x, alpha) * t.levy_measure_tail(x);
    if (alpha == 2.0) stat = std::max(stat, t.truncated_second_moment(x));
    running = std::max(running, stat);
    r.phi_estimate.emplace_back(x, running);
    r.sup_statistic = std::max(r.sup_statistic, stat);
  }
  const double small = r.phi_estimate.front().second;
  const double large = r.phi_estimate.back().second;
  r.member = t.c == 0.0 && (small == 0.0 || small <= threshold * std::max(1.0, large));
  return r;
}

Moments moments(const PerturbationSpec& spec, double delta) {
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  Moments m;
  if (std::holds_alternative<NoPerturbation>(spec)) {
    m.variance = 0.0;
  } else if (std::holds_alternative<UnitDrift>(spec)) {
    m.mean = delta;
    m.variance = 0.0;
  } else if (std::holds_alternative<StandardPoisson>(spec)) {
    m.mean = delta;
    m.variance = delta;
  } else if (const auto* cp = std::get_if<CompoundPoisson>(&spec)) {
    m.mean = cp->lambda * delta * cp->jumps.mean();
    m.variance = cp->lambda * delta * cp->jumps.second_moment();
  }
  return m;
}

std::vector<double> poisson_weights(double mean, double tail_mass) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw ConfigError("Poisson mean must be finite and nonnegative");
  if (mean == 0.0) return {1.0};
  const int cap = 100000;
  std::vector<double> w;
  auto term = [&](int k) { return std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0)); };
  for (int k = 0; k <= cap; ++k) {
    w.push_back(term(k));
    if (k > mean) {
      // Upper tail beyond k, bounded by a geometric series.
      const double ratio = mean / (k + 2.0);
      const double tail = term(k + 1) / (1.0 - ratio);
      if (tail < tail_mass) return w;
    }
  }
  throw TruncationFailure("Poisson truncation exceeded its cap");
}

double g_delta_integrate(const PerturbationSpec& spec, double delta, const std::function<double(double)>& integrand,
                         const GIntegrateOptions& opt) {
  return g_delta_integrate_vec<1>(spec, delta, [&](double y) { return Vec<1>{integrand(y)}; }, opt)[0];
}

}  // namespace levyfisher
