#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "levyfisher/jump_density.hpp"
#include "levyfisher/stable.hpp"

namespace levyfisher {

struct NoPerturbation {};
struct UnitDrift {};
struct StandardPoisson {};
struct CompoundPoisson {
  double lambda = 1.0;
  JumpDensity jumps = JumpDensity::gaussian(1.0);
};
struct SymmetricStable {
  double alpha = 1.0;
};

using PerturbationSpec = std::variant<NoPerturbation, UnitDrift, StandardPoisson, CompoundPoisson, SymmetricStable>;

std::string spec_name(const PerturbationSpec& spec);
void validate_spec(const PerturbationSpec& spec);
// Checks the spec against the stable index it perturbs.
void validate_pairing(const PerturbationSpec& spec, double beta);

nlohmann::json spec_to_json(const PerturbationSpec& spec);
PerturbationSpec spec_from_json(const nlohmann::json& j);
// Accepts JSON text, a path to a JSON file, or one of the shorthands
// none, drift, poisson, cp, stable:<alpha>.
PerturbationSpec parse_spec(const std::string& text);

// Characteristic triple relative to the truncation 1{|x| <= 1}.
struct LevyTriple {
  double b = 0.0;
  double c = 0.0;
  // x -> F([-x, x]^c)
  std::function<double(double)> levy_measure_tail;
  // x -> integral of y^2 F(dy) over |y| <= x
  std::function<double(double)> truncated_second_moment;
};

LevyTriple levy_triple(const PerturbationSpec& spec);

struct ClassMembershipReport {
  double alpha = 0.0;
  // (x, phi(x)) with phi the running supremum of the class statistic.
  std::vector<std::pair<double, double>> phi_estimate;
  bool member = false;
  double sup_statistic = 0.0;
};

std::vector<double> default_membership_grid();
ClassMembershipReport class_membership(const PerturbationSpec& spec, double alpha,
                                       const std::vector<double>& test_grid = default_membership_grid(),
                                       double threshold = 1e-3);

// Mean and variance of Y_delta; the variance is empty when infinite.
struct Moments {
  double mean = 0.0;
  std::optional<double> variance;
};
Moments moments(const PerturbationSpec& spec, double delta);

// Poisson probabilities e^{-m} m^k / k! for k = 0..K with upper tail < 1e-12.
std::vector<double> poisson_weights(double mean, double tail_mass = 1e-12);

// Options for integrating against G_delta. Hints mark where the integrand
// has structure (for example a sharp kernel), in y units.
struct GIntegrateOptions {
  QuadratureConfig quad;
  std::vector<Feature> hints;
};

namespace detail {

template <std::size_t N, class F>
Vec<N> integrate_density(F&& f, const std::function<double(double)>& density, std::vector<Feature> features,
                         double lo, double hi, const QuadratureConfig& q) {
  LayoutOptions opt;
  opt.x_truncation = q.x_truncation;
  std::vector<Segment> segs;
  if (std::isfinite(lo) && std::isfinite(hi))
    segs = interval_layout(features, lo, hi, opt);
  else
    segs = real_line_layout(features, opt);
  auto g = [&](double y) {
    Vec<N> v{};
    const double d = density(y);
    if (d == 0.0) return v;
    v = f(y);
    for (auto& x : v) x *= d;
    return v;
  };
  auto r = integrate<N>(g, segs, RelTol{q.rel_tol, q.abs_tol}, q.max_panels);
  if (!r.converged) {
    const auto t = RelTol{q.rel_tol, q.abs_tol}(r.value, r.l1);
    for (std::size_t k = 0; k < N; ++k)
      if (!(r.error[k] <= 1e3 * t[k])) throw QuadratureFailure("integration against G did not converge");
  }
  return r.value;
}

}  // namespace detail

// Vector form of the integral of f against G_delta.
template <std::size_t N, class F>
Vec<N> g_delta_integrate_vec(const PerturbationSpec& spec, double delta, F&& f, const GIntegrateOptions& opt = {}) {
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  Vec<N> out{};
  auto add = [&](const Vec<N>& v, double w) {
    for (std::size_t k = 0; k < N; ++k) out[k] += w * v[k];
  };
  if (std::holds_alternative<NoPerturbation>(spec)) return f(0.0);
  if (std::holds_alternative<UnitDrift>(spec)) return f(delta);
  if (std::holds_alternative<StandardPoisson>(spec)) {
    const auto w = poisson_weights(delta);
    for (std::size_t k = 0; k < w.size(); ++k) add(f(static_cast<double>(k)), w[k]);
    return out;
  }
  if (const auto* cp = std::get_if<CompoundPoisson>(&spec)) {
    const auto w = poisson_weights(cp->lambda * delta);
    add(f(0.0), w[0]);
    for (std::size_t k = 1; k < w.size(); ++k) {
      if (w[k] == 0.0) continue;
      const int kk = static_cast<int>(k);
      const double half = cp->jumps.support(kk);
      std::vector<Feature> feats{{0.0, cp->jumps.scale() * std::sqrt(static_cast<double>(kk))}};
      for (const auto& h : opt.hints)
        if (std::abs(h.center) < half + h.scale) feats.push_back(h);
      const auto v = detail::integrate_density<N>(
          f, [&](double z) { return cp->jumps.convolution_pdf(kk, z); }, feats, -half, half, opt.quad);
      add(v, w[k]);
    }
    return out;
  }
  const auto& ss = std::get<SymmetricStable>(spec);
  const double scale = std::pow(delta, 1.0 / ss.alpha);
  auto engine = engine_for(ss.alpha, opt.quad);
  std::vector<Feature> feats{{0.0, scale}, {0.0, scale * engine->tail_crossover()}};
  for (const auto& h : opt.hints) feats.push_back(h);
  return detail::integrate_density<N>(
      f, [&](double y) { return engine->density(y / scale) / scale; }, feats, -INFINITY, INFINITY, opt.quad);
}

double g_delta_integrate(const PerturbationSpec& spec, double delta, const std::function<double(double)>& integrand,
                         const GIntegrateOptions& opt = {});

}  // namespace levyfisher
