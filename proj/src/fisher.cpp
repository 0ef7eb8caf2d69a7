#include "levyfisher/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>

#include "levyfisher/info_constants.hpp"

namespace levyfisher {

namespace {

bool symmetric_law(const PerturbationSpec& spec) {
  return std::holds_alternative<NoPerturbation>(spec) || std::holds_alternative<SymmetricStable>(spec) ||
         std::holds_alternative<CompoundPoisson>(spec);
}

bool has_inner_integral(const PerturbationSpec& spec, double theta) {
  return theta != 0.0 &&
         (std::holds_alternative<SymmetricStable>(spec) || std::holds_alternative<CompoundPoisson>(spec));
}

// Components: ss, st, tt, sv, vt, vv.
constexpr std::array<std::pair<int, int>, 6> kPairs{{{0, 0}, {0, 2}, {2, 2}, {0, 5}, {5, 2}, {5, 5}}};

}  // namespace

FisherMatrix information_matrix(const ModelParams& params, const PerturbationSpec& spec, const QuadratureConfig& cfg,
                                const FisherOptions& opt) {
  const DensityModel model(params, spec, cfg);
  const bool with_beta = params.beta < 2.0 && !opt.skip_beta;
  const bool identified = !std::holds_alternative<NoPerturbation>(spec) && params.theta != 0.0;
  bool underflow = false;

  auto integrand = [&](double x) {
    Vec<6> out{};
    const DensityBundle b = model.bundle(x);
    if (!(b.p > 1e-300)) {
      if (b.dp_dsigma != 0.0 || b.dp_dtheta != 0.0) underflow = true;
      return out;
    }
    const double ss = b.dp_dsigma / b.p;
    const double st = b.dp_dtheta / b.p;
    const double sv = (with_beta && b.v) ? *b.v / b.p : 0.0;
    out[0] = b.p * ss * ss;
    out[1] = b.p * ss * st;
    out[2] = b.p * st * st;
    out[3] = b.p * ss * sv;
    out[4] = b.p * sv * st;
    out[5] = b.p * sv * sv;
    return out;
  };

  double rel = cfg.rel_tol;
  if (has_inner_integral(spec, params.theta)) rel = std::max(100.0 * cfg.rel_tol, 1e-8);
  if (opt.rel_tol) rel = *opt.rel_tol;
  auto tol = [&](const Vec<6>& v, const Vec<6>& l1) {
    Vec<6> t{};
    const std::array<double, 6> diag{v[0], 0.0, v[2], 0.0, 0.0, v[5]};
    for (std::size_t k = 0; k < 6; ++k) {
      const auto [i, j] = kPairs[k];
      const double di = diag[i], dj = diag[j];
      const double scale = std::max(std::abs(v[k]), std::sqrt(std::abs(di * dj)));
      t[k] = std::max({rel * scale, 50.0 * std::numeric_limits<double>::epsilon() * l1[k], 1e-300});
    }
    return t;
  };

  LayoutOptions lo;
  lo.x_truncation = cfg.x_truncation;
  const auto feats = model.features();
  const bool half = symmetric_law(spec);
  const auto segs = half ? half_line_layout(feats, 0.0, true, lo) : real_line_layout(feats, lo);
  const auto r = integrate<6>(integrand, segs, tol, cfg.max_panels);
  if (!r.converged) {
    const auto t = tol(r.value, r.l1);
    for (std::size_t k = 0; k < 6; ++k)
      if (!(r.error[k] <= 100.0 * t[k]))
        throw QuadratureFailure("information integral did not converge (component " + std::to_string(k) + ")");
  }
  const double f = half ? 2.0 : 1.0;
  const double Iss = f * r.value[0], Ist = f * r.value[1], Itt = f * r.value[2];
  const double Jsb = f * r.value[3], Jbt = f * r.value[4], Jbb = f * r.value[5];

  FisherMatrix m;
  m.beta_row_valid = with_beta;
  m.theta_identified = identified;
  m.ill_conditioned = underflow;
  auto set = [&](Param a, Param b, double v, double e) {
    m.entries[static_cast<int>(a)][static_cast<int>(b)] = v;
    m.entries[static_cast<int>(b)][static_cast<int>(a)] = v;
    m.errors[static_cast<int>(a)][static_cast<int>(b)] = e;
    m.errors[static_cast<int>(b)][static_cast<int>(a)] = e;
  };
  set(Param::Sigma, Param::Sigma, Iss, f * r.error[0]);
  set(Param::Sigma, Param::Theta, Ist, f * r.error[1]);
  set(Param::Theta, Param::Theta, Itt, f * r.error[2]);
  if (with_beta) {
    const double L = params.sigma * std::log(params.delta) / (params.beta * params.beta);
    set(Param::Sigma, Param::Beta, Jsb - L * Iss, f * (r.error[3] + std::abs(L) * r.error[0]));
    set(Param::Beta, Param::Theta, Jbt - L * Ist, f * (r.error[4] + std::abs(L) * r.error[1]));
    set(Param::Beta, Param::Beta, Jbb - 2.0 * L * Jsb + L * L * Iss,
        f * (r.error[5] + 2.0 * std::abs(L) * r.error[3] + L * L * r.error[0]));
  }
  return m;
}

bool is_psd(const FisherMatrix& m, double tol_factor) {
  std::vector<int> idx{0};
  if (m.beta_row_valid) idx.push_back(1);
  if (m.theta_identified) idx.push_back(2);
  Eigen::MatrixXd a(idx.size(), idx.size());
  double trace = 0.0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    trace += m.entries[idx[i]][idx[i]];
    for (std::size_t j = 0; j < idx.size(); ++j) a(i, j) = m.entries[idx[i]][idx[j]];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol_factor * std::abs(trace);
}

BaselineForms baseline_closed_forms(double sigma, double beta, double delta, const QuadratureConfig& cfg) {
  if (!(sigma > 0.0) || !(delta > 0.0)) throw ConfigError("sigma and delta must be positive");
  StableIndex b(beta);
  if (b.gaussian()) throw UndefinedAtBoundary("index entries are undefined at beta = 2");
  const double I = calI(beta, cfg), K = calK(beta, cfg), M = calM(beta, cfg);
  const double L = std::log(delta);
  const double b2 = beta * beta;
  BaselineForms out;
  out.Iss = I / (sigma * sigma);
  out.Ibb = L * L * I / (b2 * b2) + 2.0 * L * M / b2 + K;
  out.Isb = -L * I / (sigma * b2) - M / sigma;
  return out;
}

std::array<std::array<double, 2>, 2> drift_closed_form(double sigma, double beta, double delta,
                                                       const QuadratureConfig& cfg) {
  if (!(sigma > 0.0) || !(delta > 0.0)) throw ConfigError("sigma and delta must be positive");
  const double s2 = sigma * sigma;
  return {{{calI(beta, cfg) / s2, 0.0}, {0.0, std::pow(delta, 2.0 - 2.0 / beta) * calJ(beta, cfg) / s2}}};
}

DominanceReport dominance_check(const ModelParams& params, const PerturbationSpec& spec, const QuadratureConfig& cfg,
                                double sigma_slack, double eig_factor) {
  DominanceReport r;
  FisherOptions fo;
  const FisherMatrix m = information_matrix(params, spec, cfg, fo);
  r.Iss_perturbed = m.ss();
  r.Iss_baseline = calI(params.beta, cfg) / (params.sigma * params.sigma);
  r.sigma_margin = r.Iss_baseline - r.Iss_perturbed;
  bool ok = r.Iss_perturbed <= r.Iss_baseline + sigma_slack;
  if (params.beta < 2.0) {
    const BaselineForms base = baseline_closed_forms(params.sigma, params.beta, params.delta, cfg);
    Eigen::Matrix2d d;
    d << base.Iss - m.ss(), base.Isb - m.sb(), base.Isb - m.sb(), base.Ibb - m.bb();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(d, Eigen::EigenvaluesOnly);
    r.block_min_eigenvalue = es.eigenvalues().minCoeff();
    r.block_trace = base.Iss + base.Ibb;
    ok = ok && *r.block_min_eigenvalue >= -eig_factor * r.block_trace;
  }
  r.passed = ok;
  r.detail = "Iss " + std::to_string(r.Iss_perturbed) + " <= " + std::to_string(r.Iss_baseline);
  return r;
}

VarianceBoundReport variance_bound_check(const ModelParams& params, const PerturbationSpec& spec,
                                         const QuadratureConfig& cfg, double slack) {
  const Moments unit = moments(spec, 1.0);
  if (!unit.variance) throw MomentUndefined("perturbation has no finite variance");
  VarianceBoundReport r;
  FisherOptions fo;
  fo.skip_beta = true;
  r.Itt = information_matrix(params, spec, cfg, fo).tt();
  const double b = params.beta, d = params.delta;
  const double m = unit.mean, v = *unit.variance;
  r.bound = calJ(b, cfg) / (params.sigma * params.sigma) *
            (m * m * std::pow(d, 2.0 - 2.0 / b) + v * std::pow(d, 1.0 - 2.0 / b));
  r.ratio = r.bound > 0.0 ? r.Itt / r.bound : 0.0;
  r.passed = r.Itt <= r.bound * (1.0 + slack) + slack;
  return r;
}

}  // namespace levyfisher
