#include "levyfisher/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <thread>

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>

#include "levyfisher/info_constants.hpp"

namespace levyfisher {

namespace {

constexpr std::array<const char*, 13> kTheoremNames{"T2a", "T2c",    "T3bound", "T4",     "T5",  "T6", "T7_SS1",
                                                    "T7_SS2", "T7_SS3", "T7_SS4",  "T8",     "T9",  "T10"};
constexpr std::array<const char*, 7> kEntryNames{"ss", "sb", "bb", "st", "bt", "tt", "mult"};

const SymmetricStable& need_stable(const PerturbationSpec& spec, TheoremId id) {
  const auto* ss = std::get_if<SymmetricStable>(&spec);
  if (!ss) throw HypothesisViolation(theorem_name(id) + " needs a symmetric stable perturbation");
  return *ss;
}

void need(bool ok, TheoremId id, const std::string& what) {
  if (!ok) throw HypothesisViolation(theorem_name(id) + ": " + what);
}

TheoremPrediction make(TheoremId id, Entry e, Rate r, LimitKind k, double limit, std::string note = {}) {
  TheoremPrediction p;
  p.theorem = id;
  p.entry = e;
  p.rate = r;
  p.kind = k;
  p.limit = limit;
  p.note = std::move(note);
  return p;
}

bool dominated(const PerturbationSpec& spec, double beta) {
  if (const auto* ss = std::get_if<SymmetricStable>(&spec)) return ss->alpha < beta;
  return true;
}

}  // namespace

std::string theorem_name(TheoremId id) { return kTheoremNames[static_cast<int>(id)]; }

TheoremId parse_theorem(const std::string& s) {
  for (std::size_t i = 0; i < kTheoremNames.size(); ++i)
    if (s == kTheoremNames[i]) return static_cast<TheoremId>(i);
  // Bare T7 is accepted by callers that expand it themselves.
  throw ConfigError("unknown theorem: " + s);
}

std::string entry_name(Entry e) { return kEntryNames[static_cast<int>(e)]; }

Entry parse_entry(const std::string& s) {
  for (std::size_t i = 0; i < kEntryNames.size(); ++i)
    if (s == kEntryNames[i]) return static_cast<Entry>(i);
  throw ConfigError("unknown entry: " + s);
}

double Rate::operator()(double delta) const {
  double r = std::pow(delta, exponent);
  if (log_power != 0.0) r *= std::pow(std::log(1.0 / delta), log_power);
  return r;
}

double TheoremPrediction::estimator_rate(double n, double delta) const { return std::sqrt(n * rate(delta)); }

std::vector<TheoremPrediction> predict(TheoremId id, const ModelParams& params, const PerturbationSpec& spec,
                                       const QuadratureConfig& cfg) {
  params.validate();
  const double b = params.beta, s = params.sigma, th = params.theta;
  const double s2 = s * s;
  std::vector<TheoremPrediction> out;
  auto I = [&] { return calI(b, cfg); };
  auto J = [&] { return calJ(b, cfg); };

  switch (id) {
    case TheoremId::T2a: {
      need(dominated(spec, b), id, "perturbation must be dominated by the stable part");
      out.push_back(make(id, Entry::SS, {}, LimitKind::Value, I() / s2));
      if (b < 2.0) {
        out.push_back(make(id, Entry::BB, {0.0, 2.0}, LimitKind::Value, I() / std::pow(b, 4)));
        out.push_back(make(id, Entry::SB, {0.0, 1.0}, LimitKind::Value, I() / (s * b * b)));
      }
      break;
    }
    case TheoremId::T2c: {
      const auto& ss = need_stable(spec, id);
      need(ss.alpha < b, id, "alpha must be below beta");
      auto p = make(id, Entry::SS, {}, LimitKind::StrictlyBelow, I() / s2,
                    "index close to beta: the limit stays below the undisturbed value");
      // Reference: information for sigma in N(0, (sigma^2 + theta^2) delta).
      p.lower = 2.0 * s2 / ((s2 + th * th) * (s2 + th * th));
      out.push_back(p);
      break;
    }
    case TheoremId::T3bound: {
      const Moments m = moments(spec, 1.0);
      if (!m.variance) throw MomentUndefined("theta bound needs a finite variance");
      need(!std::holds_alternative<NoPerturbation>(spec), id, "theta is not identified without a perturbation");
      out.push_back(make(id, Entry::TT, {1.0 - 2.0 / b, 0.0}, LimitKind::UpperBound, *m.variance * J() / s2));
      break;
    }
    case TheoremId::T4: {
      need(std::holds_alternative<UnitDrift>(spec), id, "needs the unit drift");
      out.push_back(make(id, Entry::SS, {}, LimitKind::Value, I() / s2));
      out.push_back(make(id, Entry::ST, {}, LimitKind::Zero, 0.0));
      out.push_back(make(id, Entry::TT, {2.0 - 2.0 / b, 0.0}, LimitKind::Value, J() / s2));
      break;
    }
    case TheoremId::T5: {
      need(std::holds_alternative<StandardPoisson>(spec), id, "needs the standard Poisson process");
      out.push_back(make(id, Entry::SS, {}, LimitKind::Value, I() / s2));
      out.push_back(make(id, Entry::ST, {0.5 - 1.0 / b, 0.0}, LimitKind::Zero, 0.0));
      out.push_back(make(id, Entry::TT, {1.0 - 2.0 / b, 0.0}, LimitKind::Value, J() / s2));
      break;
    }
    case TheoremId::T6: {
      const auto* cp = std::get_if<CompoundPoisson>(&spec);
      need(cp != nullptr, id, "needs a compound Poisson process");
      need(th != 0.0, id, "theta must be nonzero");
      out.push_back(make(id, Entry::SS, {}, LimitKind::Value, I() / s2));
      out.push_back(make(id, Entry::ST, {0.5, 0.0}, LimitKind::Zero, 0.0));
      const double upper = cp->lambda * calL(cp->jumps, cfg) / (th * th);
      if (b == 2.0) {
        out.push_back(make(id, Entry::TT, {1.0, 0.0}, LimitKind::Value, upper));
      } else {
        auto p = make(id, Entry::TT, {1.0, 0.0}, LimitKind::Interval, upper, "no assertion inside the interval");
        p.lower = cp_theta_lower_bound(b, s, th, *cp, cfg);
        p.computed = true;
        out.push_back(p);
      }
      break;
    }
    case TheoremId::T7_SS1: {
      const auto& ss = need_stable(spec, id);
      need(b == 2.0, id, "needs beta = 2");
      need(ss.alpha < b, id, "alpha must be below beta");
      const double a = ss.alpha;
      const double c = 2.0 * a * c_beta(a) * std::pow(b, a / 2.0) /
                       (std::pow(std::abs(th), 2.0 - a) * std::pow(s, a) * std::pow(2.0 * (b - a), a / 2.0));
      out.push_back(make(id, Entry::TT, {(b - a) / b, -a / 2.0}, LimitKind::Value, c));
      break;
    }
    case TheoremId::T7_SS2: {
      const auto& ss = need_stable(spec, id);
      need(b < 2.0 && ss.alpha > b / 2.0 && ss.alpha < b, id, "needs beta < 2 and beta/2 < alpha < beta");
      auto p = make(id, Entry::TT, {2.0 * (b - ss.alpha) / b, 0.0}, LimitKind::Value,
                    ss2_constant(ss.alpha, b, s, th, cfg).value);
      p.computed = true;
      out.push_back(p);
      break;
    }
    case TheoremId::T7_SS3: {
      const auto& ss = need_stable(spec, id);
      need(b < 2.0 && std::abs(ss.alpha - b / 2.0) < 1e-12, id, "needs beta < 2 and alpha = beta/2");
      const double a = ss.alpha, ca = c_beta(a);
      const double c = 2.0 * a * (b - a) * ca * ca * std::pow(std::abs(th), 2.0 * a - 2.0) /
                       (b * c_beta(b) * std::pow(s, 2.0 * a));
      out.push_back(make(id, Entry::TT, {2.0 * (b - a) / b, 1.0}, LimitKind::Value, c));
      break;
    }
    case TheoremId::T7_SS4: {
      const auto& ss = need_stable(spec, id);
      need(b < 2.0 && ss.alpha < b / 2.0, id, "needs beta < 2 and alpha < beta/2");
      auto p = make(id, Entry::TT, {1.0, 0.0}, LimitKind::Value, ss4_constant(ss.alpha, b, s, th, cfg));
      p.computed = true;
      out.push_back(p);
      break;
    }
    case TheoremId::T8: {
      need(std::holds_alternative<UnitDrift>(spec), id, "needs the unit drift");
      if (b > 1.0)
        out.push_back(make(id, Entry::Mult, {}, LimitKind::Value, I() / s2));
      else if (b == 1.0)
        out.push_back(make(id, Entry::Mult, {}, LimitKind::Value, (I() + J()) / s2));
      else
        out.push_back(make(id, Entry::Mult, {2.0 - 2.0 / b, 0.0}, LimitKind::Value, J() / s2));
      break;
    }
    case TheoremId::T9: {
      need(std::holds_alternative<StandardPoisson>(spec), id, "needs the standard Poisson process");
      if (b == 2.0)
        out.push_back(make(id, Entry::Mult, {}, LimitKind::Value, (I() + J()) / s2));
      else
        out.push_back(make(id, Entry::Mult, {1.0 - 2.0 / b, 0.0}, LimitKind::Value, J() / s2));
      break;
    }
    case TheoremId::T10: {
      const bool cp = std::holds_alternative<CompoundPoisson>(spec);
      const auto* ss = std::get_if<SymmetricStable>(&spec);
      need(cp || (ss && ss->alpha < b), id, "needs compound Poisson or a stable process with alpha < beta");
      out.push_back(make(id, Entry::Mult, {}, LimitKind::Value, I() / s2));
      break;
    }
  }
  return out;
}

TheoremPrediction predict(TheoremId id, Entry entry, const ModelParams& params, const PerturbationSpec& spec,
                          const QuadratureConfig& cfg) {
  for (auto& p : predict(id, params, spec, cfg))
    if (p.entry == entry) return p;
  throw HypothesisViolation(theorem_name(id) + " says nothing about entry " + entry_name(entry));
}

double stable_fractional_term(double alpha, double beta, double x, const QuadratureConfig& cfg) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw ConfigError("alpha must lie in (0, 2)");
  const auto eng = engine_for(beta, cfg);
  x = std::abs(x);
  // Below y0 the symmetric second difference is replaced by -h''(x) y^2.
  const double y0 = 1e-3 * std::max(1.0, x);
  const double h0 = eng->density(x);
  const double head = -eng->deriv(x, 2) * std::pow(y0, 2.0 - alpha) / (2.0 - alpha);
  auto f = [&](double y) {
    const double num = 2.0 * h0 - eng->density(x - y) - eng->density(x + y);
    return num / std::pow(y, 1.0 + alpha);
  };
  std::vector<Feature> feats{{y0, 1.0}};
  if (x > y0) feats.push_back({x, 1.0});
  if (beta < 2.0) feats.push_back({x, eng->tail_crossover()});
  LayoutOptions opt;
  opt.x_truncation = cfg.x_truncation;
  const auto segs = half_line_layout(feats, y0, true, opt);
  return head + integrate_scalar(f, segs, cfg.rel_tol, cfg.max_panels, 1e-3 * cfg.rel_tol * (h0 + std::abs(head)));
}

namespace {

// Integral over x of rho(x)^2 / h(x), up to the prefactor.
double ss2_integral(double alpha, double beta, const QuadratureConfig& cfg) {
  const auto eng = engine_for(beta, cfg);
  const double cb = c_beta(beta);
  // Beyond X the integrand is x^(beta - 1 - 2 alpha) / c_beta to relative O(X^-beta).
  const double X = 1e6;
  auto f = [&](double x) {
    const double r = stable_fractional_term(alpha, beta, x, cfg);
    return r * r / eng->density(x);
  };
  const std::vector<Feature> feats{{0.0, 1.0}, {0.0, eng->tail_crossover()}};
  LayoutOptions opt;
  opt.min_reach = 4.0;
  // Beyond x = 16 the integrand is a plain power law; a log map keeps panels balanced.
  std::vector<Segment> mapped = interval_layout(feats, 0.0, 16.0, opt);
  Segment tail;
  tail.tail = true;
  tail.origin = 16.0;
  tail.scale = 16.0;
  tail.sign = 1.0;
  tail.a = 0.0;
  tail.b = std::log1p((X - 16.0) / 16.0);
  mapped.push_back(tail);
  double head = 0.0;
  for (const auto& m : mapped) {
    const std::array<Segment, 1> one{m};
    head += integrate_scalar(f, one, std::max(cfg.rel_tol, 1e-9), cfg.max_panels);
  }
  const double p = 2.0 * alpha - beta;
  return 2.0 * (head + std::pow(X, -p) / (cb * p));
}

}  // namespace

ConstantResult ss2_constant(double alpha, double beta, double sigma, double theta, const QuadratureConfig& cfg) {
  if (!(beta < 2.0 && alpha > beta / 2.0 && alpha < beta))
    throw HypothesisViolation("ss2 constant needs beta < 2 and beta/2 < alpha < beta");
  const double ca = c_beta(alpha);
  const double pre = alpha * alpha * ca * ca * std::pow(std::abs(theta), 2.0 * alpha - 2.0) / std::pow(sigma, 2.0 * alpha);
  QuadratureConfig loose = cfg;
  loose.rel_tol = std::max(cfg.rel_tol, 1e-8);
  QuadratureConfig tight = loose;
  tight.rel_tol = loose.rel_tol * 1e-2;
  const double a = ss2_integral(alpha, beta, loose);
  const double b = ss2_integral(alpha, beta, tight);
  ConstantResult r;
  r.value = pre * b;
  r.refined_change = std::abs(a - b) / std::abs(b);
  if (r.refined_change > 1e-2) r.warnings.push_back("SlowConvergence: refinement changed the constant by more than 1%");
  return r;
}

double ss4_constant(double alpha, double beta, double sigma, double theta, const QuadratureConfig& cfg) {
  if (!(beta < 2.0 && alpha < beta / 2.0 && alpha > 0.0))
    throw HypothesisViolation("ss4 constant needs beta < 2 and alpha < beta/2");
  const double ca = c_beta(alpha), cb = c_beta(beta);
  const double A = cb, B = ca * std::pow(std::abs(theta), alpha) / std::pow(sigma, alpha);
  const double p = 1.0 + 2.0 * alpha - beta, q = 1.0 + alpha;
  // The two powers balance at z*.
  const double zs = std::pow(A / B, 1.0 / (q - p));
  auto f = [&](double z) { return 1.0 / (A * std::pow(z, p) + B * std::pow(z, q)); };
  // Substituting z = zs e^t turns both ends into exponential decay.
  auto g = [&](double t) {
    const double z = zs * std::exp(t);
    return f(z) * z;
  };
  // Decay rates in t are 1 - p at the left end and alpha at the right end.
  const double lo = -40.0 / (1.0 - p), hi = 40.0 / alpha;
  const std::vector<Feature> feats{{0.0, 1.0}};
  LayoutOptions opt;
  opt.min_reach = 16.0;
  const auto segs = interval_layout(feats, std::max(lo, -700.0), std::min(hi, 700.0), opt);
  const double integral = 2.0 * integrate_scalar(g, segs, cfg.rel_tol, cfg.max_panels);
  const double pre = alpha * alpha * ca * ca * std::pow(std::abs(theta), 2.0 * alpha - 2.0) / std::pow(sigma, 2.0 * alpha);
  return pre * integral;
}

double ss4_constant_exact(double alpha, double beta, double sigma, double theta) {
  const double ca = c_beta(alpha), cb = c_beta(beta);
  const double A = cb, B = ca * std::pow(std::abs(theta), alpha) / std::pow(sigma, alpha);
  const double p = 1.0 + 2.0 * alpha - beta, m = beta - alpha;
  const double s = (1.0 - p) / m;
  // integral_0^inf dz / (A z^p + B z^(p+m)) = (A/B)^s / (A m) * pi / sin(pi s)
  const double half = std::pow(A / B, s) / (A * m) * std::numbers::pi / std::sin(std::numbers::pi * s);
  const double pre = alpha * alpha * ca * ca * std::pow(std::abs(theta), 2.0 * alpha - 2.0) / std::pow(sigma, 2.0 * alpha);
  return pre * 2.0 * half;
}

double cp_theta_lower_bound(double beta, double sigma, double theta, const CompoundPoisson& cp,
                            const QuadratureConfig& cfg) {
  if (!(beta < 2.0)) throw HypothesisViolation("the lower bound applies for beta < 2");
  const double lam = cp.lambda;
  const double k = c_beta(beta) * std::pow(sigma, beta) / std::pow(std::abs(theta), beta);
  auto f = [&](double x) {
    const double fx = cp.jumps.pdf(x);
    const double num = x * cp.jumps.derivative(x) + fx;
    const double den = lam * fx + k / std::pow(std::abs(x), 1.0 + beta);
    if (!(den > 0.0)) return 0.0;
    return num * num / den;
  };
  const std::vector<Feature> feats{{0.0, cp.jumps.scale()}};
  LayoutOptions opt;
  opt.x_truncation = cfg.x_truncation;
  const auto segs = half_line_layout(feats, 0.0, true, opt);
  return lam * lam / (theta * theta) * 2.0 * integrate_scalar(f, segs, cfg.rel_tol, cfg.max_panels);
}

double entry_value(const FisherMatrix& m, Entry e) {
  switch (e) {
    case Entry::SS: return m.ss();
    case Entry::SB: return m.sb();
    case Entry::BB: return m.bb();
    case Entry::ST: return m.st();
    case Entry::BT: return m.bt();
    case Entry::TT: return m.tt();
    case Entry::Mult: return m.ss() + 2.0 * m.st() + m.tt();
  }
  return 0.0;
}

double multiplicative_information(const ModelParams& params, const PerturbationSpec& spec,
                                  const QuadratureConfig& cfg) {
  ModelParams p = params;
  p.theta = p.sigma;
  FisherOptions fo;
  fo.skip_beta = true;
  return entry_value(information_matrix(p, spec, cfg, fo), Entry::Mult);
}

Fit fit_rate(const std::vector<double>& deltas, const std::vector<double>& values, bool allow_log_power) {
  const std::size_t n = deltas.size();
  if (n != values.size() || n < 3) throw ConfigError("rate fit needs at least 3 matching points");
  for (double v : values)
    if (!(v > 0.0)) throw NumericalError("rate fit needs positive values");
  auto solve = [&](int cols, Fit& fit) {
    Eigen::MatrixXd X(n, cols);
    Eigen::VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) {
      X(i, 0) = 1.0;
      X(i, 1) = std::log(deltas[i]);
      if (cols == 3) X(i, 2) = std::log(std::log(1.0 / deltas[i]));
      y(i) = std::log(values[i]);
    }
    const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
    const Eigen::VectorXd res = y - X * beta;
    const double dof = static_cast<double>(n) - cols;
    const double s2 = dof > 0 ? res.squaredNorm() / dof : 0.0;
    const Eigen::MatrixXd cov = s2 * (X.transpose() * X).inverse();
    fit.intercept = beta(0);
    fit.exponent = beta(1);
    fit.exponent_se = std::sqrt(std::max(0.0, cov(1, 1)));
    if (cols == 3) {
      fit.log_power = beta(2);
      fit.log_power_se = std::sqrt(std::max(0.0, cov(2, 2)));
    } else {
      fit.log_power = 0.0;
      fit.log_power_se = 0.0;
    }
  };
  Fit fit;
  bool use_log = allow_log_power && n >= 4;
  for (double d : deltas)
    if (!(d < 1.0)) use_log = false;  // log log(1/delta) needs delta < 1
  if (use_log) {
    solve(3, fit);
    fit.log_power_kept = std::abs(fit.log_power) >= 2.0 * fit.log_power_se;
    if (fit.log_power_kept) return fit;
  }
  solve(2, fit);
  fit.log_power_kept = false;
  return fit;
}

std::vector<double> default_deltas(double lo, double hi, int n) {
  if (!(lo > 0.0 && hi > lo) || n < 2) throw ConfigError("bad delta grid");
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = hi * std::pow(lo / hi, static_cast<double>(i) / (n - 1));
  return d;
}

SweepResult sweep(const ModelParams& params, const PerturbationSpec& spec, Entry entry, std::vector<double> deltas,
                  const Rate& rate, const QuadratureConfig& cfg) {
  std::sort(deltas.begin(), deltas.end(), std::greater<>());
  deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());
  if (deltas.size() < 6) throw ConfigError("a sweep needs at least 6 delta points");
  if (!(deltas.front() / deltas.back() >= 100.0 * (1.0 - 1e-12)))
    throw ConfigError("a sweep must span at least two decades of delta");

  SweepResult out;
  out.entry = entry;
  out.deltas = deltas;
  out.rate = rate;
  const std::size_t n = deltas.size();
  std::vector<FisherMatrix> mats(n);

  auto one = [&](std::size_t i) {
    ModelParams p = params;
    p.delta = deltas[i];
    FisherOptions fo;
    if (entry != Entry::SB && entry != Entry::BB && entry != Entry::BT) fo.skip_beta = true;
    if (entry == Entry::Mult) p.theta = p.sigma;
    mats[i] = information_matrix(p, spec, cfg, fo);
  };
  // Independent points run concurrently; results are stored by index.
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) one(i);
  } else {
    std::vector<std::future<void>> jobs;
    std::size_t next = 0;
    while (next < n || !jobs.empty()) {
      while (next < n && jobs.size() < workers) jobs.push_back(std::async(std::launch::async, one, next++));
      jobs.front().get();
      jobs.erase(jobs.begin());
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const double v = entry_value(mats[i], entry);
    out.values.push_back(v);
    out.normalized.push_back(v / rate(deltas[i]));
  }
  if (entry != Entry::Mult) out.raw = std::move(mats);

  std::vector<double> mags;
  bool positive = true;
  for (double v : out.values) {
    mags.push_back(std::abs(v));
    if (!(std::abs(v) > 0.0)) positive = false;
  }
  if (positive) {
    out.fit = fit_rate(out.deltas, mags);
    out.fitted_exponent = out.fit.exponent;
    out.fitted_log_power = out.fit.log_power;
  }
  out.extrapolated_limit = out.normalized.back();
  const double l1 = std::log(1.0 / deltas[n - 2]), l2 = std::log(1.0 / deltas[n - 1]);
  const double v1 = out.normalized[n - 2], v2 = out.normalized[n - 1];
  out.richardson_limit = (l2 > 0.0 && l1 > 0.0) ? (v2 * l2 - v1 * l1) / (l2 - l1) : v2;
  return out;
}

}  // namespace levyfisher
