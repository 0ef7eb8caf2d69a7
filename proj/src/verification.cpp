#include "levyfisher/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "levyfisher/info_constants.hpp"
#include "levyfisher/montecarlo.hpp"

namespace levyfisher {

namespace {

// Tolerances, one per check.
constexpr double kBoundaryTol = 1e-8;
constexpr double kCauchyTol = 1e-4;
constexpr double kInvarianceTol = 1e-6;
constexpr double kDriftRelTol = 1e-4;
constexpr double kDriftOffDiag = 1e-6;
constexpr double kSigmaLimitTol = 0.05;
constexpr double kDominanceSlack = 1e-6;
constexpr double kPsdFactor = 1e-8;
constexpr double kLimitTol = 0.10;
constexpr double kExponentTol = 0.05;
// The interval ends are liminf and limsup bounds; a finite delta may sit just outside.
constexpr double kIntervalSlack = 0.01;
constexpr double kSlowLimitTol = 0.25;
constexpr double kRichardsonTol = 0.10;
constexpr double kSeBand = 3.0;
constexpr double kMleLow = 0.8, kMleHigh = 1.3;
// Below this relative size a normalized cross term counts as zero.
constexpr double kZeroFloor = 1e-9;

const std::vector<CriterionInfo> kManifest{
    {1, "boundary constants", "abs 1e-8; index information undefined at beta=2", 1.0},
    {2, "cauchy oracles", "abs 1e-4", 5.0},
    {3, "baseline delta invariance", "rel 1e-6", 0.0},
    {4, "drift block exactness", "rel 1e-4; off-diagonal < 1e-6 Iss", 60.0},
    {5, "sigma limit under dominated perturbations", "rel 0.05", 600.0},
    {6, "dominance over randomized configurations", "Iss slack 1e-6; eigenvalues >= -1e-8 trace", 0.0},
    {7, "poisson theta rate", "limit rel 0.10; exponent abs 0.05; cross term decays", 0.0},
    {8, "compound poisson theta limit", "rel 0.10 at beta=2; interval slack 0.01 at beta<2", 0.0},
    {9, "two-stable regime map", "exponent abs 0.05 and log-power sign; 1/pi within 0.25, extrapolated within 0.10",
     1800.0},
    {10, "multiplicative model limits", "rel 0.10", 0.0},
    {11, "monte carlo cross-validation", "3 standard errors; MLE variance ratio in [0.8, 1.3]", 900.0},
    {12, "derivative correctness", "central differences, second order", 0.0},
};

using Clock = std::chrono::steady_clock;

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel_err(double v, double ref) { return std::abs(v - ref) / std::abs(ref); }

struct Recorder {
  CheckResult& r;
  void add(bool ok, const std::string& line) {
    r.details.push_back(std::string(ok ? "ok   " : "FAIL ") + line);
    if (!ok) r.passed = false;
  }
};

FisherMatrix matrix(const ModelParams& p, const PerturbationSpec& s, const QuadratureConfig& cfg,
                    bool beta_row = false) {
  FisherOptions fo;
  fo.skip_beta = !beta_row;
  return information_matrix(p, s, cfg, fo);
}

void criterion1(Recorder& rec, const QuadratureConfig& cfg) {
  const double I = calI(2.0, cfg), J = calJ(2.0, cfg);
  rec.add(std::abs(I - 2.0) <= kBoundaryTol, fmt("calI(2) = %.12g", I));
  rec.add(std::abs(J - 1.0) <= kBoundaryTol, fmt("calJ(2) = %.12g", J));
  bool thrown = false;
  try {
    (void)calK(2.0, cfg);
  } catch (const UndefinedAtBoundary&) {
    thrown = true;
  }
  rec.add(thrown, "calK(2) raises UndefinedAtBoundary");
}

void criterion2(Recorder& rec, const QuadratureConfig& cfg) {
  const double I = calI(1.0, cfg), J = calJ(1.0, cfg);
  rec.add(std::abs(I - 0.5) <= kCauchyTol, fmt("calI(1) = %.10g", I));
  rec.add(std::abs(J - 2.0) <= kCauchyTol, fmt("calJ(1) = %.10g", J));
}

void criterion3(Recorder& rec, const QuadratureConfig& cfg) {
  for (double b : {1.0, 1.5, 2.0}) {
    std::vector<double> v;
    for (double d : {0.01, 0.1, 1.0, 10.0}) v.push_back(matrix({1.0, b, 0.0, d}, NoPerturbation{}, cfg).ss());
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double spread = (*hi - *lo) / std::abs(*hi);
    rec.add(spread <= kInvarianceTol, fmt("beta=%g Iss=%.12g relative spread %.2e", b, v[0], spread));
  }
}

void criterion4(Recorder& rec, const QuadratureConfig& cfg) {
  for (double b : {1.0, 1.5, 2.0})
    for (double d : {0.1, 1.0}) {
      const FisherMatrix m = matrix({1.0, b, 1.0, d}, UnitDrift{}, cfg);
      const auto ref = drift_closed_form(1.0, b, d, cfg);
      const double es = rel_err(m.ss(), ref[0][0]), et = rel_err(m.tt(), ref[1][1]);
      const double off = std::abs(m.st()) / m.ss();
      rec.add(es <= kDriftRelTol && et <= kDriftRelTol && off < kDriftOffDiag,
              fmt("beta=%g delta=%g Iss err %.1e Itt err %.1e |Ist|/Iss %.1e", b, d, es, et, off));
    }
}

void criterion5(Recorder& rec, const QuadratureConfig& cfg) {
  for (double b : {1.5, 2.0}) {
    const std::vector<PerturbationSpec> specs{StandardPoisson{}, CompoundPoisson{1.0, JumpDensity::gaussian(1.0)},
                                              SymmetricStable{b / 2.0}};
    const double target = calI(b, cfg);
    for (const auto& s : specs) {
      const SweepResult r = sweep({1.0, b, 1.0, 0.1}, s, Entry::SS, default_deltas(), {}, cfg);
      const double e = rel_err(r.extrapolated_limit, target);
      rec.add(e <= kSigmaLimitTol, fmt("beta=%g %s limit %.6g vs %.6g (rel %.3f)", b, spec_name(s).c_str(),
                                       r.extrapolated_limit, target, e));
    }
  }
}

// Configurations drawn from a fixed seed so that the check is reproducible.
void criterion6(Recorder& rec, const QuadratureConfig& cfg) {
  std::mt19937_64 gen(20240611);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double b = u(gen) < 0.25 ? 2.0 : 1.0 + 0.95 * u(gen);
    const double d = std::pow(10.0, -3.0 + 3.0 * u(gen));
    const double sigma = 0.5 + 1.5 * u(gen), theta = 0.5 + 1.5 * u(gen);
    PerturbationSpec s;
    switch (i % 5) {
      case 0:
        s = UnitDrift{};
        break;
      case 1:
        s = StandardPoisson{};
        break;
      case 2:
        s = CompoundPoisson{0.5 + 2.0 * u(gen), JumpDensity::gaussian(0.5 + u(gen))};
        break;
      case 3:
        s = CompoundPoisson{0.5 + 2.0 * u(gen), JumpDensity::laplace(0.5 + u(gen))};
        break;
      default:
        s = SymmetricStable{b * (0.3 + 0.6 * u(gen))};
        break;
    }
    const ModelParams p{sigma, b, theta, d};
    const DominanceReport r = dominance_check(p, s, cfg, kDominanceSlack, kPsdFactor);
    std::string line = fmt("%s beta=%.3f delta=%.2e sigma=%.2f theta=%.2f Iss %.6g <= %.6g", spec_name(s).c_str(), b,
                           d, sigma, theta, r.Iss_perturbed, r.Iss_baseline);
    if (r.block_min_eigenvalue)
      line += fmt(", min eig %.2e (trace %.3g)", *r.block_min_eigenvalue, r.block_trace);
    rec.add(r.passed, line);
  }
}

void criterion7(Recorder& rec, const QuadratureConfig& cfg) {
  for (double b : {1.5, 2.0}) {
    const ModelParams p{1.0, b, 1.0, 1e-3};
    const double J = calJ(b, cfg);
    const double v = matrix(p, StandardPoisson{}, cfg).tt() * std::pow(1e-3, 2.0 / b - 1.0);
    rec.add(rel_err(v, J) <= kLimitTol, fmt("beta=%g normalized Itt at 1e-3 = %.6g vs %.6g", b, v, J));

    // One sweep supplies both the rate fit and the cross term.
    const SweepResult r = sweep(p, StandardPoisson{}, Entry::TT, default_deltas(), {1.0 - 2.0 / b, 0.0}, cfg);
    std::vector<double> fd, fv;
    for (std::size_t i = 0; i < r.deltas.size(); ++i)
      if (r.deltas[i] <= 1e-2 * (1.0 + 1e-12)) {
        fd.push_back(r.deltas[i]);
        fv.push_back(r.values[i]);
      }
    const Fit f = fit_rate(fd, fv, false);
    const double want = -(2.0 / b - 1.0);
    rec.add(std::abs(f.exponent - want) <= kExponentTol,
            fmt("beta=%g Itt exponent over [1e-4, 1e-2] = %.4f vs %.4f", b, f.exponent, want));

    // Decade points of the normalized cross term must shrink in magnitude.
    std::vector<double> mags;
    std::string seq;
    bool ok = true;
    for (std::size_t i = 0; i < r.deltas.size(); i += 4) {
      const auto& m = r.raw[i];
      const double rate = std::pow(r.deltas[i], 0.5 - 1.0 / b);
      const double floor = kZeroFloor * std::sqrt(m.ss() * m.tt()) / rate;
      double mag = std::abs(m.st()) / rate;
      if (mag <= floor) mag = 0.0;
      if (!mags.empty() && !(mag < mags.back() || (mag == 0.0 && mags.back() == 0.0))) ok = false;
      mags.push_back(mag);
      seq += fmt(" %.2e", mag);
    }
    rec.add(ok, fmt("beta=%g |normalized Ist| at 1e-1..1e-4:%s", b, seq.c_str()));
  }
}

void criterion8(Recorder& rec, const QuadratureConfig& cfg) {
  const CompoundPoisson cp{1.0, JumpDensity::gaussian(1.0)};
  const double d = 1e-3;
  {
    const ModelParams p{1.0, 2.0, 1.0, d};
    const auto pred = predict(TheoremId::T6, Entry::TT, p, cp, cfg);
    const double v = matrix(p, cp, cfg).tt() / d;
    rec.add(rel_err(v, pred.limit) <= kLimitTol, fmt("beta=2 Itt/delta = %.6g vs %.6g", v, pred.limit));
  }
  {
    const ModelParams p{1.0, 1.5, 1.0, d};
    const auto pred = predict(TheoremId::T6, Entry::TT, p, cp, cfg);
    const double v = matrix(p, cp, cfg).tt() / d;
    const bool ok = v >= pred.lower * (1.0 - kIntervalSlack) && v <= pred.limit * (1.0 + kIntervalSlack);
    rec.add(ok, fmt("beta=1.5 Itt/delta = %.6g in [%.6g, %.6g]", v, pred.lower, pred.limit));
  }
}

void criterion9(Recorder& rec, const QuadratureConfig& cfg) {
  struct Regime {
    double beta, alpha;
    TheoremId id;
    double exponent;
    int log_sign;  // 0: no log factor
  };
  const std::vector<Regime> regimes{{2.0, 1.0, TheoremId::T7_SS1, 0.5, -1},
                                    {1.5, 1.0, TheoremId::T7_SS2, 2.0 / 3.0, 0},
                                    {1.5, 0.75, TheoremId::T7_SS3, 1.0, 1},
                                    {1.5, 0.5, TheoremId::T7_SS4, 1.0, 0}};
  const auto deltas = default_deltas(std::pow(10.0, -3.5), 0.1, 11);
  for (const auto& g : regimes) {
    const ModelParams p{1.0, g.beta, 1.0, 0.1};
    const SymmetricStable s{g.alpha};
    const auto pred = predict(g.id, Entry::TT, p, s, cfg);
    const SweepResult r = sweep(p, s, Entry::TT, deltas, pred.rate, cfg);
    const Fit& f = r.fit;
    bool log_ok = false;
    if (g.log_sign == 0) log_ok = !f.log_power_kept;
    if (g.log_sign > 0) log_ok = f.log_power_kept && f.log_power > 0.0;
    if (g.log_sign < 0) log_ok = f.log_power_kept && f.log_power < 0.0;
    const bool e_ok = std::abs(f.exponent - g.exponent) <= kExponentTol;
    rec.add(e_ok && log_ok,
            fmt("beta=%g alpha=%g exponent %.4f (want %.4f) log power %s%.3f (want %s)", g.beta, g.alpha, f.exponent,
                g.exponent, f.log_power_kept ? "" : "dropped ", f.log_power,
                g.log_sign == 0 ? "none" : (g.log_sign > 0 ? "positive" : "negative")));
    if (g.id == TheoremId::T7_SS1) {
      const double last = r.extrapolated_limit, rich = r.richardson_limit;
      rec.add(rel_err(last, pred.limit) <= kSlowLimitTol,
              fmt("normalized at %.2e = %.6g vs 1/pi %.6g", r.deltas.back(), last, pred.limit));
      rec.add(rel_err(rich, pred.limit) <= kRichardsonTol, fmt("extrapolated %.6g vs %.6g", rich, pred.limit));
    }
  }
}

void criterion10(Recorder& rec, const QuadratureConfig& cfg) {
  const double d = 1e-3;
  struct Case {
    double beta;
    PerturbationSpec spec;
    double want;  // 0 means calI(beta)
  };
  const std::vector<Case> cases{{2.0, UnitDrift{}, 2.0},
                                {1.0, UnitDrift{}, 2.5},
                                {2.0, StandardPoisson{}, 3.0},
                                {2.0, CompoundPoisson{1.0, JumpDensity::gaussian(1.0)}, 0.0},
                                {1.5, CompoundPoisson{1.0, JumpDensity::gaussian(1.0)}, 0.0},
                                {2.0, SymmetricStable{1.0}, 0.0},
                                {1.5, SymmetricStable{0.75}, 0.0}};
  for (const auto& c : cases) {
    const double want = c.want > 0.0 ? c.want : calI(c.beta, cfg);
    const double v = multiplicative_information({1.0, c.beta, 1.0, d}, c.spec, cfg);
    rec.add(rel_err(v, want) <= kLimitTol,
            fmt("%s beta=%g I' = %.6g vs %.6g", spec_name(c.spec).c_str(), c.beta, v, want));
  }
}

void criterion11(Recorder& rec, const QuadratureConfig& cfg) {
  const std::vector<PerturbationSpec> specs{NoPerturbation{}, UnitDrift{}, StandardPoisson{},
                                            CompoundPoisson{1.0, JumpDensity::gaussian(1.0)}, SymmetricStable{1.0}};
  for (const auto& s : specs) {
    SimConfig c;
    c.seed = 314159;
    c.n = 100000;
    c.params = {1.0, 2.0, 1.0, 0.1};
    c.spec = s;
    std::vector<Entry> entries{Entry::SS};
    if (!std::holds_alternative<NoPerturbation>(s)) entries.insert(entries.end(), {Entry::ST, Entry::TT});
    const auto sample = sample_increments(c);
    const auto mc = empirical_information(c, sample, entries, cfg);
    const FisherMatrix m = matrix(c.params, s, cfg);
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const double q = entry_value(m, entries[k]);
      const double z = (mc[k].value - q) / mc[k].standard_error;
      rec.add(std::abs(z) <= kSeBand, fmt("%s %s: sample %.6g +- %.2g, quadrature %.6g (z %.2f)", spec_name(s).c_str(),
                                          entry_name(entries[k]).c_str(), mc[k].value, mc[k].standard_error, q, z));
    }
  }
  for (auto [b, sigma] : {std::pair{2.0, 1.0}, std::pair{1.0, 2.0}}) {
    SimConfig c;
    c.seed = 271828;
    c.n = 10000;
    c.params = {sigma, b, 0.0, 0.1};
    c.spec = NoPerturbation{};
    const auto r = mle_replications(c, {FreeParam::Sigma}, 200, cfg);
    const double pred = sigma * sigma / (static_cast<double>(c.n) * calI(b, cfg));
    const double ratio = r.variance / pred;
    rec.add(ratio >= kMleLow && ratio <= kMleHigh,
            fmt("MLE beta=%g sigma=%g: mean %.5f, variance %.3e vs %.3e (ratio %.3f)", b, sigma, r.mean, r.variance,
                pred, ratio));
  }
}

// Central differences at h and h/2: the analytic value must agree with the
// coarse difference up to a few times its own second-order error estimate.
struct FdVerdict {
  bool ok;
  double ratio;
};

FdVerdict fd_compare(double analytic, const std::function<double(double)>& f, double x0, double h, double noise) {
  const double d1 = (f(x0 + h) - f(x0 - h)) / (2.0 * h);
  const double d2 = (f(x0 + h / 2) - f(x0 - h / 2)) / h;
  const double est = std::abs(d1 - d2) * 4.0 / 3.0;
  const double scale = std::max(est, noise);
  const double ratio = std::abs(analytic - d1) / scale;
  return {ratio <= 3.0, ratio};
}

void criterion12(Recorder& rec, const QuadratureConfig& cfg) {
  const double h_rel = cfg.fd_step;
  // Density values carry relative error near rel_tol; differences amplify it by 1/h.
  const double eps = 10.0 * std::max(cfg.rel_tol, 1e-12);
  for (double b : {1.5, 2.0}) {
    const std::vector<PerturbationSpec> specs{NoPerturbation{},
                                              UnitDrift{},
                                              StandardPoisson{},
                                              CompoundPoisson{1.0, JumpDensity::gaussian(1.0)},
                                              CompoundPoisson{2.0, JumpDensity::laplace(0.5)},
                                              SymmetricStable{b / 2.0}};
    for (const auto& s : specs) {
      const ModelParams p{1.3, b, 0.7, 0.1};
      const DensityModel model(p, s, cfg);
      const double spread = p.spread();
      int bad = 0, total = 0;
      double worst = 0.0;
      for (int i = 0; i <= 20; ++i) {
        const double x = -6.0 * spread + 12.0 * spread * i / 20.0;
        const DensityBundle bd = model.bundle(x);
        auto dens = [&](ModelParams q) { return DensityModel(q, s, cfg).density(x); };
        const double noise_base = eps * bd.p;
        auto check = [&](double analytic, const std::function<double(double)>& f, double x0, double h) {
          const FdVerdict v = fd_compare(analytic, f, x0, h, noise_base / h);
          worst = std::max(worst, v.ratio);
          ++total;
          if (!v.ok) ++bad;
        };
        check(bd.dp_dsigma, [&](double v) { ModelParams q = p; q.sigma = v; return dens(q); }, p.sigma,
              h_rel * p.sigma);
        if (!std::holds_alternative<NoPerturbation>(s))
          check(bd.dp_dtheta, [&](double v) { ModelParams q = p; q.theta = v; return dens(q); }, p.theta,
                h_rel * std::max(1.0, std::abs(p.theta)));
        if (bd.dp_dbeta)
          check(*bd.dp_dbeta, [&](double v) { ModelParams q = p; q.beta = v; return dens(q); }, p.beta, h_rel);
      }
      rec.add(bad == 0, fmt("beta=%g %s: %d/%d points, worst error/estimate %.2f", b, spec_name(s).c_str(),
                            total - bad, total, worst));
    }
  }
  for (double b : {0.8, 1.2, 1.5, 1.9}) {
    const auto engine = engine_for(b, cfg);
    int bad = 0, total = 0;
    double worst = 0.0;
    for (int i = 0; i <= 20; ++i) {
      const double w = -6.0 + 12.0 * i / 20.0;
      const double a = engine->dbeta(w);
      auto f = [&](double beta) { return engine_for(beta, cfg)->density(w); };
      const FdVerdict v = fd_compare(a, f, b, h_rel, eps * engine->density(w) / h_rel);
      worst = std::max(worst, v.ratio);
      ++total;
      if (!v.ok) ++bad;
    }
    rec.add(bad == 0, fmt("hdot beta=%g: %d/%d points, worst error/estimate %.2f", b, total - bad, total, worst));
  }
}

const std::vector<void (*)(Recorder&, const QuadratureConfig&)> kChecks{
    criterion1, criterion2, criterion3, criterion4,  criterion5,  criterion6,
    criterion7, criterion8, criterion9, criterion10, criterion11, criterion12};

}  // namespace

const std::vector<CriterionInfo>& criteria_manifest() { return kManifest; }

nlohmann::json manifest_json() {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : kManifest) {
    nlohmann::json j{{"id", c.id}, {"name", c.name}, {"tolerance", c.tolerance}};
    j["time_budget_seconds"] = c.time_budget_seconds > 0.0 ? nlohmann::json(c.time_budget_seconds) : nlohmann::json();
    out.push_back(j);
  }
  return out;
}

CheckResult run_criterion(int id, const QuadratureConfig& cfg) {
  if (id < 1 || id > static_cast<int>(kManifest.size())) throw ConfigError("no such criterion: " + std::to_string(id));
  const CriterionInfo& info = kManifest[id - 1];
  CheckResult r;
  r.id = id;
  r.name = info.name;
  r.passed = true;
  Recorder rec{r};
  const auto t0 = Clock::now();
  try {
    kChecks[id - 1](rec, cfg);
  } catch (const std::exception& e) {
    rec.add(false, std::string("error: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  if (info.time_budget_seconds > 0.0)
    rec.add(r.seconds <= info.time_budget_seconds,
            fmt("runtime %.1f s within %.0f s", r.seconds, info.time_budget_seconds));
  return r;
}

PerturbationSpec default_spec_for(TheoremId id, double beta) {
  switch (id) {
    case TheoremId::T2c:
      return SymmetricStable{0.95 * beta};
    case TheoremId::T4:
    case TheoremId::T8:
      return UnitDrift{};
    case TheoremId::T6:
    case TheoremId::T10:
      return CompoundPoisson{1.0, JumpDensity::gaussian(1.0)};
    case TheoremId::T7_SS1:
      return SymmetricStable{1.0};
    case TheoremId::T7_SS2:
      return SymmetricStable{2.0 * beta / 3.0};
    case TheoremId::T7_SS3:
      return SymmetricStable{beta / 2.0};
    case TheoremId::T7_SS4:
      return SymmetricStable{beta / 3.0};
    default:
      return StandardPoisson{};
  }
}

std::vector<AssertionRow> verify_theorem(TheoremId id, const ModelParams& params, const PerturbationSpec& spec,
                                         const std::vector<double>& deltas, const QuadratureConfig& cfg) {
  std::vector<AssertionRow> rows;
  for (const auto& pred : predict(id, params, spec, cfg)) {
    const SweepResult r = sweep(params, spec, pred.entry, deltas, pred.rate, cfg);
    AssertionRow row;
    row.theorem = id;
    row.entry = pred.entry;
    row.predicted = pred.limit;
    row.lower = pred.lower;
    row.delta = r.deltas.back();
    row.note = pred.note;
    // Rates with a log factor carry 1/log corrections; compare the extrapolated value.
    const bool logged = pred.rate.log_power != 0.0;
    row.observed = logged ? r.richardson_limit : r.extrapolated_limit;
    if (logged) row.note = row.note.empty() ? "extrapolated in 1/log" : row.note + "; extrapolated in 1/log";
    switch (pred.kind) {
      case LimitKind::Value:
        row.kind = "value";
        row.tolerance = id == TheoremId::T7_SS1 ? kSlowLimitTol : kLimitTol;
        row.passed = rel_err(row.observed, pred.limit) <= row.tolerance;
        break;
      case LimitKind::Zero: {
        row.kind = "zero";
        row.tolerance = 0.1;
        double peak = 0.0;
        for (double v : r.normalized) peak = std::max(peak, std::abs(v));
        row.passed = std::abs(row.observed) <= row.tolerance * peak || std::abs(row.observed) <= kZeroFloor;
        break;
      }
      case LimitKind::Interval:
        row.kind = "interval";
        row.tolerance = kIntervalSlack;
        row.passed = row.observed >= pred.lower * (1.0 - kIntervalSlack) &&
                     row.observed <= pred.limit * (1.0 + kIntervalSlack);
        break;
      case LimitKind::UpperBound: {
        // The bound holds at every delta once the mean term is restored.
        row.kind = "upper_bound";
        row.tolerance = kDominanceSlack;
        const Moments m = moments(spec, 1.0);
        const double J = calJ(params.beta, cfg), s2 = params.sigma * params.sigma;
        row.passed = true;
        for (std::size_t i = 0; i < r.deltas.size(); ++i) {
          const double d = r.deltas[i];
          const double bound = J / s2 *
                               (m.mean * m.mean * std::pow(d, 2.0 - 2.0 / params.beta) +
                                m.variance.value_or(0.0) * std::pow(d, 1.0 - 2.0 / params.beta));
          if (!(r.values[i] <= bound * (1.0 + kDominanceSlack) + kDominanceSlack)) row.passed = false;
        }
        break;
      }
      case LimitKind::StrictlyBelow:
        row.kind = "strictly_below";
        row.passed = row.observed < pred.limit;
        break;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace levyfisher
