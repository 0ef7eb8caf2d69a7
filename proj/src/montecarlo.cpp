#include "levyfisher/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <future>
#include <numbers>
#include <thread>

#include <Eigen/Dense>

#include "levyfisher/fisher.hpp"

namespace levyfisher {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

thread_local bool in_worker = false;

// Runs body(i) for i in [0, n) on a few threads; results are written by index.
// Nested calls run serially on the calling worker.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), n);
  if (workers <= 1 || in_worker) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w)
    jobs.push_back(std::async(std::launch::async, [&, w] {
      in_worker = true;
      for (std::size_t i = w; i < n; i += workers) body(i);
    }));
  for (auto& j : jobs) j.get();
}

double draw_perturbation(const SimConfig& c, std::mt19937_64& gen) {
  const double d = c.params.delta;
  switch (c.spec.index()) {
    case 0:
      return 0.0;
    case 1:
      return d;
    case 2:
      return static_cast<double>(std::poisson_distribution<long long>(d)(gen));
    case 3: {
      const auto& cp = std::get<CompoundPoisson>(c.spec);
      const long long k = std::poisson_distribution<long long>(cp.lambda * d)(gen);
      double sum = 0.0;
      for (long long i = 0; i < k; ++i) {
        if (cp.jumps.kind() == JumpDensity::Kind::Gaussian) {
          sum += std::normal_distribution<double>(0.0, cp.jumps.scale())(gen);
        } else {
          const double e = std::exponential_distribution<double>(1.0 / cp.jumps.scale())(gen);
          sum += std::uniform_int_distribution<int>(0, 1)(gen) ? e : -e;
        }
      }
      return sum;
    }
    default:
      return stable_increment(std::get<SymmetricStable>(c.spec).alpha, d, gen);
  }
}

struct Scores {
  double sigma = 0.0, beta = 0.0, theta = 0.0;
};

std::vector<Scores> scores_at(const DensityModel& model, const std::vector<double>& xs) {
  std::vector<Scores> out(xs.size());
  std::vector<char> bad(xs.size(), 0);
  parallel_for(xs.size(), [&](std::size_t i) {
    const DensityBundle b = model.bundle(xs[i]);
    if (!(b.p > 0.0) || !std::isfinite(b.p)) {
      bad[i] = 1;
      return;
    }
    out[i].sigma = b.dp_dsigma / b.p;
    out[i].theta = b.dp_dtheta / b.p;
    if (b.dp_dbeta) out[i].beta = *b.dp_dbeta / b.p;
  });
  if (std::find(bad.begin(), bad.end(), 1) != bad.end())
    throw QuadratureFailure("density underflow at a sampled increment");
  return out;
}

double pick(const Scores& s, char which) {
  switch (which) {
    case 's':
      return s.sigma;
    case 'b':
      return s.beta;
    case 't':
      return s.theta;
    default:
      return s.sigma + s.theta;
  }
}

std::pair<char, char> score_pair(Entry e) {
  switch (e) {
    case Entry::SS:
      return {'s', 's'};
    case Entry::SB:
      return {'s', 'b'};
    case Entry::BB:
      return {'b', 'b'};
    case Entry::ST:
      return {'s', 't'};
    case Entry::BT:
      return {'b', 't'};
    case Entry::TT:
      return {'t', 't'};
    default:
      return {'m', 'm'};
  }
}

double log_likelihood(const ModelParams& p, const PerturbationSpec& spec, const std::vector<double>& xs,
                      const QuadratureConfig& cfg) {
  const DensityModel model(p, spec, cfg);
  std::vector<double> terms(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) { terms[i] = std::log(model.density(xs[i])); });
  double sum = 0.0;
  for (double t : terms) sum += t;  // fixed order keeps the result thread-count independent
  return std::isfinite(sum) ? sum : -std::numeric_limits<double>::infinity();
}

// Golden-section maximization after an expanding bracket search around x0.
double maximize(const std::function<double(double)>& f, double x0, double step, double tol) {
  double a = x0 - step, m = x0, b = x0 + step;
  double fa = f(a), fm = f(m), fb = f(b);
  for (int it = 0; !(fm >= fa && fm >= fb); ++it) {
    if (it > 60) throw OptimizationFailure("no interior maximum bracketed");
    if (fa > fm) {
      b = m, fb = fm;
      m = a, fm = fa;
      a = m - 2.0 * (b - m);
      fa = f(a);
    } else {
      a = m, fa = fm;
      m = b, fm = fb;
      b = m + 2.0 * (m - a);
      fb = f(b);
    }
  }
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol * std::max(1.0, std::abs(m))) {
    if (fc >= fd) {
      b = d, d = c, fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

void SimConfig::validate() const {
  if (n < 1) throw ConfigError("sample size must be at least 1");
  params.validate();
  validate_spec(spec);
  validate_pairing(spec, params.beta);
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed ^ (0xd1b54a32d192ed03ULL * (stream + 1));
  std::seed_seq seq{splitmix64(state), splitmix64(state), splitmix64(state), splitmix64(state)};
  return std::mt19937_64(seq);
}

double standard_stable(double beta, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double u = 0.0;
  while (u == 0.0) u = unif(gen);
  const double v = std::numbers::pi * (u - 0.5);
  const double e = std::exponential_distribution<double>(1.0)(gen);
  if (beta == 1.0) return std::tan(v);
  // Chambers, Mallows and Stuck, symmetric case.
  return std::sin(beta * v) / std::pow(std::cos(v), 1.0 / beta) *
         std::pow(std::cos((1.0 - beta) * v) / e, (1.0 - beta) / beta);
}

double stable_increment(double beta, double delta, std::mt19937_64& gen) {
  // exp(-t|u|^beta / 2) is the standard law rescaled by (t / 2)^(1/beta).
  return std::pow(0.5 * delta, 1.0 / beta) * standard_stable(beta, gen);
}

std::vector<double> sample_increments(const SimConfig& config, std::uint64_t stream) {
  config.validate();
  auto gen = make_stream(config.seed, stream);
  const auto& p = config.params;
  std::vector<double> out(static_cast<std::size_t>(config.n));
  for (auto& x : out) {
    const double w = stable_increment(p.beta, p.delta, gen);
    x = p.sigma * w + p.theta * draw_perturbation(config, gen);
  }
  return out;
}

ScoreMoment empirical_information(const SimConfig& config, Entry entry, const QuadratureConfig& cfg) {
  return empirical_information(config, sample_increments(config), entry, cfg);
}

ScoreMoment empirical_information(const SimConfig& config, const std::vector<double>& sample, Entry entry,
                                  const QuadratureConfig& cfg) {
  return empirical_information(config, sample, std::vector<Entry>{entry}, cfg).front();
}

std::vector<ScoreMoment> empirical_information(const SimConfig& config, const std::vector<double>& sample,
                                               const std::vector<Entry>& entries, const QuadratureConfig& cfg) {
  config.validate();
  for (Entry entry : entries) {
    const auto [ka, kb] = score_pair(entry);
    if ((ka == 'b' || kb == 'b') && !(config.params.beta < 2.0))
      throw UndefinedAtBoundary("the index score needs beta < 2");
    if (entry == Entry::Mult && config.params.theta != config.params.sigma)
      throw ConfigError("the multiplicative entry needs theta = sigma");
  }
  if (sample.size() < 2) throw ConfigError("need at least two increments");
  const DensityModel model(config.params, config.spec, cfg);
  const auto sc = scores_at(model, sample);
  const double n = static_cast<double>(sc.size());
  std::vector<ScoreMoment> out;
  for (Entry entry : entries) {
    const auto [ka, kb] = score_pair(entry);
    double ma = 0.0, mb = 0.0;
    for (const auto& s : sc) {
      ma += pick(s, ka);
      mb += pick(s, kb);
    }
    ma /= n;
    mb /= n;
    double cov = 0.0, va = 0.0;
    for (const auto& s : sc) {
      const double a = pick(s, ka) - ma;
      cov += a * (pick(s, kb) - mb);
      va += a * a;
    }
    cov /= n - 1.0;
    va /= n - 1.0;
    double vp = 0.0;
    for (const auto& s : sc) {
      const double t = (pick(s, ka) - ma) * (pick(s, kb) - mb) - cov;
      vp += t * t;
    }
    vp /= n - 1.0;
    ScoreMoment r;
    r.value = cov;
    r.standard_error = std::sqrt(vp / n);
    r.score_mean = ma;
    r.score_mean_se = std::sqrt(va / n);
    r.n_used = static_cast<std::int64_t>(sc.size());
    out.push_back(r);
  }
  return out;
}

std::vector<EstimationReport> mle(const SimConfig& config, const std::vector<FreeParam>& free_params,
                                  const QuadratureConfig& cfg) {
  return mle(config, sample_increments(config), free_params, cfg);
}

std::vector<EstimationReport> mle(const SimConfig& config, const std::vector<double>& sample,
                                  const std::vector<FreeParam>& free_params, const QuadratureConfig& cfg) {
  config.validate();
  if (free_params.empty() || free_params.size() > 2) throw ConfigError("choose one or two free parameters");
  const bool fs = std::find(free_params.begin(), free_params.end(), FreeParam::Sigma) != free_params.end();
  const bool ft = std::find(free_params.begin(), free_params.end(), FreeParam::Theta) != free_params.end();
  if (ft && std::holds_alternative<NoPerturbation>(config.spec))
    throw ConfigError("theta is not identified without a perturbation");

  ModelParams cur = config.params;
  auto ll = [&](double sigma, double theta) {
    ModelParams p = cur;
    p.sigma = sigma;
    p.theta = theta;
    if (!(sigma > 0.0)) return -std::numeric_limits<double>::infinity();
    return log_likelihood(p, config.spec, sample, cfg);
  };
  const double n = static_cast<double>(sample.size());
  const double tol = 1e-6;
  const double theta_step = std::max(1.0, std::abs(cur.theta)) * 4.0 / std::sqrt(n);
  auto fit_sigma = [&] {
    cur.sigma = std::exp(maximize([&](double ls) { return ll(std::exp(ls), cur.theta); }, std::log(cur.sigma),
                                  4.0 / std::sqrt(n), tol));
  };
  auto fit_theta = [&] {
    cur.theta = maximize([&](double t) { return ll(cur.sigma, t); }, cur.theta, theta_step, tol);
  };
  if (fs && ft) {
    for (int sweep = 0;; ++sweep) {
      if (sweep >= 100) throw OptimizationFailure("coordinate search did not settle");
      const double s0 = cur.sigma, t0 = cur.theta;
      fit_sigma();
      fit_theta();
      if (std::abs(cur.sigma - s0) < tol * s0 && std::abs(cur.theta - t0) < tol * std::max(1.0, std::abs(t0))) break;
    }
  } else if (fs) {
    fit_sigma();
  } else {
    fit_theta();
  }

  // Observed information by central differences of the log-likelihood.
  const double hs = 1e-3 * cur.sigma, ht = 1e-3 * std::max(1.0, std::abs(cur.theta));
  const double l0 = ll(cur.sigma, cur.theta);
  Eigen::Matrix2d obs = Eigen::Matrix2d::Zero();
  if (fs) obs(0, 0) = -(ll(cur.sigma + hs, cur.theta) - 2.0 * l0 + ll(cur.sigma - hs, cur.theta)) / (hs * hs);
  if (ft) obs(1, 1) = -(ll(cur.sigma, cur.theta + ht) - 2.0 * l0 + ll(cur.sigma, cur.theta - ht)) / (ht * ht);
  if (fs && ft)
    obs(0, 1) = obs(1, 0) = -(ll(cur.sigma + hs, cur.theta + ht) - ll(cur.sigma + hs, cur.theta - ht) -
                              ll(cur.sigma - hs, cur.theta + ht) + ll(cur.sigma - hs, cur.theta - ht)) /
                            (4.0 * hs * ht);

  FisherOptions fo;
  fo.skip_beta = true;
  const FisherMatrix fm = information_matrix(config.params, config.spec, cfg, fo);
  Eigen::Matrix2d fisher;
  fisher << fm.ss(), fm.st(), fm.st(), fm.tt();

  auto inverse_diag = [&](const Eigen::Matrix2d& m, int k) {
    if (fs && ft) return Eigen::Matrix2d(m.inverse())(k, k);
    return 1.0 / m(k, k);
  };
  std::vector<EstimationReport> out;
  for (FreeParam fp : free_params) {
    const int k = fp == FreeParam::Sigma ? 0 : 1;
    EstimationReport r;
    r.param = fp;
    r.estimate = k == 0 ? cur.sigma : cur.theta;
    const double v = inverse_diag(obs, k);
    if (!(v > 0.0)) throw OptimizationFailure("observed information is not positive at the estimate");
    r.standard_error = std::sqrt(v);
    r.n_used = static_cast<std::int64_t>(sample.size());
    r.predicted_variance = inverse_diag(fisher, k) / n;
    out.push_back(r);
  }
  return out;
}

ReplicationSummary mle_replications(const SimConfig& config, const std::vector<FreeParam>& free_params, int reps,
                                    const QuadratureConfig& cfg) {
  if (reps < 2) throw ConfigError("need at least two replications");
  ReplicationSummary s;
  s.estimates.assign(static_cast<std::size_t>(reps), 0.0);
  std::vector<double> predicted(static_cast<std::size_t>(reps), 0.0);
  // Each replication is sequential inside; parallelism is across replications.
  parallel_for(s.estimates.size(), [&](std::size_t r) {
    const auto sample = sample_increments(config, r + 1);
    const auto rep = mle(config, sample, free_params, cfg);
    s.estimates[r] = rep.front().estimate;
    predicted[r] = rep.front().predicted_variance;
  });
  for (double e : s.estimates) s.mean += e;
  s.mean /= reps;
  for (double e : s.estimates) s.variance += (e - s.mean) * (e - s.mean);
  s.variance /= reps - 1;
  s.predicted_variance = predicted.front();
  s.ratio = s.variance / s.predicted_variance;
  return s;
}

}  // namespace levyfisher
