#include "levyfisher/stable.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>
#include <boost/math/special_functions/cos_pi.hpp>

namespace levyfisher {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCapCrossover = 1e4;
constexpr double kDominance = 0.05;

// Quintic Hermite basis on [0, 1] for values, first and second derivatives.
struct Quintic {
  double h0, h1, h2, h3, h4, h5;
  explicit Quintic(double t) {
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
    h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
    h2 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
    h3 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
    h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
    h5 = 0.5 * (t3 - 2.0 * t4 + t5);
  }
  double operator()(double fa, double da, double sa, double fb, double db, double sb, double H) const {
    return h0 * fa + h1 * H * da + h2 * H * H * sa + h3 * fb + h4 * H * db + h5 * H * H * sb;
  }
};

// Interpolated h, h', h'', hdot from the jets at the two ends.
Vec<4> interpolate(const StableJet& a, const StableJet& b, double H, double t) {
  const Quintic q(t);
  return {q(a[0], a[1], a[2], b[0], b[1], b[2], H), q(a[1], a[2], a[3], b[1], b[2], b[3], H),
          q(a[2], a[3], a[4], b[2], b[3], b[4], H), q(a[5], a[6], a[7], b[5], b[6], b[7], H)};
}

double gaussian_pdf(double w) { return std::exp(-0.5 * w * w) / std::sqrt(2.0 * kPi); }

}  // namespace

StableIndex::StableIndex(double beta) : beta_(beta) {
  if (!(beta > 0.0 && beta <= 2.0)) throw ConfigError("stable index must lie in (0, 2]");
}

std::complex<double> char_fn(StableIndex beta, double u, double t) {
  if (!(t > 0.0)) throw ConfigError("time must be positive");
  return {std::exp(-t * std::pow(std::abs(u), beta.value()) / 2.0), 0.0};
}

double c_beta(double beta) {
  StableIndex b(beta);
  if (b.gaussian()) return 0.0;
  if (beta == 1.0) return 1.0 / (2.0 * kPi);
  return beta * (1.0 - beta) / (4.0 * std::tgamma(2.0 - beta) * std::cos(beta * kPi / 2.0));
}

double c_beta_series_form(double beta) {
  StableIndex b(beta);
  return std::tgamma(1.0 + beta) * boost::math::sin_pi(beta / 2.0) / (2.0 * kPi);
}

DensityEngine::DensityEngine(StableIndex beta, QuadratureConfig cfg) : beta_(beta.value()), cfg_(cfg) {
  cfg_.validate();
  phi_ = kPi / (4.0 * std::max(beta_, 1.0));
  build_series();
  find_crossover();
  build_table();
}

void DensityEngine::build_series() {
  const int kmax = 600;
  a_.assign(kmax + 1, 0.0);
  ad_.assign(kmax + 1, 0.0);
  bound_.assign(kmax + 1, 0.0);
  weight_.assign(kmax + 1, 0.0);
  // a_ and ad_ hold signed coefficients divided by exp(log_g); bound_ holds log_g.
  for (int k = 1; k <= kmax; ++k) {
    const double kb = k * beta_;
    const double log_g = std::lgamma(kb + 1.0) - std::lgamma(k + 1.0) - k * std::log(2.0) - std::log(kPi);
    const double sgn = (k % 2 == 1) ? 1.0 : -1.0;
    const double s = beta_ == 2.0 ? 0.0 : boost::math::sin_pi(kb / 2.0);
    const double c = boost::math::cos_pi(kb / 2.0);
    a_[k] = sgn * s;
    const double psi = boost::math::digamma(kb + 1.0);
    ad_[k] = sgn * k * (psi * s + 0.5 * kPi * c);
    bound_[k] = log_g;
    weight_[k] = 1.0 + k * (std::abs(psi) + 2.0);
  }
}

StableJet DensityEngine::series(double w, double* err) const {
  w = std::abs(w);
  StableJet out{};
  const double lw = std::log(w);
  double prev = std::numeric_limits<double>::infinity();
  double first = 0.0;
  double last = 0.0;
  for (std::size_t k = 1; k < a_.size(); ++k) {
    const double kb = k * beta_;
    const double m = kb + 1.0;
    const double log_mag = bound_[k] - m * lw;
    // Size of the term including log factors, sign free.
    const double size = std::exp(bound_[k] - kb * lw) * weight_[k] * (1.0 + k * std::abs(lw));
    if (k == 1) first = size;
    if (k > 1 && (size > prev || size < 1e-18 * first)) break;
    prev = size;
    last = size;
    if (log_mag < -745.0) break;
    const double g = std::exp(log_mag);
    const double A = a_[k] * g;
    const double B = ad_[k] * g;
    const double iw = 1.0 / w;
    out[0] += A;
    out[1] += -m * A * iw;
    out[2] += m * (m + 1.0) * A * iw * iw;
    out[3] += -m * (m + 1.0) * (m + 2.0) * A * iw * iw * iw;
    out[4] += m * (m + 1.0) * (m + 2.0) * (m + 3.0) * A * iw * iw * iw * iw;
    const double D = B - k * lw * A;  // hdot term is D w^-m
    out[5] += D;
    const double C = -m * D - k * A;  // derivative is C w^(-m-1)
    out[6] += C * iw;
    out[7] += (m * k * A - (m + 1.0) * C) * iw * iw;
  }
  if (err) *err = first > 0.0 ? last / first : 0.0;
  return out;
}

double DensityEngine::series_breve(double w) const {
  w = std::abs(w);
  const double lw = std::log(w);
  double sum = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  double first = 0.0;
  for (std::size_t k = 1; k < a_.size(); ++k) {
    const double kb = k * beta_;
    const double size = std::exp(bound_[k] - kb * lw) * (kb + 1.0);
    if (k == 1) first = size;
    if (k > 1 && (size > prev || size < 1e-18 * first)) break;
    prev = size;
    const double log_mag = bound_[k] - (kb + 1.0) * lw;
    if (log_mag < -745.0) break;
    sum += -kb * a_[k] * std::exp(log_mag);
  }
  return sum;
}

StableJet DensityEngine::invert(double w) const {
  w = std::abs(w);
  const std::complex<double> rot = std::polar(1.0, phi_);
  const std::complex<double> I(0.0, 1.0);
  const double beta = beta_;
  // Components 8..15 carry the moduli of components 0..7; they set the
  // absolute error floor where the signed integral nearly cancels.
  auto f = [&](double r) {
    Vec<16> out{};
    if (r <= 0.0) return out;
    const std::complex<double> u = r * rot;
    const std::complex<double> logu(std::log(r), phi_);
    const std::complex<double> ub = std::exp(beta * logu);
    const std::complex<double> e = std::exp(I * u * w - 0.5 * ub) * rot;
    if (e == 0.0) return out;
    const std::complex<double> iu = I * u;
    const std::complex<double> L = -0.5 * ub * logu;
    const double ae = std::abs(e) / kPi;
    const double aL = std::abs(L);
    std::complex<double> p = 1.0;
    double rn = 1.0;
    for (int n = 0; n <= 4; ++n) {
      const std::complex<double> pe = p * e;
      out[n] = pe.real() / kPi;
      out[8 + n] = rn * ae;
      if (n <= 2) {
        out[5 + n] = (pe * L).real() / kPi;
        out[13 + n] = rn * ae * aL;
      }
      p *= iu;
      rn *= r;
    }
    return out;
  };

  const double sphi = std::sin(phi_);
  const double cbp = std::cos(beta * phi_);
  auto decay = [&](double r) {
    return w * r * sphi + 0.5 * std::pow(r, beta) * cbp - 4.0 * std::log1p(r) -
           std::log1p(std::abs(std::log(r)));
  };
  double R = 1.0;
  while (decay(R) < cfg_.u_truncation) R *= 2.0;
  while (R > 1e-300 && decay(0.5 * R) >= cfg_.u_truncation) R *= 0.5;
  const double rmin = 1e-16 / std::pow(1.0 + w, 3.0);

  std::vector<Segment> segs;
  double hi = R;
  while (hi > rmin) {
    segs.push_back(Segment{0.5 * hi, hi});
    hi *= 0.5;
  }
  segs.push_back(Segment{0.0, hi});
  std::reverse(segs.begin(), segs.end());

  const double rel = 0.1 * cfg_.rel_tol;
  auto tol = [&](const Vec<16>& v, const Vec<16>& l1) {
    Vec<16> t{};
    for (std::size_t k = 0; k < 8; ++k) {
      t[k] = std::max({rel * std::abs(v[k]), 1e-2 * rel * v[8 + k], 1e-300});
      t[8 + k] = std::max({1e-3 * v[8 + k], 50.0 * std::numeric_limits<double>::epsilon() * l1[8 + k], 1e-300});
    }
    return t;
  };
  auto res = integrate<16>(f, segs, tol, cfg_.max_panels);
  if (!res.converged) {
    const auto t = tol(res.value, res.l1);
    for (std::size_t k = 0; k < 8; ++k)
      if (!(res.error[k] <= 100.0 * t[k]))
        throw QuadratureFailure("stable inversion did not converge at w = " + std::to_string(w));
  }
  StableJet out;
  std::copy_n(res.value.begin(), 8, out.begin());
  return out;
}

void DensityEngine::find_crossover() {
  const double agree = std::max(cfg_.rel_tol, 1e-13);
  auto scale = [&](const StableJet& j, double w, std::size_t k) {
    const double n = static_cast<double>(k < 5 ? k : k - 5);
    double ref = std::abs(j[0]) * std::pow((n + 1.0 + beta_) / w, n);
    if (k >= 5) ref *= 1.0 + std::abs(std::log(w));
    return std::max(std::abs(j[k]), ref);
  };
  auto agrees = [&](double w) {
    const StableJet inv = invert(w);
    const StableJet ser = series(w);
    for (std::size_t k = 0; k < 8; ++k) {
      if (beta_ == 2.0 && k < 5) continue;
      const double sc = beta_ == 2.0 ? std::max(std::abs(inv[k]), std::abs(inv[5]) * std::pow(3.0 / w, k - 5.0))
                                     : scale(inv, w, k);
      if (!(std::abs(inv[k] - ser[k]) <= agree * sc)) return false;
    }
    return true;
  };

  double w_agree = kCapCrossover;
  int streak = 0;
  double streak_start = 0.0;
  for (double w = 1.0; w <= kCapCrossover; w *= 1.05) {
    if (agrees(w)) {
      if (streak == 0) streak_start = w;
      if (++streak == 3) {
        w_agree = streak_start;
        break;
      }
    } else {
      streak = 0;
    }
  }

  double w_dom = 0.0;
  if (beta_ < 2.0) {
    w_dom = kCapCrossover;
    for (double w = 1.0; w <= kCapCrossover; w *= 1.05) {
      const double lead = std::abs(a_[1]) * std::exp(bound_[1] - (beta_ + 1.0) * std::log(w));
      double rest = 0.0;
      // Sum of absolute higher-order terms within the retained range.
      double prev = std::numeric_limits<double>::infinity();
      for (std::size_t k = 2; k < a_.size(); ++k) {
        const double t = std::exp(bound_[k] - (k * beta_ + 1.0) * std::log(w));
        if (t > prev || t < 1e-18 * lead) break;
        prev = t;
        rest += std::abs(a_[k]) * t;
      }
      if (rest <= kDominance * lead) {
        w_dom = w;
        break;
      }
    }
  }
  crossover_ = std::min(kCapCrossover, std::max(w_agree, w_dom));
}

void DensityEngine::build_table() {
  std::vector<double> init{0.0};
  for (double w = 0.125; w < crossover_; w += 0.125) {
    if (w > 4.0) break;
    init.push_back(w);
  }
  for (double w = 8.0; w < crossover_; w *= 2.0) init.push_back(w);
  if (init.back() < crossover_) init.push_back(crossover_);

  std::vector<Node> done;
  std::vector<Node> pending;
  for (double w : init) pending.push_back({w, invert(w)});
  // Work list of intervals by node pairs.
  struct Job {
    Node a, b;
    int depth;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i + 1 < pending.size(); ++i) jobs.push_back({pending[i], pending[i + 1], 0});
  for (const auto& n : pending) done.push_back(n);

  const double tol = std::max(cfg_.rel_tol, 1e-13);
  while (!jobs.empty()) {
    Job job = jobs.back();
    jobs.pop_back();
    const double H = job.b.w - job.a.w;
    const double mid = job.a.w + 0.5 * H;
    Node m{mid, invert(mid)};
    done.push_back(m);
    const Vec<4> guess = interpolate(job.a.f, job.b.f, H, 0.5);
    const double hscale = std::abs(m.f[0]);
    bool ok = true;
    const std::array<double, 4> actual{m.f[0], m.f[1], m.f[2], m.f[5]};
    for (int k = 0; k < 4; ++k) {
      if (beta_ == 2.0 && k < 3) continue;
      const double sc = std::abs(actual[k]) + hscale + (k == 3 ? std::abs(m.f[5]) : 0.0);
      if (!(std::abs(guess[k] - actual[k]) <= tol * sc)) ok = false;
    }
    if (!ok && job.depth < 40) {
      jobs.push_back({job.a, m, job.depth + 1});
      jobs.push_back({m, job.b, job.depth + 1});
    }
  }
  std::sort(done.begin(), done.end(), [](const Node& x, const Node& y) { return x.w < y.w; });
  nodes_.clear();
  for (const auto& n : done)
    if (nodes_.empty() || n.w > nodes_.back().w) nodes_.push_back(n);
}

StableKernel DensityEngine::table_kernel(double w) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), w, [](double x, const Node& n) { return x < n.w; });
  std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
  if (i == 0) i = 1;
  if (i >= nodes_.size()) i = nodes_.size() - 1;
  const Node& a = nodes_[i - 1];
  const Node& b = nodes_[i];
  const double H = b.w - a.w;
  const Vec<4> v = interpolate(a.f, b.f, H, (w - a.w) / H);
  StableKernel k;
  k.h = v[0];
  k.h1 = v[1];
  k.h2 = v[2];
  k.hd = v[3];
  k.breve = k.h + w * k.h1;
  return k;
}

StableKernel DensityEngine::tail_kernel(double w) const {
  const StableJet s = series(w);
  StableKernel k;
  k.h = s[0];
  k.h1 = s[1];
  k.h2 = s[2];
  k.hd = s[5];
  k.breve = series_breve(w);
  return k;
}

StableKernel DensityEngine::kernel(double w) const {
  const double x = std::abs(w);
  StableKernel k;
  if (x <= crossover_) {
    k = table_kernel(x);
  } else {
    k = tail_kernel(x);
  }
  if (beta_ == 2.0) {
    k.h = gaussian_pdf(x);
    k.h1 = -x * k.h;
    k.h2 = (x * x - 1.0) * k.h;
    k.breve = (1.0 - x * x) * k.h;
  }
  if (x == 0.0) k.h1 = 0.0;  // odd function
  if (w < 0.0) k.h1 = -k.h1;
  return k;
}

double DensityEngine::density(double w) const {
  if (beta_ == 2.0) return gaussian_pdf(w);
  return kernel(w).h;
}

double DensityEngine::deriv(double w, int order) const {
  if (order != 1 && order != 2) throw ConfigError("derivative order must be 1 or 2");
  const StableKernel k = kernel(w);
  return order == 1 ? k.h1 : k.h2;
}

double DensityEngine::dbeta(double w) const { return kernel(w).hd; }

double DensityEngine::breve(double w) const { return kernel(w).breve; }

double DensityEngine::tilde(double w) const {
  const StableKernel k = kernel(w);
  if (beta_ == 2.0) {
    const double q = 1.0 - w * w;
    return q * q * k.h;
  }
  if (!(k.h > 0.0)) return 0.0;
  return k.breve * k.breve / k.h;
}

std::shared_ptr<const DensityEngine> engine_for(double beta, const QuadratureConfig& cfg) {
  using Key = std::tuple<double, double, int, double>;
  static std::mutex mu;
  static std::map<Key, std::shared_ptr<const DensityEngine>> cache;
  const Key key{beta, cfg.rel_tol, cfg.max_panels, cfg.u_truncation};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto engine = std::make_shared<const DensityEngine>(StableIndex(beta), cfg);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, engine).first->second;
}

}  // namespace levyfisher
