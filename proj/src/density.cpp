#include "levyfisher/density.hpp"

#include <cmath>
#include <cstdio>

namespace levyfisher {

void ModelParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be positive");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError("delta must be positive");
  if (!std::isfinite(theta)) throw ConfigError("theta must be finite");
  StableIndex b(beta);
  (void)b;
}

double ModelParams::spread() const { return sigma * std::pow(delta, 1.0 / beta); }

DensityModel::DensityModel(const ModelParams& params, PerturbationSpec spec, const QuadratureConfig& cfg)
    : params_(params), spec_(std::move(spec)), cfg_(cfg) {
  params_.validate();
  cfg_.validate();
  validate_pairing(spec_, params_.beta);
  engine_ = engine_for(params_.beta, cfg_);
  spread_ = params_.spread();
  if (const auto* ss = std::get_if<SymmetricStable>(&spec_)) jump_engine_ = engine_for(ss->alpha, cfg_);
  if (std::holds_alternative<StandardPoisson>(spec_)) weights_ = poisson_weights(params_.delta);
  if (const auto* cp = std::get_if<CompoundPoisson>(&spec_)) weights_ = poisson_weights(cp->lambda * params_.delta);
}

Vec<4> DensityModel::continuous_part(double x, bool need_hd, const std::function<double(double)>& g,
                                     const std::function<double(double)>& dg, double g_scale, double lo,
                                     double hi) const {
  const double s = spread_;
  const double theta = params_.theta;
  auto kern = [&](double y) {
    const StableKernel k = engine_->kernel((x - theta * y) / s);
    return Vec<4>{k.h, k.breve, y * k.h1, need_hd ? k.hd : 0.0};
  };
  if (theta == 0.0) return kern(0.0);

  const double center = x / theta;
  const double width = s / std::abs(theta);
  const double gap = std::abs(center);
  // Where the kernel is much narrower than the local scale of G, the breve and
  // y h' integrals cancel almost completely; integrating by parts moves the
  // derivative onto G and removes the cancellation. Near the peak of G the
  // opposite holds, so far from the origin a smooth cutoff chi (1 around the
  // kernel peak, 0 around the G peak) splits the two treatments.
  enum class Mode { Direct, Parts, Split };
  Mode mode = width < g_scale ? Mode::Parts : Mode::Direct;
  if (gap > 8.0 * std::max(width, g_scale)) mode = Mode::Split;
  const double r0 = 0.25 * gap;
  auto cutoff = [&](double z, double& dchi) {
    dchi = 0.0;
    if (mode != Mode::Split) return mode == Mode::Parts ? 1.0 : 0.0;
    const double u = (std::abs(z) - r0) / r0;
    if (u <= 0.0) return 1.0;
    if (u >= 1.0) return 0.0;
    // 1 - quintic smoothstep
    const double sm = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
    const double dsm = 30.0 * u * u * (1.0 - u) * (1.0 - u);
    dchi = -dsm / r0 * (z < 0.0 ? -1.0 : 1.0);
    return 1.0 - sm;
  };

  const double q = s / theta;
  // The integrand takes y and z = y - x/theta; whichever is near zero is exact.
  auto f = [&](double y, double z, double w) {
    Vec<4> v{};
    double dchi = 0.0;
    const double chi = cutoff(z, dchi);
    const double d = g(y);
    const double dd = chi != 0.0 ? dg(y) : 0.0;
    if (d == 0.0 && dd == 0.0) return v;
    const StableKernel k = engine_->kernel(w);
    v[0] = d * k.h;
    // Direct share weighted by 1 - chi, integrated-by-parts share by chi.
    const double dir = (1.0 - chi) * d;
    const double part = dchi * d + chi * dd;  // d/dy (chi G)
    v[1] = dir * k.breve + q * part * w * k.h;
    v[2] = dir * y * k.h1 + q * (part * y + chi * d) * k.h;
    v[3] = need_hd ? d * k.hd : 0.0;
    return v;
  };
  const double rel = cfg_.rel_tol;
  Vec<4> known{};
  auto tol = [&](const Vec<4>& v0, const Vec<4>& l1) {
    Vec<4> t{};
    Vec<4> v{};
    for (std::size_t k = 0; k < 4; ++k) v[k] = v0[k] + known[k];
    // Scores are ratios to the density, so each component only needs accuracy relative to it.
    const std::array<double, 4> unit{1.0, 1.0, width, 1.0};
    for (std::size_t k = 0; k < 4; ++k)
      t[k] = std::max({rel * std::abs(v[k]), 0.1 * rel * l1[k], rel * std::abs(v[0]) * unit[k], 1e-300});
    return t;
  };
  auto check = [&](const QuadResult<4>& r) {
    if (r.converged) return;
    const auto t = tol(r.value, r.l1);
    for (std::size_t k = 0; k < 4; ++k)
      if (!(r.error[k] <= 1e3 * t[k])) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "x=%g component %zu error %g value %g", x, k, r.error[k], r.value[k]);
        throw QuadratureFailure(std::string("convolution integral did not converge: ") + buf);
      }
  };
  LayoutOptions opt;
  opt.x_truncation = cfg_.x_truncation;
  const bool bounded = std::isfinite(lo) && std::isfinite(hi);

  std::vector<Feature> g_feats{{0.0, g_scale, 4.0 * gap / g_scale}};
  if (jump_engine_) g_feats.push_back({0.0, g_scale * jump_engine_->tail_crossover(), 0.0});
  std::vector<Feature> k_feats{{center, width, 4.0 * (gap + 64.0 * g_scale) / width}};
  if (params_.beta < 2.0) k_feats.push_back({center, width * engine_->tail_crossover(), 0.0});
  auto in_y = [&](double y) { return f(y, y - center, (x - theta * y) / s); };

  if (mode != Mode::Split) {
    std::vector<Feature> feats = g_feats;
    feats.insert(feats.end(), k_feats.begin(), k_feats.end());
    const auto segs = bounded ? interval_layout(feats, lo, hi, opt) : real_line_layout(feats, opt);
    const auto r = integrate<4>(in_y, segs, tol, cfg_.max_panels);
    check(r);
    return r.value;
  }

  // Two regions split at y = x/(2 theta): around the kernel peak in z, around
  // the G peak in y. z keeps full precision far out in x, where y is large.
  // center is rounded, so the kernel peak sits near shift = resid/theta rather
  // than at 0; the kernel argument is formed from the exact remainder of that.
  const double resid = std::fma(-theta, center, x);
  const double shift = resid / theta;
  const double resid2 = std::fma(-theta, shift, resid);
  auto in_z = [&](double u) {
    const double z = shift + u;
    return f(center + z, z, (resid2 - theta * u) / s);
  };
  const double mid = 0.5 * center;
  const bool up = center > 0.0;  // kernel region lies above mid
  std::vector<Feature> z_feats;
  for (auto ft : k_feats) {
    ft.center = 0.0;
    z_feats.push_back(ft);
  }
  z_feats.push_back({-shift, r0, 2.0});

  std::vector<Segment> kseg, gseg;
  if (bounded) {
    const double klo = up ? std::max(lo, mid) : lo, khi = up ? hi : std::min(hi, mid);
    const double glo = up ? lo : std::max(lo, mid), ghi = up ? std::min(hi, mid) : hi;
    if (khi > klo) kseg = interval_layout(z_feats, klo - center - shift, khi - center - shift, opt);
    if (ghi > glo) gseg = interval_layout(g_feats, glo, ghi, opt);
  } else {
    kseg = half_line_layout(z_feats, mid - center - shift, up, opt);
    gseg = half_line_layout(g_feats, mid, !up, opt);
  }
  Vec<4> total{};
  if (!kseg.empty()) {
    const auto r = integrate<4>(in_z, kseg, tol, cfg_.max_panels);
    check(r);
    known = r.value;
  }
  total = known;
  if (!gseg.empty()) {
    const auto r = integrate<4>(in_y, gseg, tol, cfg_.max_panels);
    check(r);
    for (std::size_t k = 0; k < 4; ++k) total[k] += r.value[k];
  }
  return total;
}

Vec<4> DensityModel::kernel_integrals(double x, bool need_hd) const {
  const double s = spread_;
  const double theta = params_.theta;
  auto kern = [&](double y) {
    const StableKernel k = engine_->kernel((x - theta * y) / s);
    return Vec<4>{k.h, k.breve, y * k.h1, need_hd ? k.hd : 0.0};
  };
  auto add = [](Vec<4>& acc, const Vec<4>& v, double w) {
    for (std::size_t k = 0; k < 4; ++k) acc[k] += w * v[k];
  };
  Vec<4> out{};
  switch (spec_.index()) {
    case 0:
      return kern(0.0);
    case 1:
      return kern(params_.delta);
    case 2:
      for (std::size_t k = 0; k < weights_.size(); ++k) add(out, kern(static_cast<double>(k)), weights_[k]);
      return out;
    case 3: {
      const auto& cp = std::get<CompoundPoisson>(spec_);
      add(out, kern(0.0), weights_[0]);
      for (std::size_t k = 1; k < weights_.size(); ++k) {
        const int kk = static_cast<int>(k);
        const double half = cp.jumps.support(kk);
        const double sc = cp.jumps.scale() * std::sqrt(static_cast<double>(kk));
        add(out,
            continuous_part(
                x, need_hd, [&](double z) { return cp.jumps.convolution_pdf(kk, z); },
                [&](double z) { return cp.jumps.convolution_derivative(kk, z); }, sc, -half, half),
            weights_[k]);
      }
      return out;
    }
    default: {
      const auto& ss = std::get<SymmetricStable>(spec_);
      const double a = std::pow(params_.delta, 1.0 / ss.alpha);
      const auto& je = *jump_engine_;
      return continuous_part(
          x, need_hd, [&](double y) { return je.density(y / a) / a; },
          [&](double y) { return je.deriv(y / a, 1) / (a * a); }, a, -INFINITY, INFINITY);
    }
  }
}

double DensityModel::density(double x) const { return kernel_integrals(x, false)[0] / spread_; }

DensityBundle DensityModel::bundle(double x) const {
  const bool stable_index = params_.beta < 2.0;
  const Vec<4> A = kernel_integrals(x, stable_index);
  const double s = spread_;
  DensityBundle b;
  b.p = A[0] / s;
  b.dp_dsigma = -A[1] / (params_.sigma * s);
  b.dp_dtheta = -A[2] / (s * s);
  if (stable_index) {
    const double beta = params_.beta;
    b.v = A[3] / s;
    b.dp_dbeta = *b.v - params_.sigma * std::log(params_.delta) / (beta * beta) * b.dp_dsigma;
  }
  return b;
}

std::vector<Feature> DensityModel::features() const {
  const double s = spread_;
  const double theta = params_.theta;
  std::vector<Feature> f{{0.0, s}};
  if (params_.beta < 2.0) f.push_back({0.0, s * engine_->tail_crossover()});
  switch (spec_.index()) {
    case 1:
      f.push_back({theta * params_.delta, s});
      break;
    case 2:
      for (std::size_t k = 1; k < weights_.size(); ++k) f.push_back({theta * static_cast<double>(k), s});
      break;
    case 3: {
      const auto& cp = std::get<CompoundPoisson>(spec_);
      for (std::size_t k = 1; k < weights_.size(); ++k) {
        const double jw = std::abs(theta) * cp.jumps.scale() * std::sqrt(static_cast<double>(k));
        if (jw > 0.0) f.push_back({0.0, std::hypot(s, jw)});
      }
      break;
    }
    case 4: {
      const auto& ss = std::get<SymmetricStable>(spec_);
      const double a = std::abs(theta) * std::pow(params_.delta, 1.0 / ss.alpha);
      if (a > 0.0) {
        f.push_back({0.0, a});
        f.push_back({0.0, a * jump_engine_->tail_crossover()});
      }
      break;
    }
    default:
      break;
  }
  return f;
}

double eval_density(const ModelParams& params, const PerturbationSpec& spec, double x, const QuadratureConfig& cfg) {
  return DensityModel(params, spec, cfg).density(x);
}

DensityBundle eval_bundle(const ModelParams& params, const PerturbationSpec& spec, double x,
                          const QuadratureConfig& cfg) {
  return DensityModel(params, spec, cfg).bundle(x);
}

}  // namespace levyfisher
