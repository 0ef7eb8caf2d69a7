#include "levyfisher/info_constants.hpp"

#include <cmath>

namespace levyfisher {

namespace {

template <class F>
double stable_integral(double beta, const QuadratureConfig& cfg, F&& integrand) {
  auto engine = engine_for(beta, cfg);
  const std::vector<Feature> features{{0.0, 1.0}, {0.0, engine->tail_crossover()}};
  LayoutOptions opt;
  opt.x_truncation = cfg.x_truncation;
  const auto segs = half_line_layout(features, 0.0, true, opt);
  return 2.0 * integrate_scalar([&](double w) { return integrand(engine->kernel(w)); }, segs, cfg.rel_tol,
                                cfg.max_panels);
}

}  // namespace

double calI(double beta, const QuadratureConfig& cfg) {
  StableIndex b(beta);
  if (b.gaussian()) return 2.0;
  return stable_integral(beta, cfg, [](const StableKernel& k) {
    if (!(k.h > 0.0)) return 0.0;
    const double r = k.breve / k.h;
    return k.h * r * r;
  });
}

double calJ(double beta, const QuadratureConfig& cfg) {
  StableIndex b(beta);
  if (b.gaussian()) return 1.0;
  return stable_integral(beta, cfg, [](const StableKernel& k) {
    if (!(k.h > 0.0)) return 0.0;
    const double r = k.h1 / k.h;
    return k.h * r * r;
  });
}

double calK(double beta, const QuadratureConfig& cfg) {
  StableIndex b(beta);
  if (b.gaussian()) throw UndefinedAtBoundary("index information is infinite at beta = 2");
  return stable_integral(beta, cfg, [](const StableKernel& k) {
    if (!(k.h > 0.0)) return 0.0;
    const double r = k.hd / k.h;
    return k.h * r * r;
  });
}

double calM(double beta, const QuadratureConfig& cfg) {
  StableIndex b(beta);
  if (b.gaussian()) throw UndefinedAtBoundary("scale/index cross integral is undefined at beta = 2");
  return stable_integral(beta, cfg, [](const StableKernel& k) {
    if (!(k.h > 0.0)) return 0.0;
    return k.h * (k.breve / k.h) * (k.hd / k.h);
  });
}

InfoConstants info_constants(double beta, const QuadratureConfig& cfg) {
  InfoConstants out;
  out.beta = beta;
  out.calI = calI(beta, cfg);
  out.calJ = calJ(beta, cfg);
  if (beta < 2.0) {
    out.calK = calK(beta, cfg);
    out.calM = calM(beta, cfg);
    if (beta > kCalKWarnBeta)
      out.warnings.push_back("calK near beta = 2 grows without bound; value may converge slowly");
  }
  return out;
}

double calL(const std::function<double(double)>& pdf, const std::function<double(double)>& dpdf, double scale,
            const QuadratureConfig& cfg) {
  auto integrand = [&](double u) {
    const double f = pdf(u);
    if (!(f > 0.0)) return 0.0;
    const double r = u * dpdf(u) / f + 1.0;
    return f * r * r;
  };
  // Growth check: |u| times the integrand must fall off in the tails.
  const double near = 1e2 * scale, far = 1e6 * scale;
  if (std::abs(far * integrand(far)) > 1e-8 + std::abs(near * integrand(near)) ||
      std::abs(far * integrand(-far)) > 1e-8 + std::abs(near * integrand(-near)))
    throw DivergentIntegral("multiplicative information integrand is not integrable");
  const std::vector<Feature> features{{0.0, scale}};
  LayoutOptions opt;
  opt.x_truncation = cfg.x_truncation;
  const auto segs = half_line_layout(features, 0.0, true, opt);
  const auto segs_neg = half_line_layout(features, 0.0, false, opt);
  try {
    return integrate_scalar(integrand, segs, cfg.rel_tol, cfg.max_panels) +
           integrate_scalar(integrand, segs_neg, cfg.rel_tol, cfg.max_panels);
  } catch (const QuadratureFailure& e) {
    throw DivergentIntegral(std::string("multiplicative information: ") + e.what());
  }
}

double calL(const JumpDensity& f, const QuadratureConfig& cfg) {
  return calL([&](double u) { return f.pdf(u); }, [&](double u) { return f.derivative(u); }, f.scale(), cfg);
}

double calL_n(const JumpDensity& f, int n, bool numeric, const QuadratureConfig& cfg) {
  if (n < 1 || n > 4) throw ConfigError("convolution order must be in 1..4");
  const double scale = f.scale() * std::sqrt(static_cast<double>(n));
  if (!numeric)
    return calL([&](double u) { return f.convolution_pdf(n, u); },
                [&](double u) { return f.convolution_derivative(n, u); }, scale, cfg);
  const GridConvolution g(f, n);
  const auto& v = g.values();
  const auto& d = g.slopes();
  const double c = 0.5 * (static_cast<double>(v.size()) - 1.0);
  double sum = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (!(v[i] > 1e-300)) continue;
    const double u = (static_cast<double>(i) - c) * g.step();
    const double r = u * d[i] / v[i] + 1.0;
    sum += v[i] * r * r;
  }
  return sum * g.step();
}

}  // namespace levyfisher
