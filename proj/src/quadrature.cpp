#include "levyfisher/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace levyfisher {

void QuadratureConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be positive");
  };
  positive(rel_tol, "rel_tol");
  positive(abs_tol, "abs_tol");
  positive(u_truncation, "u_truncation");
  positive(x_truncation, "x_truncation");
  positive(fd_step, "fd_step");
  if (max_panels < 16) throw ConfigError("max_panels must be at least 16");
  if (rel_tol >= 0.1) throw ConfigError("rel_tol must be below 0.1");
}

namespace detail {

namespace {
template <std::size_t M, class Src>
std::array<double, M> copy_table(const Src& src) {
  std::array<double, M> out{};
  for (std::size_t i = 0; i < M; ++i) out[i] = src[i];
  return out;
}
}  // namespace

const std::array<double, 11>& GK21::nodes() {
  static const auto t = copy_table<11>(boost::math::quadrature::gauss_kronrod<double, 21>::abscissa());
  return t;
}

const std::array<double, 11>& GK21::kronrod() {
  static const auto t = copy_table<11>(boost::math::quadrature::gauss_kronrod<double, 21>::weights());
  return t;
}

const std::array<double, 5>& GK21::gauss() {
  static const auto t = copy_table<5>(boost::math::quadrature::gauss<double, 10>::weights());
  return t;
}

}  // namespace detail

namespace {

std::vector<double> ladder_points(std::span<const Feature> features, const LayoutOptions& opt) {
  std::vector<double> pts;
  for (const auto& f : features) {
    if (!(f.scale > 0.0) || !std::isfinite(f.center)) continue;
    pts.push_back(f.center);
    double step = f.scale / (opt.ladder_ratio * opt.ladder_ratio);
    const double reach = std::max(opt.min_reach, f.reach);
    while (step <= reach * f.scale * 1.0000001) {
      pts.push_back(f.center - step);
      pts.push_back(f.center + step);
      step *= opt.ladder_ratio;
    }
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double p : pts) {
    if (!out.empty()) {
      const double gap = p - out.back();
      const double mag = std::max(std::abs(p), std::abs(out.back()));
      if (gap <= 1e-12 * mag || gap == 0.0) continue;
    }
    out.push_back(p);
  }
  return out;
}

double widest(std::span<const Feature> features) {
  double s = 0.0;
  for (const auto& f : features) s = std::max(s, f.scale);
  return s > 0.0 ? s : 1.0;
}

void add_linear(std::vector<Segment>& segs, const std::vector<double>& pts) {
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) segs.push_back(Segment{pts[i], pts[i + 1]});
}

void add_tail(std::vector<Segment>& segs, double origin, double sign, double scale, const LayoutOptions& opt) {
  const double reach = opt.x_truncation * scale;
  const double tmax = std::log1p(reach / scale);
  const int pieces = std::max(1, opt.tail_pieces);
  // Early pieces are short: the integrand usually changes fastest just past the origin.
  std::vector<double> cuts{0.0};
  double t = std::min(1.0, tmax);
  while (t < tmax && static_cast<int>(cuts.size()) < pieces) {
    cuts.push_back(t);
    t *= 3.0;
  }
  cuts.push_back(tmax);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Segment s;
    s.a = cuts[i];
    s.b = cuts[i + 1];
    s.tail = true;
    s.origin = origin;
    s.scale = scale;
    s.sign = sign;
    segs.push_back(s);
  }
}

}  // namespace

std::vector<Segment> real_line_layout(std::span<const Feature> features, const LayoutOptions& opt) {
  auto pts = ladder_points(features, opt);
  if (pts.empty()) pts = {-1.0, 0.0, 1.0};
  const double s = widest(features);
  std::vector<Segment> segs;
  add_tail(segs, pts.front(), -1.0, s, opt);
  add_linear(segs, pts);
  add_tail(segs, pts.back(), 1.0, s, opt);
  return segs;
}

std::vector<Segment> half_line_layout(std::span<const Feature> features, double lo, bool upper,
                                      const LayoutOptions& opt) {
  const auto all = ladder_points(features, opt);
  std::vector<double> pts{lo};
  for (double p : all)
    if (upper ? p > lo : p < lo) pts.push_back(p);
  std::sort(pts.begin(), pts.end());
  const double s = widest(features);
  std::vector<Segment> segs;
  if (upper) {
    add_linear(segs, pts);
    add_tail(segs, pts.back(), 1.0, s, opt);
  } else {
    add_tail(segs, pts.front(), -1.0, s, opt);
    add_linear(segs, pts);
  }
  return segs;
}

std::vector<Segment> interval_layout(std::span<const Feature> features, double lo, double hi,
                                     const LayoutOptions& opt) {
  const auto all = ladder_points(features, opt);
  std::vector<double> pts{lo};
  for (double p : all)
    if (p > lo && p < hi) pts.push_back(p);
  pts.push_back(hi);
  std::vector<Segment> segs;
  add_linear(segs, pts);
  return segs;
}

}  // namespace levyfisher
