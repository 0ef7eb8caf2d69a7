#pragma once

// Vector-valued adaptive Gauss-Kronrod quadrature over piecewise segments,
// with exponential maps for power-law tails on half-lines.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "levyfisher/errors.hpp"

namespace levyfisher {

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;
  int max_panels = 4000;
  // The inversion integrand is cut where its modulus falls below
  // exp(-u_truncation); the frequency cutoff itself depends on beta.
  double u_truncation = 46.0;
  // Outermost |x| reached by information integrals, in units of the
  // widest feature scale of the integrand.
  double x_truncation = 1e36;
  double fd_step = 1e-4;

  void validate() const;
};

template <std::size_t N>
using Vec = std::array<double, N>;

// One integration piece. Linear pieces integrate t over [a, b] with x = t.
// Tail pieces map t in [a, b] to x = origin + sign * scale * expm1(t).
struct Segment {
  double a = 0.0;
  double b = 0.0;
  bool tail = false;
  double origin = 0.0;
  double scale = 1.0;
  double sign = 1.0;

  double map(double t, double& jacobian) const {
    if (!tail) {
      jacobian = 1.0;
      return t;
    }
    const double e = std::exp(t);
    jacobian = scale * e;
    return origin + sign * scale * (e - 1.0);
  }
};

template <std::size_t N>
struct QuadResult {
  Vec<N> value{};
  Vec<N> error{};
  Vec<N> l1{};
  int panels = 0;
  bool converged = false;
};

namespace detail {

struct GK21 {
  static const std::array<double, 11>& nodes();
  static const std::array<double, 11>& kronrod();
  static const std::array<double, 5>& gauss();  // weights of odd nodes
};

template <std::size_t N>
struct Panel {
  double a, b;
  const Segment* seg;
  Vec<N> value, error, l1;
  double priority;
  bool operator<(const Panel& o) const { return priority < o.priority; }
};

template <std::size_t N, class F>
Panel<N> eval_panel(F& f, const Segment& seg, double a, double b) {
  const auto& xk = GK21::nodes();
  const auto& wk = GK21::kronrod();
  const auto& wg = GK21::gauss();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);

  std::array<Vec<N>, 21> fv;
  for (int i = 0; i < 21; ++i) {
    const int j = i < 11 ? i : i - 10;
    const double t = i < 11 ? c - h * xk[j] : c + h * xk[j];
    if (i == 0) {
      double jac = 0.0;
      const double x = seg.map(c, jac);
      fv[0] = f(x);
      for (auto& v : fv[0]) v *= jac;
      continue;
    }
    double jac = 0.0;
    const double x = seg.map(t, jac);
    fv[i] = f(x);
    for (auto& v : fv[i]) v *= jac;
  }
  // fv[0] center, fv[1..10] left nodes xk[1..10], fv[11..20] right nodes.
  Panel<N> p{a, b, &seg, {}, {}, {}, 0.0};
  for (std::size_t k = 0; k < N; ++k) {
    double rk = wk[0] * fv[0][k];
    double rabs = std::abs(rk);
    double rg = 0.0;
    for (int j = 1; j <= 10; ++j) {
      const double s = fv[j][k] + fv[j + 10][k];
      rk += wk[j] * s;
      rabs += wk[j] * (std::abs(fv[j][k]) + std::abs(fv[j + 10][k]));
      if (j % 2 == 1) rg += wg[(j - 1) / 2] * s;
    }
    const double mean = 0.5 * rk;
    double rasc = wk[0] * std::abs(fv[0][k] - mean);
    for (int j = 1; j <= 10; ++j)
      rasc += wk[j] * (std::abs(fv[j][k] - mean) + std::abs(fv[j + 10][k] - mean));
    rk *= h;
    rg *= h;
    rabs *= std::abs(h);
    rasc *= std::abs(h);
    double err = std::abs(rk - rg);
    if (rasc != 0.0 && err != 0.0)
      err = rasc * std::min(1.0, std::pow(200.0 * err / rasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (rabs > std::numeric_limits<double>::min() / (50.0 * eps))
      err = std::max(50.0 * eps * rabs, err);
    if (!std::isfinite(rk)) err = std::numeric_limits<double>::infinity();
    p.value[k] = rk;
    p.error[k] = err;
    p.l1[k] = rabs;
  }
  return p;
}

}  // namespace detail

// Tolerance policy: tol_k = max(rel * |I_k|, abs, roundoff floor).
struct RelTol {
  double rel = 1e-10;
  double abs = 0.0;
  template <std::size_t N>
  Vec<N> operator()(const Vec<N>& v, const Vec<N>& l1) const {
    Vec<N> t{};
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t k = 0; k < N; ++k)
      t[k] = std::max({rel * std::abs(v[k]), abs, 50.0 * eps * l1[k]});
    return t;
  }
};

// Globally adaptive integration of a vector integrand over the union of the
// segments. `tol` maps (current value, current L1 norm) to per-component
// absolute tolerances. Returns with converged=false once max_panels is hit.
template <std::size_t N, class F, class Tol>
QuadResult<N> integrate(F&& f, std::span<const Segment> segments, Tol&& tol, int max_panels) {
  using P = detail::Panel<N>;
  std::priority_queue<P> heap;
  QuadResult<N> out;
  auto accumulate = [&](const P& p, double sgn) {
    for (std::size_t k = 0; k < N; ++k) {
      out.value[k] += sgn * p.value[k];
      out.error[k] += sgn * p.error[k];
      out.l1[k] += sgn * p.l1[k];
    }
  };
  auto priority = [&](P& p, const Vec<N>& t) {
    double pr = 0.0;
    for (std::size_t k = 0; k < N; ++k)
      pr = std::max(pr, p.error[k] / std::max(t[k], std::numeric_limits<double>::min()));
    const double width = std::abs(p.b - p.a);
    const double mid = std::abs(0.5 * (p.a + p.b));
    if (width <= 1e-13 * std::max(mid, 1e-300)) pr = -1.0;  // unsplittable
    p.priority = pr;
  };

  std::vector<P> initial;
  for (const auto& s : segments) {
    if (!(s.b > s.a)) continue;
    initial.push_back(detail::eval_panel<N>(f, s, s.a, s.b));
    accumulate(initial.back(), 1.0);
  }
  out.panels = static_cast<int>(initial.size());
  {
    const Vec<N> t = tol(out.value, out.l1);
    for (auto& p : initial) {
      priority(p, t);
      heap.push(p);
    }
  }

  int iter = 0;
  while (true) {
    const Vec<N> t = tol(out.value, out.l1);
    bool ok = true;
    for (std::size_t k = 0; k < N; ++k)
      if (!(out.error[k] <= t[k])) ok = false;
    if (ok) {
      out.converged = true;
      break;
    }
    if (heap.empty() || out.panels >= max_panels) break;
    P top = heap.top();
    if (top.priority < 0.0) break;
    heap.pop();
    accumulate(top, -1.0);
    const double mid = 0.5 * (top.a + top.b);
    P l = detail::eval_panel<N>(f, *top.seg, top.a, mid);
    P r = detail::eval_panel<N>(f, *top.seg, mid, top.b);
    accumulate(l, 1.0);
    accumulate(r, 1.0);
    out.panels += 1;
    priority(l, t);
    priority(r, t);
    heap.push(l);
    heap.push(r);
    if (++iter % 64 == 0) {
      // Refresh running sums to avoid drift from repeated subtraction.
      std::vector<P> all;
      all.reserve(heap.size());
      out.value = {};
      out.error = {};
      out.l1 = {};
      while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
      }
      for (auto& p : all) accumulate(p, 1.0);
      const Vec<N> t2 = tol(out.value, out.l1);
      for (auto& p : all) {
        if (p.priority >= 0.0) priority(p, t2);
        heap.push(p);
      }
    }
  }
  return out;
}

// A localized feature of an integrand on the real line: the layout places a
// geometric ladder of breakpoints around each center at multiples of scale.
struct Feature {
  double center = 0.0;
  double scale = 1.0;
  // Ladder extent in scales; 0 uses LayoutOptions::min_reach.
  double reach = 0.0;
};

struct LayoutOptions {
  double ladder_ratio = 4.0;
  // Ladders extend at least this many scales from their center.
  double min_reach = 64.0;
  // Tail maps reach x_truncation times the widest feature scale.
  double x_truncation = 1e36;
  // Number of pieces the tail parameter range is initially cut into.
  int tail_pieces = 6;
};

// Breakpoint layout for an integral over the whole line.
std::vector<Segment> real_line_layout(std::span<const Feature> features, const LayoutOptions& opt = {});

// Breakpoint layout over [lo, +inf) (upper = +inf) or (-inf, lo] (upper = false)
// including only the breakpoints on that side.
std::vector<Segment> half_line_layout(std::span<const Feature> features, double lo, bool upper,
                                      const LayoutOptions& opt = {});

// Layout over a finite interval [lo, hi].
std::vector<Segment> interval_layout(std::span<const Feature> features, double lo, double hi,
                                     const LayoutOptions& opt = {});

// Scalar convenience wrapper.
template <class F>
double integrate_scalar(F&& f, std::span<const Segment> segs, double rel_tol, int max_panels,
                        double abs_tol = 0.0, double* error = nullptr) {
  auto g = [&](double x) { return Vec<1>{f(x)}; };
  auto r = integrate<1>(g, segs, RelTol{rel_tol, abs_tol}, max_panels);
  if (error) *error = r.error[0];
  if (!r.converged && !(r.error[0] <= 1e3 * std::max(rel_tol * std::abs(r.value[0]), abs_tol)))
    throw QuadratureFailure("adaptive quadrature did not converge (estimate " +
                            std::to_string(r.value[0]) + ", error " + std::to_string(r.error[0]) + ")");
  return r.value[0];
}

}  // namespace levyfisher
