#include "levyfisher/jump_density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "levyfisher/errors.hpp"

namespace levyfisher {

namespace {
constexpr double kPi = std::numbers::pi;

double log_factorial(int n) { return std::lgamma(n + 1.0); }
}  // namespace

JumpDensity JumpDensity::gaussian(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("gaussian jump sigma must be positive");
  return JumpDensity(Kind::Gaussian, sigma);
}

JumpDensity JumpDensity::laplace(double b) {
  if (!(b > 0.0) || !std::isfinite(b)) throw ConfigError("laplace jump scale must be positive");
  return JumpDensity(Kind::Laplace, b);
}

std::string JumpDensity::name() const { return kind_ == Kind::Gaussian ? "gaussian" : "laplace"; }

double JumpDensity::pdf(double u) const { return convolution_pdf(1, u); }

double JumpDensity::derivative(double u) const { return convolution_derivative(1, u); }

double JumpDensity::second_moment() const {
  return kind_ == Kind::Gaussian ? scale_ * scale_ : 2.0 * scale_ * scale_;
}

double JumpDensity::tail(double x) const {
  if (x <= 0.0) return 1.0;
  if (kind_ == Kind::Gaussian) return std::erfc(x / (scale_ * std::sqrt(2.0)));
  return std::exp(-x / scale_);
}

double laplace_convolution_exact(int k, double b, double z) {
  const double x = std::abs(z) / b;
  double sum = 0.0;
  for (int j = 0; j <= k - 1; ++j) {
    const double log_c = log_factorial(k - 1 + j) - log_factorial(j) - log_factorial(k - 1 - j) - j * std::log(2.0);
    sum += std::exp(log_c) * std::pow(x, k - 1 - j);
  }
  return std::exp(-x - k * std::log(2.0) - log_factorial(k - 1)) * sum / b;
}

double JumpDensity::convolution_pdf(int k, double z) const {
  if (k < 1) throw ConfigError("convolution order must be at least 1");
  if (kind_ == Kind::Gaussian) {
    const double s = scale_ * std::sqrt(static_cast<double>(k));
    return std::exp(-0.5 * (z / s) * (z / s)) / (s * std::sqrt(2.0 * kPi));
  }
  return laplace_convolution_exact(k, scale_, z);
}

double JumpDensity::convolution_derivative(int k, double z) const {
  if (k < 1) throw ConfigError("convolution order must be at least 1");
  if (kind_ == Kind::Gaussian) {
    const double s2 = scale_ * scale_ * k;
    return -z / s2 * convolution_pdf(k, z);
  }
  if (z == 0.0) return 0.0;
  const double b = scale_;
  const double x = std::abs(z) / b;
  double poly = 0.0;
  double dpoly = 0.0;
  for (int j = 0; j <= k - 1; ++j) {
    const double c =
        std::exp(log_factorial(k - 1 + j) - log_factorial(j) - log_factorial(k - 1 - j) - j * std::log(2.0));
    const int p = k - 1 - j;
    poly += c * std::pow(x, p);
    if (p > 0) dpoly += c * p * std::pow(x, p - 1);
  }
  const double pre = std::exp(-x - k * std::log(2.0) - log_factorial(k - 1)) / b;
  const double sgn = z > 0.0 ? 1.0 : -1.0;
  return sgn * pre * (dpoly - poly) / b;
}

double JumpDensity::support(int k) const {
  if (kind_ == Kind::Gaussian) return scale_ * std::sqrt(static_cast<double>(k)) * std::sqrt(2.0 * 30.0 * std::log(10.0));
  double x = 70.0;
  for (int i = 0; i < 20; ++i) x = 69.08 + (k - 1) * std::log(std::max(x, 1.0));
  return x * scale_;
}

void JumpDensity::check_regularity() const {
  double sup = 0.0;
  const double reach = support(1);
  for (int i = -2000; i <= 2000; ++i) {
    const double u = reach * i / 2000.0;
    sup = std::max(sup, std::abs(derivative(u)) * (1.0 + std::abs(u)));
  }
  const double far = 1e3 * reach;
  if (!std::isfinite(sup) || std::abs(far * pdf(far)) > 1e-12 || std::abs(reach * pdf(reach)) > 1e-6)
    throw ConfigError("jump density violates the regularity condition");
}

GridConvolution::GridConvolution(const JumpDensity& f, int k, int points_per_scale) {
  if (k < 1) throw ConfigError("convolution order must be at least 1");
  step_ = f.scale() / points_per_scale;
  const double single = 40.0 * f.scale();
  half_width_ = k * single;
  const int m = static_cast<int>(std::ceil(single / step_));
  std::vector<double> kernel(2 * m + 1);
  for (int i = -m; i <= m; ++i) kernel[i + m] = f.pdf(i * step_);
  // Cell averages of a kinked density converge faster than point samples.
  if (f.kind() == JumpDensity::Kind::Laplace) {
    const double b = f.scale();
    kernel[m] = (1.0 - std::exp(-0.5 * step_ / b)) / step_;
  }

  int n = m;
  std::vector<double> cur = kernel;
  for (int order = 2; order <= k; ++order) {
    const int nn = n + m;
    std::vector<double> next(2 * nn + 1, 0.0);
    for (int i = -n; i <= n; ++i) {
      const double a = cur[i + n];
      if (a == 0.0) continue;
      for (int j = -m; j <= m; ++j) next[i + j + nn] += a * kernel[j + m] * step_;
    }
    cur.swap(next);
    n = nn;
  }
  values_ = cur;
  slopes_.assign(values_.size(), 0.0);
  for (std::size_t i = 1; i + 1 < values_.size(); ++i) slopes_[i] = (values_[i + 1] - values_[i - 1]) / (2.0 * step_);
  half_width_ = n * step_;
}

double GridConvolution::pdf(double z) const {
  const double pos = z / step_ + 0.5 * (static_cast<double>(values_.size()) - 1.0);
  if (pos < 0.0 || pos > static_cast<double>(values_.size() - 1)) return 0.0;
  const std::size_t i = std::min(static_cast<std::size_t>(pos), values_.size() - 2);
  const double t = pos - static_cast<double>(i);
  return (1.0 - t) * values_[i] + t * values_[i + 1];
}

double GridConvolution::derivative(double z) const {
  const double pos = z / step_ + 0.5 * (static_cast<double>(values_.size()) - 1.0);
  if (pos < 0.0 || pos > static_cast<double>(values_.size() - 1)) return 0.0;
  const std::size_t i = std::min(static_cast<std::size_t>(pos), values_.size() - 2);
  const double t = pos - static_cast<double>(i);
  return (1.0 - t) * slopes_[i] + t * slopes_[i + 1];
}

}  // namespace levyfisher
