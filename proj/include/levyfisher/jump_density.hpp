#pragma once

#include <memory>
#include <string>
#include <vector>

#include "levyfisher/quadrature.hpp"

namespace levyfisher {

// Jump-size law of a compound Poisson perturbation.
class JumpDensity {
 public:
  enum class Kind { Gaussian, Laplace };

  static JumpDensity gaussian(double sigma);
  // Double exponential e^{-|u|/b} / (2b).
  static JumpDensity laplace(double b);

  Kind kind() const { return kind_; }
  double scale() const { return scale_; }
  std::string name() const;

  double pdf(double u) const;
  double derivative(double u) const;
  double mean() const { return 0.0; }
  double second_moment() const;
  // P(|J| > x)
  double tail(double x) const;

  // Law of the sum of k independent jumps, k >= 1.
  double convolution_pdf(int k, double z) const;
  double convolution_derivative(int k, double z) const;
  // Half-width beyond which the k-fold density is below 1e-30 of its peak.
  double support(int k) const;

  // Verifies u f(u) -> 0 and sup |f'|(1 + |u|) < inf on a grid.
  void check_regularity() const;

 private:
  JumpDensity(Kind kind, double scale) : kind_(kind), scale_(scale) {}

  Kind kind_;
  double scale_;
};

// Closed-form k-fold Laplace convolution, used as a test oracle.
double laplace_convolution_exact(int k, double b, double z);

// Uniform-grid k-fold convolution of an even density, with linear interpolation
// of the result; kept separate so tests can exercise it against closed forms.
class GridConvolution {
 public:
  GridConvolution(const JumpDensity& f, int k, int points_per_scale = 50);
  double pdf(double z) const;
  double derivative(double z) const;
  double half_width() const { return half_width_; }
  double step() const { return step_; }
  // Grid values at z = (i - (size - 1) / 2) * step.
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& slopes() const { return slopes_; }

 private:
  double step_ = 0.0;
  double half_width_ = 0.0;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

}  // namespace levyfisher
