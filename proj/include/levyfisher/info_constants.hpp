#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "levyfisher/jump_density.hpp"
#include "levyfisher/stable.hpp"

namespace levyfisher {

// Scale, location and index information of one standard stable draw, plus the
// scale/index cross integral. calK and calM are empty at beta = 2.
struct InfoConstants {
  double beta = 2.0;
  double calI = 0.0;
  double calJ = 0.0;
  std::optional<double> calK;
  std::optional<double> calM;
  std::vector<std::string> warnings;
};

double calI(double beta, const QuadratureConfig& cfg = {});
double calJ(double beta, const QuadratureConfig& cfg = {});
// Throws UndefinedAtBoundary at beta = 2.
double calK(double beta, const QuadratureConfig& cfg = {});
// Integral of breve * hdot / h; throws UndefinedAtBoundary at beta = 2.
double calM(double beta, const QuadratureConfig& cfg = {});

InfoConstants info_constants(double beta, const QuadratureConfig& cfg = {});

// Above this index the integrand of calK develops a slowly decaying bulge.
constexpr double kCalKWarnBeta = 1.95;

// Information of a scale parameter acting on a jump law with the given pdf.
double calL(const std::function<double(double)>& pdf, const std::function<double(double)>& dpdf, double scale,
            const QuadratureConfig& cfg = {});
double calL(const JumpDensity& f, const QuadratureConfig& cfg = {});

// Same functional for the n-fold convolution of f; numeric = true uses the
// grid convolution instead of the closed form.
double calL_n(const JumpDensity& f, int n, bool numeric = false, const QuadratureConfig& cfg = {});

}  // namespace levyfisher
