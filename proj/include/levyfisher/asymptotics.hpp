#pragma once

#include <optional>
#include <string>
#include <vector>

#include "levyfisher/fisher.hpp"

namespace levyfisher {

enum class TheoremId { T2a, T2c, T3bound, T4, T5, T6, T7_SS1, T7_SS2, T7_SS3, T7_SS4, T8, T9, T10 };
enum class Entry { SS, SB, BB, ST, BT, TT, Mult };

std::string theorem_name(TheoremId id);
TheoremId parse_theorem(const std::string& s);
std::string entry_name(Entry e);
Entry parse_entry(const std::string& s);

// Asymptotic size delta^exponent * log(1/delta)^log_power of an entry.
struct Rate {
  double exponent = 0.0;
  double log_power = 0.0;
  double operator()(double delta) const;
};

enum class LimitKind { Value, Zero, Interval, UpperBound, StrictlyBelow };

struct TheoremPrediction {
  TheoremId theorem = TheoremId::T2a;
  Entry entry = Entry::SS;
  Rate rate;
  LimitKind kind = LimitKind::Value;
  // Value, upper end of an interval or bound.
  double limit = 0.0;
  // Lower end for intervals.
  double lower = 0.0;
  // True when the constant comes from a numerical integral (SS2, SS4, T6 lower end).
  bool computed = false;
  std::string note;

  double normalize(double value, double delta) const { return value / rate(delta); }
  // Rate u_n of an efficient estimator with n observations at this delta.
  double estimator_rate(double n, double delta) const;
};

// Every display of a theorem that applies to the given parameters.
std::vector<TheoremPrediction> predict(TheoremId id, const ModelParams& params, const PerturbationSpec& spec,
                                       const QuadratureConfig& cfg = {});
TheoremPrediction predict(TheoremId id, Entry entry, const ModelParams& params, const PerturbationSpec& spec,
                          const QuadratureConfig& cfg = {});

// The inner function of the two-stable limit for alpha > beta/2:
// integral over y of (h(x) - h(x - y)) / |y|^(1 + alpha).
double stable_fractional_term(double alpha, double beta, double x, const QuadratureConfig& cfg = {});

struct ConstantResult {
  double value = 0.0;
  double refined_change = 0.0;  // relative change under tighter tolerance
  std::vector<std::string> warnings;
};

// Two-stable limit constants, beta < 2; alpha in (beta/2, beta) and (0, beta/2).
ConstantResult ss2_constant(double alpha, double beta, double sigma, double theta, const QuadratureConfig& cfg = {});
double ss4_constant(double alpha, double beta, double sigma, double theta, const QuadratureConfig& cfg = {});
// Closed form of the integral in ss4_constant.
double ss4_constant_exact(double alpha, double beta, double sigma, double theta);

// Lower end of the compound Poisson theta interval for beta < 2.
double cp_theta_lower_bound(double beta, double sigma, double theta, const CompoundPoisson& cp,
                            const QuadratureConfig& cfg = {});

// Entry of the information matrix, or the multiplicative information.
double entry_value(const FisherMatrix& m, Entry e);

// I^ss + 2 I^st + I^tt at theta = sigma: one scale acting on sigma (W + Y).
double multiplicative_information(const ModelParams& params, const PerturbationSpec& spec,
                                  const QuadratureConfig& cfg = {});

struct Fit {
  double intercept = 0.0;
  double exponent = 0.0;
  double exponent_se = 0.0;
  double log_power = 0.0;  // 0 when dropped
  double log_power_se = 0.0;
  bool log_power_kept = false;
};

// Least squares of log(value) = a + e log(delta) + p log(log(1/delta)); p is
// dropped when within two standard errors of zero.
Fit fit_rate(const std::vector<double>& deltas, const std::vector<double>& values, bool allow_log_power = true);

struct SweepResult {
  Entry entry = Entry::SS;
  std::vector<double> deltas;
  std::vector<FisherMatrix> raw;  // empty for the multiplicative entry
  std::vector<double> values;
  std::vector<double> normalized;
  Rate rate;
  Fit fit;
  double fitted_exponent = 0.0;
  double fitted_log_power = 0.0;
  double extrapolated_limit = 0.0;  // normalized value at the smallest delta
  double richardson_limit = 0.0;    // last two points extrapolated in 1/log(1/delta)
};

// Default grid: 13 geometric points from 1e-1 to 1e-4.
std::vector<double> default_deltas(double lo = 1e-4, double hi = 1e-1, int n = 13);

// Evaluates the entry at each delta (in parallel) and fits its rate. Deltas are
// sorted decreasing; at least 6 points spanning 2 decades are required.
SweepResult sweep(const ModelParams& params, const PerturbationSpec& spec, Entry entry, std::vector<double> deltas,
                  const Rate& rate = {}, const QuadratureConfig& cfg = {});

}  // namespace levyfisher
