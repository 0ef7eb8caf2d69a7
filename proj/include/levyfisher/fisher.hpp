#pragma once

#include <array>
#include <optional>
#include <string>

#include "levyfisher/density.hpp"

namespace levyfisher {

enum class Param { Sigma = 0, Beta = 1, Theta = 2 };

// Information for one increment; n increments carry n times this matrix.
struct FisherMatrix {
  std::array<std::array<double, 3>, 3> entries{};
  // Quadrature error estimates, same layout.
  std::array<std::array<double, 3>, 3> errors{};
  bool beta_row_valid = false;
  bool theta_identified = false;
  // Density underflowed where the scores still carried mass.
  bool ill_conditioned = false;

  double operator()(Param a, Param b) const {
    return entries[static_cast<int>(a)][static_cast<int>(b)];
  }
  double ss() const { return (*this)(Param::Sigma, Param::Sigma); }
  double sb() const { return (*this)(Param::Sigma, Param::Beta); }
  double bb() const { return (*this)(Param::Beta, Param::Beta); }
  double st() const { return (*this)(Param::Sigma, Param::Theta); }
  double bt() const { return (*this)(Param::Beta, Param::Theta); }
  double tt() const { return (*this)(Param::Theta, Param::Theta); }
};

struct FisherOptions {
  // Relative tolerance of the x integral; empty picks one from the config.
  std::optional<double> rel_tol;
  // Skip the beta row even when beta < 2.
  bool skip_beta = false;
};

FisherMatrix information_matrix(const ModelParams& params, const PerturbationSpec& spec,
                                const QuadratureConfig& cfg = {}, const FisherOptions& opt = {});

// Smallest eigenvalue of the valid block must be at least -tol_factor * trace.
bool is_psd(const FisherMatrix& m, double tol_factor = 1e-8);

struct BaselineForms {
  double Iss = 0.0;
  double Ibb = 0.0;
  double Isb = 0.0;
};

// Unperturbed model in closed form through the information constants.
// Throws UndefinedAtBoundary at beta = 2.
BaselineForms baseline_closed_forms(double sigma, double beta, double delta, const QuadratureConfig& cfg = {});

// (sigma, theta) block with a unit drift perturbation.
std::array<std::array<double, 2>, 2> drift_closed_form(double sigma, double beta, double delta,
                                                       const QuadratureConfig& cfg = {});

struct DominanceReport {
  double Iss_perturbed = 0.0;
  double Iss_baseline = 0.0;
  double sigma_margin = 0.0;          // baseline minus perturbed
  std::optional<double> block_min_eigenvalue;  // (sigma, beta) block difference
  double block_trace = 0.0;
  bool passed = false;
  std::string detail;
};

DominanceReport dominance_check(const ModelParams& params, const PerturbationSpec& spec,
                                const QuadratureConfig& cfg = {}, double sigma_slack = 1e-6,
                                double eig_factor = 1e-8);

struct VarianceBoundReport {
  double Itt = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  bool passed = false;
};

// Throws MomentUndefined for stable perturbations.
VarianceBoundReport variance_bound_check(const ModelParams& params, const PerturbationSpec& spec,
                                         const QuadratureConfig& cfg = {}, double slack = 1e-6);

}  // namespace levyfisher
