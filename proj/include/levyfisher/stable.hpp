#pragma once

// Symmetric stable densities under the convention E exp(iuW_t) = exp(-t|u|^beta / 2).

#include <array>
#include <complex>
#include <memory>
#include <vector>

#include "levyfisher/quadrature.hpp"

namespace levyfisher {

class StableIndex {
 public:
  explicit StableIndex(double beta);
  double value() const { return beta_; }
  bool gaussian() const { return beta_ == 2.0; }
  operator double() const { return beta_; }

 private:
  double beta_;
};

std::complex<double> char_fn(StableIndex beta, double u, double t);

// Tail constant: h_beta(w) ~ c_beta / |w|^(1+beta), with c_2 = 0.
double c_beta(double beta);

// Same constant written as Gamma(1+beta) sin(pi beta / 2) / (2 pi).
double c_beta_series_form(double beta);

// Everything the information integrands need at one point.
struct StableKernel {
  double h = 0.0;
  double h1 = 0.0;     // h'
  double h2 = 0.0;     // h''
  double breve = 0.0;  // h + w h'
  double hd = 0.0;     // d h / d beta
};

// Raw values: h, h', h'', h''', h'''', hdot, hdot', hdot''.
using StableJet = Vec<8>;

class DensityEngine {
 public:
  DensityEngine(StableIndex beta, QuadratureConfig cfg = {});

  double beta() const { return beta_; }
  const QuadratureConfig& config() const { return cfg_; }
  double tail_crossover() const { return crossover_; }
  // True at beta = 2, where dbeta is the derivative from the left.
  bool dbeta_one_sided() const { return beta_ == 2.0; }
  std::size_t table_size() const { return nodes_.size(); }

  double density(double w) const;
  double deriv(double w, int order) const;
  double dbeta(double w) const;
  double breve(double w) const;
  double tilde(double w) const;
  StableKernel kernel(double w) const;

  // Fourier inversion at w >= 0, bypassing the table.
  StableJet invert(double w) const;
  // Tail series at w > 0; err receives the size of the last retained term
  // relative to the leading one.
  StableJet series(double w, double* err = nullptr) const;
  // Series for h + w h' without cancellation.
  double series_breve(double w) const;

 private:
  struct Node {
    double w;
    StableJet f;
  };

  void build_series();
  void find_crossover();
  void build_table();
  StableKernel table_kernel(double w) const;
  StableKernel tail_kernel(double w) const;

  double beta_;
  QuadratureConfig cfg_;
  double phi_ = 0.0;
  double crossover_ = 0.0;
  // Series coefficients: h = sum a_k w^(-k beta - 1), hdot uses ad_k.
  std::vector<double> a_, ad_, bound_, weight_;
  std::vector<Node> nodes_;
};

// Shared engine for (beta, cfg); built once and cached for the process.
std::shared_ptr<const DensityEngine> engine_for(double beta, const QuadratureConfig& cfg = {});

}  // namespace levyfisher
