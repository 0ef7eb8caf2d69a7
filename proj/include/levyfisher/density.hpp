#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "levyfisher/levy_models.hpp"
#include "levyfisher/stable.hpp"

namespace levyfisher {

struct ModelParams {
  double sigma = 1.0;
  double beta = 2.0;
  double theta = 0.0;
  double delta = 1.0;

  void validate() const;
  // sigma * delta^(1/beta), the spread of sigma W_delta.
  double spread() const;
};

struct DensityBundle {
  double p = 0.0;
  double dp_dsigma = 0.0;
  double dp_dtheta = 0.0;
  std::optional<double> dp_dbeta;
  std::optional<double> v;
};

// Law of sigma W_delta + theta Y_delta with its parameter derivatives.
class DensityModel {
 public:
  DensityModel(const ModelParams& params, PerturbationSpec spec, const QuadratureConfig& cfg = {});

  const ModelParams& params() const { return params_; }
  const PerturbationSpec& spec() const { return spec_; }
  const QuadratureConfig& config() const { return cfg_; }

  double density(double x) const;
  DensityBundle bundle(double x) const;

  // Places where the density has peaks or scale changes, for x-integration.
  std::vector<Feature> features() const;

 private:
  // Integrals of h, breve, y h', hdot of (x - theta y)/s against G_delta.
  Vec<4> kernel_integrals(double x, bool need_hd) const;
  // Same integrals against a continuous G with density g and derivative dg.
  Vec<4> continuous_part(double x, bool need_hd, const std::function<double(double)>& g,
                         const std::function<double(double)>& dg, double g_scale, double lo, double hi) const;

  ModelParams params_;
  PerturbationSpec spec_;
  QuadratureConfig cfg_;
  std::shared_ptr<const DensityEngine> engine_;
  std::shared_ptr<const DensityEngine> jump_engine_;
  std::vector<double> weights_;
  double spread_ = 1.0;
};

double eval_density(const ModelParams& params, const PerturbationSpec& spec, double x,
                    const QuadratureConfig& cfg = {});
DensityBundle eval_bundle(const ModelParams& params, const PerturbationSpec& spec, double x,
                          const QuadratureConfig& cfg = {});

}  // namespace levyfisher
