#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "levyfisher/asymptotics.hpp"

namespace levyfisher {

struct SimConfig {
  std::uint64_t seed = 1;
  std::int64_t n = 1000;
  ModelParams params;
  PerturbationSpec spec;

  void validate() const;
};

// Generator for stream k of a seed; streams are decorrelated through splitmix64.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream);

// Standard symmetric stable draw with characteristic function exp(-|u|^beta).
double standard_stable(double beta, std::mt19937_64& gen);
// Draw of W_delta under exp(-t|u|^beta / 2).
double stable_increment(double beta, double delta, std::mt19937_64& gen);

// Stream 0 is the plain sample; replications use their index as the stream.
std::vector<double> sample_increments(const SimConfig& config, std::uint64_t stream = 0);

struct ScoreMoment {
  double value = 0.0;           // sample (co)variance of the scores
  double standard_error = 0.0;
  double score_mean = 0.0;      // mean of the first score
  double score_mean_se = 0.0;
  std::int64_t n_used = 0;
};

// Scores at every sample point; entries are ss, sb, bb, st, bt, tt, mult.
ScoreMoment empirical_information(const SimConfig& config, Entry entry, const QuadratureConfig& cfg = {});
ScoreMoment empirical_information(const SimConfig& config, const std::vector<double>& sample, Entry entry,
                                  const QuadratureConfig& cfg = {});
// Several entries from one pass of density evaluations.
std::vector<ScoreMoment> empirical_information(const SimConfig& config, const std::vector<double>& sample,
                                               const std::vector<Entry>& entries, const QuadratureConfig& cfg = {});

enum class FreeParam { Sigma, Theta };

struct EstimationReport {
  FreeParam param = FreeParam::Sigma;
  double estimate = 0.0;
  double standard_error = 0.0;  // from the observed information
  std::int64_t n_used = 0;
  double predicted_variance = 0.0;  // inverse Fisher information over n
};

// Maximum likelihood over the free parameters, the others fixed at truth.
std::vector<EstimationReport> mle(const SimConfig& config, const std::vector<FreeParam>& free_params,
                                  const QuadratureConfig& cfg = {});
std::vector<EstimationReport> mle(const SimConfig& config, const std::vector<double>& sample,
                                  const std::vector<FreeParam>& free_params, const QuadratureConfig& cfg = {});

struct ReplicationSummary {
  std::vector<double> estimates;  // first free parameter, by replication index
  double mean = 0.0;
  double variance = 0.0;
  double predicted_variance = 0.0;
  double ratio = 0.0;  // variance / predicted_variance
};

// Replication r uses stream r of the seed; the result does not depend on the
// number of worker threads.
ReplicationSummary mle_replications(const SimConfig& config, const std::vector<FreeParam>& free_params, int reps,
                                    const QuadratureConfig& cfg = {});

}  // namespace levyfisher
