#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sieveroc/data.hpp"
#include "sieveroc/pipeline.hpp"

namespace sieveroc {

struct BootstrapOptions {
  int B = 1000;
  double level = 0.95;
  std::uint64_t seed = 1;
  bool jackknife = true;  // acceleration from leave-one-out refits; false: a = 0
  int threads = 0;        // 0: hardware concurrency
  int grid = 1001;        // ROC grid used for every AUC evaluation
};

struct BcaResult {
  double t = 0.0;
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
  int B = 0;
  double z0 = 0.0;
  double accel = 0.0;
  int failures = 0;
  bool degenerate = false;  // bootstrap distribution collapsed to one value
};

// Bias-corrected accelerated bootstrap interval for AUC_t.  Each replicate
// resamples rows with replacement and reruns the whole pipeline (knots
// re-derived from the resample).  Replicate b draws from the RNG stream
// (seed, b), so results do not depend on thread count or execution order.
BcaResult bca_auc(const Dataset& data, double t, const BootstrapOptions& options,
                  const PipelineOptions& pipeline = {},
                  const FitOptions& fit_options = {});

// Pieces exposed for direct testing.
double bca_z0(const std::vector<double>& replicate_aucs, double estimate);
double bca_accel(const std::vector<double>& jackknife_aucs);
std::pair<double, double> bca_interval(std::vector<double> replicate_aucs,
                                       double z0, double accel, double level);

}  // namespace sieveroc
