#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "sieveroc/data.hpp"
#include "sieveroc/rng.hpp"

namespace sieveroc {

// Generative model: event time T exponential(lambda); marker M scaled
// Beta(alpha, beta); dependence from a Clayton copula with Kendall's tau
// given by `tau` (higher markers go with earlier events, so the marker is
// prognostic of the event as in the replicated experiments).  Subjects are
// assessed on a noisy ladder k*lc + eps_k, k = 1..K_c, with K_c geometric;
// nu is calibrated so the right-censoring fraction is rho.
struct SimConfig {
  double lambda = 0.023104906018664842;  // log(2)/30: median event time 30
  double alpha = 2.35;
  double beta = 1.87;
  double scale = 10.0;  // marker support [0, scale]
  double tau = 0.2;     // Kendall's tau of the copula pair
  double rho = 0.5;     // target right-censoring rate
  double lc = 6.0;      // inter-assessment gap
  int n = 300;
  std::uint64_t seed = 1;
};

// tau = (mu - 1)/(mu + 1)  <=>  mu = (1 + tau)/(1 - tau).
double mu_from_tau(double tau);

// One draw from the Clayton copula with parameter theta = mu - 1 via
// conditional inversion; mu = 1 degenerates to independent uniforms.
std::pair<double, double> clayton_pair(double mu, Rng& rng);

// The copula CDF C(p1, p2) = (p1^-theta + p2^-theta - 1)^(-1/theta).
double clayton_cdf(double mu, double p1, double p2);

// Success probability of the geometric assessment count such that
// Pr(T > lc * K_c) = rho, ignoring schedule noise.
double calibrate_nu(double rho, double lambda, double lc);

struct SimulatedData {
  Dataset data;
  std::vector<double> t_true;  // latent event times, for validation tooling
};

SimulatedData gen_dataset_with_latent(const SimConfig& config);
Dataset gen_dataset(const SimConfig& config);

// Analytic AUC_t under the generative model, evaluated on a fine marker grid
// with numeric inversion of FP and trapezoid integration over the p grid.
double true_auc_oracle(double t, const SimConfig& config, int marker_grid = 20001,
                       int p_grid = 10001);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
};

// Equal-width bins over the knot-anchor values (assessment-time summary).
std::vector<HistogramBin> current_status_histogram(const Dataset& data, int bins);

// Columns `lo,hi,count`.
void write_histogram_csv(const std::vector<HistogramBin>& bins, std::ostream& out);
void write_histogram_csv(const std::vector<HistogramBin>& bins,
                         const std::string& path);

}  // namespace sieveroc
