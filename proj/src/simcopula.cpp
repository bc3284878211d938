#include "sieveroc/simcopula.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "sieveroc/errors.hpp"
#include "sieveroc/numerics.hpp"

namespace sieveroc {

double mu_from_tau(double tau) {
  if (!(tau >= 0.0 && tau < 1.0))
    throw std::invalid_argument("mu_from_tau: tau outside [0, 1)");
  return (1.0 + tau) / (1.0 - tau);
}

std::pair<double, double> clayton_pair(double mu, Rng& rng) {
  if (!(mu >= 1.0)) throw std::invalid_argument("clayton_pair: mu must be >= 1");
  const double u = rng.next_double();
  const double w = rng.next_double();
  if (mu == 1.0) return {u, w};
  const double theta = mu - 1.0;
  const double p2 = std::pow(
      (std::pow(w, -theta / (1.0 + theta)) - 1.0) * std::pow(u, -theta) + 1.0,
      -1.0 / theta);
  return {u, p2};
}

double clayton_cdf(double mu, double p1, double p2) {
  if (!(mu >= 1.0)) throw std::invalid_argument("clayton_cdf: mu must be >= 1");
  if (p1 <= 0.0 || p2 <= 0.0) return 0.0;
  if (p1 >= 1.0) return std::min(p2, 1.0);
  if (p2 >= 1.0) return p1;
  if (mu == 1.0) return p1 * p2;
  const double theta = mu - 1.0;
  return std::pow(std::pow(p1, -theta) + std::pow(p2, -theta) - 1.0, -1.0 / theta);
}

double calibrate_nu(double rho, double lambda, double lc) {
  if (!(rho > 0.0 && rho < 1.0))
    throw std::invalid_argument("calibrate_nu: rho outside (0, 1)");
  if (!(lambda > 0.0) || !(lc > 0.0))
    throw std::invalid_argument("calibrate_nu: lambda and lc must be positive");
  const double a = std::exp(-lambda * lc);
  const double nu = rho * (1.0 - a) / (a * (1.0 - rho));
  if (!(nu < 1.0))
    throw std::invalid_argument(
        "calibrate_nu: censoring rate infeasible for this schedule");
  return nu;
}

SimulatedData gen_dataset_with_latent(const SimConfig& config) {
  if (config.n < 1) throw std::invalid_argument("gen_dataset: n must be >= 1");
  if (!(config.lambda > 0.0) || !(config.alpha > 0.0) || !(config.beta > 0.0) ||
      !(config.scale > 0.0) || !(config.lc > 0.0))
    throw std::invalid_argument("gen_dataset: parameters must be positive");
  const double mu = mu_from_tau(config.tau);
  const double nu = calibrate_nu(config.rho, config.lambda, config.lc);
  const double log_keep = std::log1p(-nu);

  Rng rng(config.seed);
  std::vector<IntervalObservation> rows;
  std::vector<double> latent;
  rows.reserve(static_cast<std::size_t>(config.n));
  latent.reserve(static_cast<std::size_t>(config.n));

  std::vector<double> s;
  for (int i = 0; i < config.n; ++i) {
    const auto [p1, p2] = clayton_pair(mu, rng);
    const double t_event = -std::log1p(-p1) / config.lambda;
    // High marker <-> early event: invert the Beta CDF at 1 - p2.
    const double marker =
        config.scale * incbeta_inv(config.alpha, config.beta, 1.0 - p2);

    const int k_count = std::max(
        1, static_cast<int>(std::ceil(std::log(rng.next_double()) / log_keep)));
    s.clear();
    for (int k = 1; k <= k_count; ++k)
      s.push_back(k * config.lc + rng.uniform(-config.lc / 6.0, config.lc / 6.0));

    IntervalObservation obs;
    if (t_event <= s.front()) {
      obs = make_left(s.front(), marker);
    } else if (t_event > s.back()) {
      obs = make_right(s.back(), marker);
    } else {
      const auto it = std::lower_bound(s.begin(), s.end(), t_event);
      obs = make_interval(*(it - 1), *it, marker);
      if (!(obs.u < t_event && t_event <= obs.v))
        throw std::logic_error("gen_dataset: interval misses the latent time");
    }
    rows.push_back(obs);
    latent.push_back(t_event);
  }
  SimulatedData out{dataset_from_observations(std::move(rows)), std::move(latent)};
  return out;
}

Dataset gen_dataset(const SimConfig& config) {
  return gen_dataset_with_latent(config).data;
}

double true_auc_oracle(double t, const SimConfig& config, int marker_grid,
                       int p_grid) {
  if (!(t > 0.0)) throw std::invalid_argument("true_auc_oracle: t must be positive");
  if (marker_grid < 3 || p_grid < 3)
    throw std::invalid_argument("true_auc_oracle: grids too coarse");
  const double mu = mu_from_tau(config.tau);
  const double f1t = -std::expm1(-config.lambda * t);

  // Tabulate TP and FP over the marker grid.  With the marker coupled to
  // 1 - p2, the joint CDF is F(t,m) = F1(t) - C(F1(t), 1 - F2(m)), so
  //   TP = C(F1, S2) / F1,   FP = (S2 - C(F1, S2)) / (1 - F1),  S2 = 1 - F2(m).
  std::vector<double> tp_tab(static_cast<std::size_t>(marker_grid));
  std::vector<double> fp_tab(static_cast<std::size_t>(marker_grid));
  for (int i = 0; i < marker_grid; ++i) {
    const double x = static_cast<double>(i) / (marker_grid - 1);
    const double s2 = 1.0 - incbeta(config.alpha, config.beta, x);
    const double c = clayton_cdf(mu, f1t, s2);
    tp_tab[static_cast<std::size_t>(i)] = c / f1t;
    fp_tab[static_cast<std::size_t>(i)] = (s2 - c) / (1.0 - f1t);
  }

  // FP decreases from 1 to 0 along the grid; invert by a linear-interpolation
  // sweep, then integrate the ROC over the uniform p grid.
  double auc = 0.0;
  double prev_roc = 0.0;
  int seg = marker_grid - 1;  // fp_tab[seg] <= p <= fp_tab[seg-1]
  for (int g = 0; g < p_grid; ++g) {
    const double p = static_cast<double>(g) / (p_grid - 1);
    while (seg > 1 && fp_tab[static_cast<std::size_t>(seg - 1)] < p) --seg;
    const double f_hi = fp_tab[static_cast<std::size_t>(seg - 1)];
    const double f_lo = fp_tab[static_cast<std::size_t>(seg)];
    const double t_hi = tp_tab[static_cast<std::size_t>(seg - 1)];
    const double t_lo = tp_tab[static_cast<std::size_t>(seg)];
    const double roc =
        f_hi > f_lo ? t_lo + (t_hi - t_lo) * (p - f_lo) / (f_hi - f_lo) : t_lo;
    if (g > 0) auc += 0.5 * (roc + prev_roc);
    prev_roc = roc;
  }
  return auc / (p_grid - 1);
}

std::vector<HistogramBin> current_status_histogram(const Dataset& data, int bins) {
  if (bins < 1) throw std::invalid_argument("histogram: bins must be >= 1");
  const std::vector<double> anchors = knot_anchors(data);
  const auto [lo_it, hi_it] = std::minmax_element(anchors.begin(), anchors.end());
  const double lo = *lo_it, hi = *hi_it;
  if (lo == hi) return {{lo, hi, static_cast<int>(anchors.size())}};

  std::vector<HistogramBin> out(static_cast<std::size_t>(bins));
  const double width = (hi - lo) / bins;
  for (int b = 0; b < bins; ++b) {
    out[static_cast<std::size_t>(b)].lo = lo + b * width;
    out[static_cast<std::size_t>(b)].hi = b + 1 == bins ? hi : lo + (b + 1) * width;
  }
  for (double a : anchors) {
    auto idx = static_cast<int>((a - lo) / width);
    idx = std::min(idx, bins - 1);
    ++out[static_cast<std::size_t>(idx)].count;
  }
  return out;
}

void write_histogram_csv(const std::vector<HistogramBin>& bins, std::ostream& out) {
  out << "lo,hi,count\n";
  for (const auto& b : bins)
    out << format_double(b.lo) << ',' << format_double(b.hi) << ',' << b.count
        << '\n';
}

void write_histogram_csv(const std::vector<HistogramBin>& bins,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  write_histogram_csv(bins, out);
  if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace sieveroc
