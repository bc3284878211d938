#include "sieveroc/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "sieveroc/errors.hpp"
#include "sieveroc/estimators.hpp"
#include "sieveroc/numerics.hpp"
#include "sieveroc/rng.hpp"
#include "sieveroc/threads.hpp"

namespace sieveroc {

double bca_z0(const std::vector<double>& replicate_aucs, double estimate) {
  const auto b = static_cast<double>(replicate_aucs.size());
  if (b <= 0.0) throw std::invalid_argument("bca_z0: no replicates");
  double below = 0.0;
  for (double a : replicate_aucs)
    if (a < estimate) below += 1.0;
  if (below <= 0.0) below = 0.5;          // boundary rule: keep z0 finite
  if (below >= b) below = b - 0.5;
  return norm_quantile(below / b);
}

double bca_accel(const std::vector<double>& jackknife_aucs) {
  const auto n = static_cast<double>(jackknife_aucs.size());
  if (n < 3.0) return 0.0;
  double mean = 0.0;
  for (double a : jackknife_aucs) mean += a;
  mean /= n;
  double s2 = 0.0, s3 = 0.0;
  for (double a : jackknife_aucs) {
    const double d = mean - a;
    s2 += d * d;
    s3 += d * d * d;
  }
  if (s2 <= 0.0) return 0.0;
  return s3 / (6.0 * std::pow(s2, 1.5));
}

std::pair<double, double> bca_interval(std::vector<double> replicate_aucs,
                                       double z0, double accel, double level) {
  if (replicate_aucs.empty())
    throw std::invalid_argument("bca_interval: no replicates");
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("bca_interval: level outside (0, 1)");
  std::sort(replicate_aucs.begin(), replicate_aucs.end());
  const auto adjusted = [&](double z) {
    const double zz = z0 + z;
    const double denom = 1.0 - accel * zz;
    if (denom <= 0.0)
      return zz >= 0.0 ? 1.0 : 0.0;  // correction blew past the distribution
    return norm_cdf(z0 + zz / denom);
  };
  const double z_lo = norm_quantile(0.5 * (1.0 - level));
  double a1 = adjusted(z_lo);
  double a2 = adjusted(-z_lo);
  if (a1 > a2) std::swap(a1, a2);
  return {quantile_sorted(replicate_aucs, a1), quantile_sorted(replicate_aucs, a2)};
}

namespace {

double auc_at(const SieveFit& fit, double t, int grid) {
  return roc_curve(fit, t, grid).auc;
}

}  // namespace

BcaResult bca_auc(const Dataset& data, double t, const BootstrapOptions& options,
                  const PipelineOptions& pipeline, const FitOptions& fit_options) {
  if (options.B < 100) throw std::invalid_argument("bca_auc: need B >= 100");
  if (!(options.level > 0.0 && options.level < 1.0))
    throw std::invalid_argument("bca_auc: level outside (0, 1)");
  const int n = data.size();
  const int threads =
      options.threads > 0 ? options.threads : thread_count_from_env();

  const SieveFit point_fit = fit_dataset(data, pipeline, fit_options);
  const double estimate = auc_at(point_fit, t, options.grid);
  const SieveParams warm = point_fit.params;

  // Bootstrap replicates, one RNG stream per index.
  std::vector<double> replicate(static_cast<std::size_t>(options.B),
                                std::numeric_limits<double>::quiet_NaN());
  parallel_for(options.B, threads, [&](int b) {
    Rng rng(options.seed, static_cast<std::uint64_t>(b));
    std::vector<IntervalObservation> rows;
    rows.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      rows.push_back(data.observations[static_cast<std::size_t>(rng.next_index(n))]);
    try {
      const Dataset resample = dataset_from_observations(std::move(rows));
      const SieveFit fit = fit_dataset(resample, pipeline, fit_options, &warm);
      replicate[static_cast<std::size_t>(b)] = auc_at(fit, t, options.grid);
    } catch (const DataError&) {
    } catch (const ConvergenceError&) {
    } catch (const std::invalid_argument&) {
    }
  });

  std::vector<double> ok;
  ok.reserve(replicate.size());
  for (double a : replicate)
    if (!std::isnan(a)) ok.push_back(a);
  const int failures = options.B - static_cast<int>(ok.size());
  if (failures * 10 > options.B)
    throw ConvergenceError("bootstrap: " + std::to_string(failures) + " of " +
                           std::to_string(options.B) + " replicate fits failed");

  BcaResult res;
  res.t = t;
  res.estimate = estimate;
  res.level = options.level;
  res.B = options.B;
  res.failures = failures;
  res.z0 = bca_z0(ok, estimate);

  if (options.jackknife && n >= 3) {
    std::vector<double> jack(static_cast<std::size_t>(n),
                             std::numeric_limits<double>::quiet_NaN());
    parallel_for(n, threads, [&](int i) {
      std::vector<IntervalObservation> rows;
      rows.reserve(static_cast<std::size_t>(n - 1));
      for (int r = 0; r < n; ++r)
        if (r != i) rows.push_back(data.observations[static_cast<std::size_t>(r)]);
      try {
        const Dataset loo = dataset_from_observations(std::move(rows));
        const SieveFit fit = fit_dataset(loo, pipeline, fit_options, &warm);
        jack[static_cast<std::size_t>(i)] = auc_at(fit, t, options.grid);
      } catch (const DataError&) {
      } catch (const ConvergenceError&) {
      } catch (const std::invalid_argument&) {
      }
    });
    std::vector<double> jok;
    jok.reserve(jack.size());
    for (double a : jack)
      if (!std::isnan(a)) jok.push_back(a);
    res.accel = bca_accel(jok);
  }

  const auto [lo_it, hi_it] = std::minmax_element(ok.begin(), ok.end());
  if (*lo_it == *hi_it) {
    res.degenerate = true;
    res.lower = res.upper = estimate;
    return res;
  }
  std::tie(res.lower, res.upper) = bca_interval(ok, res.z0, res.accel, options.level);
  if (res.lower > res.upper) std::swap(res.lower, res.upper);
  return res;
}

}  // namespace sieveroc
