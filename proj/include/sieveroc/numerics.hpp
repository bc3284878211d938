#pragma once

#include <string>
#include <vector>

namespace sieveroc {

// Standard normal CDF and its inverse (Wichura's algorithm, ~1e-15 accurate).
double norm_cdf(double x);
double norm_quantile(double p);

// Regularized incomplete beta function I_x(a, b) and its inverse in x.
double incbeta(double a, double b, double x);
double incbeta_inv(double a, double b, double p);

// Median-unbiased empirical quantile (interpolation position
// h = (n + 1/3) p + 1/3) of an ascending-sorted sample.
double quantile_sorted(const std::vector<double>& sorted, double p);

// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

}  // namespace sieveroc
