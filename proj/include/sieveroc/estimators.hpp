#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>

#include "sieveroc/sieve.hpp"

namespace sieveroc {

// Time-dependent classification accuracy of the rule "marker > threshold"
// for the event {T <= t}, read off a fitted CDF sieve:
//   TP_t(m) = {F(t,tau_m) - F(t,m)} / F(t,tau_m)
//   FP_t(m) = {1 - F2(m) - F(t,tau_m) + F(t,m)} / {1 - F(t,tau_m)}
//   ROC_t(p) = TP_t(FP_t^{-1}(p)),  AUC_t = integral of ROC_t over [0,1].

struct RocCurve {
  double t = 0.0;
  Eigen::VectorXd p;    // uniform grid on [0,1]
  Eigen::VectorXd roc;  // ROC_t at each grid point
  double auc = 0.0;
  // When the fitted total mass is below 1, FP cannot reach 0; the curve is
  // constant at roc_floor for p < p_floor = FP_t(tau_m).
  bool extended_below = false;
  double p_floor = 0.0;
  double roc_floor = 0.0;
};

double tp(const SieveFit& fit, double t, double m);
double fp(const SieveFit& fit, double t, double m);

// Smallest m with FP_t(m) <= p (bisection to 1e-10 * tau_m, plateau ties
// toward smaller m); returns tau_m when even FP_t(tau_m) exceeds p.
double fp_inverse(const SieveFit& fit, double t, double p);

RocCurve roc_curve(const SieveFit& fit, double t, int grid = 1001);

// Columns `p,roc` preceded by one comment line `# t=<t> auc=<auc>`
// (plus ` p_floor=<v>` when the curve needed extension).
void write_csv(const RocCurve& curve, std::ostream& out);
void write_csv(const RocCurve& curve, const std::string& path);

// Deterministic standalone line plot: unit square, diagonal reference,
// tick labels; byte-identical output for identical curves.
void write_svg(const RocCurve& curve, std::ostream& out);
void write_svg(const RocCurve& curve, const std::string& path);

}  // namespace sieveroc
