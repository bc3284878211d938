#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>

#include "sieveroc/data.hpp"
#include "sieveroc/splines.hpp"

namespace sieveroc {

// Coefficients of the joint/marginal CDF sieve
//   F(t, m) = sum_{j,k} gamma_{j,k} I_j(t) I_k(m)
//   F2(m)   = sum_k (sum_j gamma_{j,k} + omega_k) I_k(m)
// with gamma, omega >= 0 and total mass sum(gamma) + sum(omega) <= 1.
// omega carries the marker mass of subjects whose event falls beyond the
// time horizon.
struct SieveParams {
  Eigen::MatrixXd gamma;  // time-basis rows x marker-basis cols
  Eigen::VectorXd omega;  // marker-basis

  Eigen::Index parameter_count() const { return gamma.size() + omega.size(); }
  double total_mass() const { return gamma.sum() + omega.sum(); }

  // Flat layout: gamma row-major, then omega (the optimizer's coordinates).
  Eigen::VectorXd flatten() const;
  static SieveParams unflatten(const Eigen::VectorXd& theta,
                               Eigen::Index time_basis, Eigen::Index marker_basis);
};

// Per-observation coefficient rows over the flat parameters: observation i
// contributes log(rows.row(i) . theta) to the log-likelihood.
struct DesignRows {
  Eigen::MatrixXd rows;  // n x (time_basis*marker_basis + marker_basis)
  Eigen::Index time_basis = 0;
  Eigen::Index marker_basis = 0;

  Eigen::Index parameter_count() const { return rows.cols(); }
  int size() const { return static_cast<int>(rows.rows()); }
};

// Rows are built once per dataset; all entries are nonnegative:
//   Left:     gamma-block I_j(u)              * M_k(m), omega-block 0
//   Interval: gamma-block {I_j(v) - I_j(u)}   * M_k(m), omega-block 0
//   Right:    gamma-block {1 - I_j(v)}        * M_k(m), omega-block M_k(m)
DesignRows build_design(const Dataset& data, const KnotVector& time_knots,
                        const KnotVector& marker_knots);

// Log-likelihood sum_i log(a_i . theta); -infinity sentinel when some row
// has nonpositive mass (lets line searches reject steps gracefully).
double loglik(const Eigen::VectorXd& theta, const DesignRows& design);
double loglik(const SieveParams& params, const DesignRows& design);

// Gradient sum_i a_i / (a_i . theta); only defined where loglik is finite.
Eigen::VectorXd grad_loglik(const Eigen::VectorXd& theta, const DesignRows& design);

struct SieveFit {
  SieveParams params;
  KnotVector time_knots;
  KnotVector marker_knots;
  double loglik = 0.0;
  int iterations = 0;
  std::string stop_reason;
};

// {F(t, m), F2(m)} at a query point inside both domains.
std::pair<double, double> eval_cdfs(const SieveFit& fit, double t, double m);

// JSON serialization with shortest-round-trip number formatting, so
// save/load reproduces every coefficient bit for bit.
std::string to_json(const SieveFit& fit);
SieveFit fit_from_json(const std::string& text);
void save_json(const SieveFit& fit, const std::string& path);
SieveFit load_json(const std::string& path);

}  // namespace sieveroc
