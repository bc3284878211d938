#pragma once

#include <Eigen/Core>

#include "sieveroc/sieve.hpp"

namespace sieveroc {

struct FitOptions {
  int max_iterations = 2000;
  double f_tol = 1e-7;          // stop when an accepted step improves less
  double pg_tol = 1e-6;         // stop when ||project(theta + g) - theta|| is below
  double shrink = 0.5;          // backtracking factor
  double initial_step = 1.0;
  double armijo = 1e-4;         // sufficient-increase constant
  bool adaptive_step = false;   // carry the accepted step forward (doubled)
};

// Euclidean projection onto {y >= 0, sum(y) <= 1}: clamp negatives, then the
// sort-and-threshold simplex projection if the clamped sum exceeds 1.  The
// result satisfies sum <= 1 in exact floating point, so the projection is
// exactly idempotent.
Eigen::VectorXd project_capped_simplex(Eigen::VectorXd x);

// Projected gradient ascent with Armijo backtracking on the sieve
// log-likelihood.  Starts from `init` when given and it has positive mass on
// every design row, else from the uniform interior point 0.5/P.  Accepted
// log-likelihood values are nondecreasing.  stop_reason is one of
// "pg_tol", "f_tol", "step_min", "max_iter".
SieveFit fit(const DesignRows& design, const KnotVector& time_knots,
             const KnotVector& marker_knots, const FitOptions& options = {},
             const SieveParams* init = nullptr);

}  // namespace sieveroc
