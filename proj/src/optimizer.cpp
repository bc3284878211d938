#include "sieveroc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "sieveroc/errors.hpp"

namespace sieveroc {

Eigen::VectorXd project_capped_simplex(Eigen::VectorXd x) {
  if (!x.allFinite())
    throw std::invalid_argument("project_capped_simplex: non-finite input");
  Eigen::VectorXd y = x.cwiseMax(0.0);
  if (y.sum() <= 1.0) return y;

  std::vector<double> u(y.data(), y.data() + y.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0, shift = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cumsum += u[i];
    const double cand = (cumsum - 1.0) / static_cast<double>(i + 1);
    if (u[i] - cand > 0.0)
      shift = cand;
    else
      break;
  }
  y = (y.array() - shift).max(0.0);

  // Rounding can leave the sum a few ulps above 1; shave the excess off the
  // largest coordinate so reprojecting is a no-op.
  for (int pass = 0; pass < 100; ++pass) {
    const double excess = y.sum() - 1.0;
    if (excess <= 0.0) break;
    Eigen::Index imax = 0;
    y.maxCoeff(&imax);
    y[imax] = std::max(0.0, y[imax] - excess);
  }
  return y;
}

SieveFit fit(const DesignRows& design, const KnotVector& time_knots,
             const KnotVector& marker_knots, const FitOptions& options,
             const SieveParams* init) {
  if (design.size() == 0) throw std::invalid_argument("fit: empty design");
  if (design.time_basis != time_knots.basis_count() ||
      design.marker_basis != marker_knots.basis_count())
    throw std::invalid_argument("fit: design does not match the knot vectors");
  const Eigen::Index P = design.parameter_count();

  Eigen::VectorXd theta;
  if (init != nullptr) {
    if (init->parameter_count() != P)
      throw std::invalid_argument("fit: init has wrong parameter count");
    theta = project_capped_simplex(init->flatten());
    // a sparse init can leave some row with zero mass; restart from the
    // interior rather than failing
    if (!std::isfinite(loglik(theta, design))) init = nullptr;
  }
  if (init == nullptr)
    theta = Eigen::VectorXd::Constant(P, 0.5 / static_cast<double>(P));

  double f = loglik(theta, design);
  if (!std::isfinite(f))
    throw ConvergenceError("no feasible ascent: starting point has zero likelihood mass");

  constexpr double kMinStep = 1e-20;
  double carried_step = options.initial_step;
  int iter = 0;
  std::string reason = "max_iter";

  for (; iter < options.max_iterations; ++iter) {
    const Eigen::VectorXd g = grad_loglik(theta, design);
    const double pg_norm = (project_capped_simplex(theta + g) - theta).norm();
    if (pg_norm <= options.pg_tol) {
      reason = "pg_tol";
      break;
    }

    double step = options.adaptive_step ? carried_step : options.initial_step;
    bool accepted = false;
    Eigen::VectorXd cand;
    double fc = f;
    while (step >= kMinStep) {
      cand = project_capped_simplex(theta + step * g);
      const double sq = (cand - theta).squaredNorm();
      if (sq == 0.0) break;  // pinned: smaller steps cannot move either
      fc = loglik(cand, design);
      if (std::isfinite(fc) && fc >= f + options.armijo / step * sq) {
        accepted = true;
        break;
      }
      step *= options.shrink;
    }
    if (!accepted) {
      reason = "step_min";
      break;
    }

    const double gain = fc - f;
    theta = std::move(cand);
    f = fc;
    if (options.adaptive_step) carried_step = std::min(step * 2.0, 1e6);
    if (gain <= options.f_tol) {
      reason = "f_tol";
      ++iter;
      break;
    }
  }

  return SieveFit{
      SieveParams::unflatten(theta, design.time_basis, design.marker_basis),
      time_knots, marker_knots, f, iter, reason};
}

}  // namespace sieveroc
