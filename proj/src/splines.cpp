#include "sieveroc/splines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sieveroc/numerics.hpp"

namespace sieveroc {

namespace {
thread_local std::vector<double> tl_work;
thread_local std::vector<double> tl_tail;
}  // namespace

void KnotVector::Padded::build(int ord, double a, double b,
                               const std::vector<double>& interior) {
  order = ord;
  knots.clear();
  knots.reserve(interior.size() + 2 * static_cast<std::size_t>(ord));
  knots.insert(knots.end(), static_cast<std::size_t>(ord), a);
  knots.insert(knots.end(), interior.begin(), interior.end());
  knots.insert(knots.end(), static_cast<std::size_t>(ord), b);
  const int L = static_cast<int>(knots.size());
  recip.assign(static_cast<std::size_t>(order) + 1, {});
  for (int q = 2; q <= order; ++q) {
    auto& r = recip[static_cast<std::size_t>(q)];
    r.assign(static_cast<std::size_t>(L - q + 1), 0.0);
    for (int h = 0; h <= L - q; ++h) {
      const double d = knots[static_cast<std::size_t>(h + q - 1)] -
                       knots[static_cast<std::size_t>(h)];
      if (d > 0.0) r[static_cast<std::size_t>(h)] = 1.0 / d;
    }
  }
}

// Cox-de Boor triangle up to the requested level, in place over `work`.
// Level 1 is the span indicator; level q reads entries 0..L-q of level q-1.
void KnotVector::Padded::lower_levels(double x, int upto,
                                      std::vector<double>& work) const {
  const int L = static_cast<int>(knots.size());
  work.assign(static_cast<std::size_t>(L), 0.0);
  if (x >= knots.back()) {
    work[static_cast<std::size_t>(L - order - 1)] = 1.0;  // last nonempty span
  } else {
    for (int h = 0; h < L - 1; ++h)
      if (knots[static_cast<std::size_t>(h)] <= x &&
          x < knots[static_cast<std::size_t>(h + 1)]) {
        work[static_cast<std::size_t>(h)] = 1.0;
        break;
      }
  }
  for (int q = 2; q <= upto; ++q) {
    const auto& r = recip[static_cast<std::size_t>(q)];
    for (int h = 0; h <= L - 1 - q; ++h) {
      const auto hh = static_cast<std::size_t>(h);
      work[hh] = (x - knots[hh]) * r[hh] * work[hh] +
                 (knots[static_cast<std::size_t>(h + q)] - x) * r[hh + 1] * work[hh + 1];
    }
  }
}

void KnotVector::Padded::values(double x, double* out,
                                std::vector<double>& work) const {
  lower_levels(x, order, work);
  std::copy_n(work.begin(), count(), out);
}

void KnotVector::Padded::tail_derivs(double x, double* out,
                                     std::vector<double>& work) const {
  lower_levels(x, order - 1, work);
  const auto& r = recip[static_cast<std::size_t>(order)];
  const double scale = order - 1;
  for (int j = 1; j < count(); ++j)
    out[j - 1] = scale * r[static_cast<std::size_t>(j)] * work[static_cast<std::size_t>(j)];
}

KnotVector::KnotVector(int order, double a, double b, std::vector<double> interior)
    : order_(order), a_(a), b_(b), interior_(std::move(interior)) {
  if (order_ < 1) throw std::invalid_argument("KnotVector: order must be >= 1");
  if (!(a_ < b_)) throw std::invalid_argument("KnotVector: need a < b");
  double prev = a_;
  for (double k : interior_) {
    if (!(k > prev && k < b_))
      throw std::invalid_argument(
          "KnotVector: interior knots must be strictly increasing inside (a, b)");
    prev = k;
  }
  base_.build(order_, a_, b_, interior_);
  integ_.build(order_ + 1, a_, b_, interior_);
}

void KnotVector::check_domain(double x) const {
  if (!(x >= a_ && x <= b_))
    throw std::invalid_argument("spline evaluation at x=" + format_double(x) +
                                " outside [" + format_double(a_) + ", " +
                                format_double(b_) + "]");
}

void KnotVector::bspline_into(double x, double* out) const {
  check_domain(x);
  base_.values(x, out, tl_work);
}

void KnotVector::ispline_into(double x, double* out) const {
  check_domain(x);
  const int n1 = integ_.count();
  tl_tail.resize(static_cast<std::size_t>(n1));
  integ_.values(x, tl_tail.data(), tl_work);
  double running = 0.0;
  for (int h = n1 - 1; h >= 1; --h) {
    running += tl_tail[static_cast<std::size_t>(h)];
    out[h - 1] = std::min(running, 1.0);
  }
}

void KnotVector::mspline_into(double x, double* out) const {
  check_domain(x);
  integ_.tail_derivs(x, out, tl_work);
}

Eigen::VectorXd KnotVector::bspline(double x) const {
  Eigen::VectorXd out(basis_count());
  bspline_into(x, out.data());
  return out;
}

Eigen::VectorXd KnotVector::ispline(double x) const {
  Eigen::VectorXd out(basis_count());
  ispline_into(x, out.data());
  return out;
}

Eigen::VectorXd KnotVector::mspline(double x) const {
  Eigen::VectorXd out(basis_count());
  mspline_into(x, out.data());
  return out;
}

KnotVector make_knots(std::vector<double> anchors, int n_interior, int order,
                      double a, double b) {
  if (anchors.empty())
    throw std::invalid_argument("make_knots: empty anchor sample");
  if (n_interior < 1)
    throw std::invalid_argument("make_knots: need at least one interior knot");
  if (!(a < b)) throw std::invalid_argument("make_knots: need a < b");
  for (double x : anchors)
    if (!std::isfinite(x))
      throw std::invalid_argument("make_knots: non-finite anchor value");
  std::sort(anchors.begin(), anchors.end());
  if (anchors.front() < a || anchors.back() > b)
    throw std::invalid_argument("make_knots: domain [a, b] does not cover the anchors");
  const double tol = 1e-9 * (b - a);
  std::vector<double> interior;
  interior.reserve(static_cast<std::size_t>(n_interior));
  for (int j = 1; j <= n_interior; ++j) {
    const double q =
        quantile_sorted(anchors, static_cast<double>(j) / (n_interior + 1));
    if (q <= a + tol || q >= b - tol) continue;        // boundary collision
    if (!interior.empty() && q - interior.back() <= tol) continue;  // duplicate
    interior.push_back(q);
  }
  return KnotVector(order, a, b, std::move(interior));
}

}  // namespace sieveroc
