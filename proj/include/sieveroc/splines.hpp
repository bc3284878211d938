#pragma once

#include <Eigen/Core>
#include <vector>

namespace sieveroc {

// Clamped spline bases on [a, b] for monotone CDF sieves.
//
// For spline order l (polynomial degree l-1) with K strictly increasing
// interior knots, three families of size K + l are exposed:
//   - bspline: the order-l B-spline family (partition of unity),
//   - ispline: integrated splines I_j = sum_{h>j} B_h of order l+1; each I_j
//     increases monotonically from 0 at a to 1 at b,
//   - mspline: the derivative family M_j = I_j' (nonnegative).
class KnotVector {
 public:
  KnotVector(int order, double a, double b, std::vector<double> interior);

  int order() const { return order_; }
  double a() const { return a_; }
  double b() const { return b_; }
  const std::vector<double>& interior() const { return interior_; }
  int basis_count() const { return static_cast<int>(interior_.size()) + order_; }

  bool operator==(const KnotVector& other) const {
    return order_ == other.order_ && a_ == other.a_ && b_ == other.b_ &&
           interior_ == other.interior_;
  }

  Eigen::VectorXd bspline(double x) const;
  Eigen::VectorXd ispline(double x) const;
  Eigen::VectorXd mspline(double x) const;

  // Allocation-free variants; `out` must hold basis_count() doubles.
  void bspline_into(double x, double* out) const;
  void ispline_into(double x, double* out) const;
  void mspline_into(double x, double* out) const;

 private:
  // Knot sequence padded to boundary multiplicity `order`, with the
  // reciprocal knot differences used by the Cox-de Boor recursion
  // precomputed (0 where the difference vanishes).
  struct Padded {
    std::vector<double> knots;
    std::vector<std::vector<double>> recip;  // recip[q][h] = 1/(t[h+q-1]-t[h])
    int order = 0;

    void build(int order, double a, double b, const std::vector<double>& interior);
    int count() const { return static_cast<int>(knots.size()) - order; }
    // All order-`order` B-spline values at x, written to out[0..count()-1].
    void values(double x, double* out, std::vector<double>& work) const;
    // Tail sums sum_{h>=j} d/dx B_h for j = 1..count()-1.  The telescoped
    // closed form (order-1) * recip[order][j] * B_j^{(order-1)}(x) is used,
    // which is nonnegative term by term.
    void tail_derivs(double x, double* out, std::vector<double>& work) const;

   private:
    void lower_levels(double x, int upto, std::vector<double>& work) const;
  };

  int order_;
  double a_, b_;
  std::vector<double> interior_;
  Padded base_;   // order l, for bspline()
  Padded integ_;  // order l+1, for ispline()/mspline()

  void check_domain(double x) const;
};

// Interior knots at the j/(n_interior+1) empirical quantiles of the anchors,
// j = 1..n_interior (median-unbiased quantile definition).  Quantiles that
// coincide with each other or fall on the boundary are discarded, so the
// returned vector may hold fewer than n_interior interior knots.
KnotVector make_knots(std::vector<double> anchors, int n_interior, int order,
                      double a, double b);

}  // namespace sieveroc
