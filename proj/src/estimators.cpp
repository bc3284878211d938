#include "sieveroc/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "sieveroc/errors.hpp"
#include "sieveroc/numerics.hpp"

namespace sieveroc {

namespace {

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

// All marker-direction evaluations at one fixed horizon t share the
// time-direction work: F(t,m) = w . I(m) with w_k = sum_j gamma_{jk} I_j(t),
// and F2(m) = q . I(m) with q = colsum(gamma) + omega.
struct HorizonSlice {
  const KnotVector* marker_knots;
  Eigen::VectorXd w, q;
  double f_t;  // F(t, tau_m)
  mutable Eigen::VectorXd im;

  HorizonSlice(const SieveFit& fit, double t)
      : marker_knots(&fit.marker_knots),
        w(fit.params.gamma.transpose() * fit.time_knots.ispline(t)),
        q(fit.params.gamma.colwise().sum().transpose() + fit.params.omega),
        f_t(w.sum()),
        im(fit.marker_knots.basis_count()) {}

  double tp(double m) const {
    marker_knots->ispline_into(m, im.data());
    return clamp01((f_t - w.dot(im)) / f_t);
  }
  double fp(double m) const {
    marker_knots->ispline_into(m, im.data());
    return clamp01((1.0 - q.dot(im) - f_t + w.dot(im)) / (1.0 - f_t));
  }

  void require_tp() const {
    if (!(f_t > 0.0))
      throw DataError("true-positive rate undefined: no fitted event mass by t");
  }
  void require_fp() const {
    if (!(f_t < 1.0))
      throw DataError("false-positive rate undefined: all fitted mass lies before t");
  }

  // Smallest m with FP(m) <= p.
  double invert_fp(double p) const {
    const double tau_m = marker_knots->b();
    if (fp(0.0) <= p) return 0.0;
    if (fp(tau_m) > p) return tau_m;
    double lo = 0.0, hi = tau_m;
    const double tol = 1e-10 * tau_m;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (fp(mid) <= p)
        hi = mid;
      else
        lo = mid;
    }
    return hi;
  }
};

}  // namespace

double tp(const SieveFit& fit, double t, double m) {
  const HorizonSlice s(fit, t);
  s.require_tp();
  return s.tp(m);
}

double fp(const SieveFit& fit, double t, double m) {
  const HorizonSlice s(fit, t);
  s.require_fp();
  return s.fp(m);
}

double fp_inverse(const SieveFit& fit, double t, double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("fp_inverse: p outside [0, 1]");
  const HorizonSlice s(fit, t);
  s.require_fp();
  return s.invert_fp(p);
}

RocCurve roc_curve(const SieveFit& fit, double t, int grid) {
  if (grid < 2) throw std::invalid_argument("roc_curve: grid needs >= 2 points");
  const HorizonSlice s(fit, t);
  s.require_tp();
  s.require_fp();

  RocCurve out;
  out.t = t;
  out.p.resize(grid);
  out.roc.resize(grid);

  const double tau_m = fit.marker_knots.b();
  const double p_floor = s.fp(tau_m);
  if (p_floor > 0.0) {
    out.extended_below = true;
    out.p_floor = p_floor;
    out.roc_floor = s.tp(s.invert_fp(p_floor));
  }

  for (int g = 0; g < grid; ++g) {
    const double p = static_cast<double>(g) / (grid - 1);
    out.p[g] = p;
    out.roc[g] = p < p_floor ? out.roc_floor : s.tp(s.invert_fp(p));
  }
  out.auc = (out.roc.sum() - 0.5 * (out.roc[0] + out.roc[grid - 1])) / (grid - 1);
  return out;
}

void write_csv(const RocCurve& curve, std::ostream& out) {
  out << "# t=" << format_double(curve.t) << " auc=" << format_double(curve.auc);
  if (curve.extended_below)
    out << " p_floor=" << format_double(curve.p_floor);
  out << "\np,roc\n";
  for (Eigen::Index i = 0; i < curve.p.size(); ++i)
    out << format_double(curve.p[i]) << ',' << format_double(curve.roc[i]) << '\n';
}

void write_csv(const RocCurve& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  write_csv(curve, out);
  if (!out) throw DataError("write failed for '" + path + "'");
}

namespace {

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

void write_svg(const RocCurve& curve, std::ostream& out) {
  const double size = 640.0, margin = 70.0;
  const double span = size - 2.0 * margin;
  const auto X = [&](double p) { return margin + p * span; };
  const auto Y = [&](double r) { return size - margin - r * span; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
         "viewBox=\"0 0 640 640\">\n";
  out << "<rect width=\"640\" height=\"640\" fill=\"white\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double v = 0.2 * i;
    out << "<line x1=\"" << fixed2(X(v)) << "\" y1=\"" << fixed2(Y(0)) << "\" x2=\""
        << fixed2(X(v)) << "\" y2=\"" << fixed2(Y(1))
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<line x1=\"" << fixed2(X(0)) << "\" y1=\"" << fixed2(Y(v)) << "\" x2=\""
        << fixed2(X(1)) << "\" y2=\"" << fixed2(Y(v))
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    char label[16];
    std::snprintf(label, sizeof label, "%.1f", v);
    out << "<text x=\"" << fixed2(X(v)) << "\" y=\"" << fixed2(size - margin + 24.0)
        << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">"
        << label << "</text>\n";
    out << "<text x=\"" << fixed2(margin - 12.0) << "\" y=\"" << fixed2(Y(v) + 5.0)
        << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"end\">"
        << label << "</text>\n";
  }
  out << "<line x1=\"" << fixed2(X(0)) << "\" y1=\"" << fixed2(Y(0)) << "\" x2=\""
      << fixed2(X(1)) << "\" y2=\"" << fixed2(Y(1))
      << "\" stroke=\"#999999\" stroke-width=\"1\" stroke-dasharray=\"6,4\"/>\n";
  out << "<rect x=\"" << fixed2(margin) << "\" y=\"" << fixed2(margin) << "\" width=\""
      << fixed2(span) << "\" height=\"" << fixed2(span)
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";

  out << "<polyline fill=\"none\" stroke=\"#1f61a0\" stroke-width=\"2\" points=\"";
  for (Eigen::Index i = 0; i < curve.p.size(); ++i) {
    if (i > 0) out << ' ';
    out << fixed2(X(curve.p[i])) << ',' << fixed2(Y(curve.roc[i]));
  }
  out << "\"/>\n";

  char title[96];
  std::snprintf(title, sizeof title, "t = %g, AUC = %.4f", curve.t, curve.auc);
  out << "<text x=\"320\" y=\"40\" font-family=\"sans-serif\" font-size=\"18\" "
         "text-anchor=\"middle\">"
      << title << "</text>\n";
  out << "<text x=\"320\" y=\"" << fixed2(size - 16.0)
      << "\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">"
         "False positive rate</text>\n";
  out << "<text x=\"22\" y=\"320\" font-family=\"sans-serif\" font-size=\"15\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 22 320)\">"
         "True positive rate</text>\n";
  out << "</svg>\n";
}

void write_svg(const RocCurve& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  write_svg(curve, out);
  if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace sieveroc
