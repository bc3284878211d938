#include "sieveroc/sieve.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "sieveroc/errors.hpp"

namespace sieveroc {

Eigen::VectorXd SieveParams::flatten() const {
  Eigen::VectorXd out(parameter_count());
  Eigen::Index p = 0;
  for (Eigen::Index j = 0; j < gamma.rows(); ++j)
    for (Eigen::Index k = 0; k < gamma.cols(); ++k) out[p++] = gamma(j, k);
  out.tail(omega.size()) = omega;
  return out;
}

SieveParams SieveParams::unflatten(const Eigen::VectorXd& theta,
                                   Eigen::Index time_basis,
                                   Eigen::Index marker_basis) {
  if (theta.size() != time_basis * marker_basis + marker_basis)
    throw std::invalid_argument("unflatten: parameter vector has wrong length");
  SieveParams p;
  p.gamma.resize(time_basis, marker_basis);
  Eigen::Index i = 0;
  for (Eigen::Index j = 0; j < time_basis; ++j)
    for (Eigen::Index k = 0; k < marker_basis; ++k) p.gamma(j, k) = theta[i++];
  p.omega = theta.tail(marker_basis);
  return p;
}

DesignRows build_design(const Dataset& data, const KnotVector& time_knots,
                        const KnotVector& marker_knots) {
  const Eigen::Index jt = time_knots.basis_count();
  const Eigen::Index jm = marker_knots.basis_count();
  DesignRows d;
  d.time_basis = jt;
  d.marker_basis = jm;
  d.rows.setZero(data.size(), jt * jm + jm);

  Eigen::VectorXd w(jt), mm(jm);
  for (int i = 0; i < data.size(); ++i) {
    const auto& obs = data.observations[i];
    try {
      marker_knots.mspline_into(obs.marker, mm.data());
      switch (obs.status) {
        case Status::Left:
          time_knots.ispline_into(obs.u, w.data());
          break;
        case Status::Interval: {
          time_knots.ispline_into(obs.u, w.data());
          Eigen::VectorXd iu = w;
          time_knots.ispline_into(obs.v, w.data());
          w -= iu;
          break;
        }
        case Status::Right:
          time_knots.ispline_into(obs.v, w.data());
          w = Eigen::VectorXd::Ones(jt) - w;
          break;
      }
    } catch (const std::invalid_argument& e) {
      throw DataError("observation " + std::to_string(i + 1) + ": " + e.what());
    }
    auto row = d.rows.row(i);
    for (Eigen::Index j = 0; j < jt; ++j)
      row.segment(j * jm, jm) = w[j] * mm.transpose();
    if (obs.status == Status::Right) row.tail(jm) = mm.transpose();
    if (!(row.maxCoeff() > 0.0))
      throw DataError("observation " + std::to_string(i + 1) +
                      " carries no likelihood mass for the chosen bases");
  }
  return d;
}

double loglik(const Eigen::VectorXd& theta, const DesignRows& design) {
  if (theta.size() != design.parameter_count())
    throw std::invalid_argument("loglik: parameter vector has wrong length");
  const Eigen::VectorXd mass = design.rows * theta;
  if (!(mass.array() > 0.0).all())
    return -std::numeric_limits<double>::infinity();
  return mass.array().log().sum();
}

double loglik(const SieveParams& params, const DesignRows& design) {
  return loglik(params.flatten(), design);
}

Eigen::VectorXd grad_loglik(const Eigen::VectorXd& theta, const DesignRows& design) {
  if (theta.size() != design.parameter_count())
    throw std::invalid_argument("grad_loglik: parameter vector has wrong length");
  const Eigen::VectorXd mass = design.rows * theta;
  if (!(mass.array() > 0.0).all())
    throw std::domain_error("grad_loglik: gradient undefined where loglik is -inf");
  return design.rows.transpose() * mass.cwiseInverse();
}

std::pair<double, double> eval_cdfs(const SieveFit& fit, double t, double m) {
  const Eigen::VectorXd it = fit.time_knots.ispline(t);
  const Eigen::VectorXd im = fit.marker_knots.ispline(m);
  const double joint = it.transpose() * fit.params.gamma * im;
  const Eigen::VectorXd q =
      fit.params.gamma.colwise().sum().transpose() + fit.params.omega;
  return {joint, q.dot(im)};
}

namespace {

nlohmann::json knots_to_json(const KnotVector& k) {
  return {{"a", k.a()}, {"b", k.b()}, {"interior", k.interior()}};
}

KnotVector knots_from_json(const nlohmann::json& j, int order) {
  return KnotVector(order, j.at("a").get<double>(), j.at("b").get<double>(),
                    j.at("interior").get<std::vector<double>>());
}

}  // namespace

std::string to_json(const SieveFit& fit) {
  if (fit.time_knots.order() != fit.marker_knots.order())
    throw std::logic_error("to_json: bases must share one spline order");
  nlohmann::json j;
  j["order"] = fit.time_knots.order();
  j["time_knots"] = knots_to_json(fit.time_knots);
  j["marker_knots"] = knots_to_json(fit.marker_knots);
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(fit.params.gamma.size()));
  for (Eigen::Index r = 0; r < fit.params.gamma.rows(); ++r)
    for (Eigen::Index c = 0; c < fit.params.gamma.cols(); ++c)
      g.push_back(fit.params.gamma(r, c));
  j["gamma"] = {{"rows", fit.params.gamma.rows()},
                {"cols", fit.params.gamma.cols()},
                {"data", g}};
  j["omega"] = std::vector<double>(fit.params.omega.data(),
                                   fit.params.omega.data() + fit.params.omega.size());
  j["loglik"] = fit.loglik;
  j["iterations"] = fit.iterations;
  j["stop_reason"] = fit.stop_reason;
  return j.dump(2) + "\n";
}

SieveFit fit_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    const int order = j.at("order").get<int>();
    KnotVector tk = knots_from_json(j.at("time_knots"), order);
    KnotVector mk = knots_from_json(j.at("marker_knots"), order);
    const auto& jg = j.at("gamma");
    const auto rows = jg.at("rows").get<Eigen::Index>();
    const auto cols = jg.at("cols").get<Eigen::Index>();
    const auto data = jg.at("data").get<std::vector<double>>();
    if (rows != tk.basis_count() || cols != mk.basis_count() ||
        static_cast<Eigen::Index>(data.size()) != rows * cols)
      throw DataError("model file: gamma dimensions do not match the bases");
    SieveParams p;
    p.gamma.resize(rows, cols);
    std::size_t i = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) p.gamma(r, c) = data[i++];
    const auto om = j.at("omega").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(om.size()) != mk.basis_count())
      throw DataError("model file: omega length does not match the marker basis");
    p.omega = Eigen::Map<const Eigen::VectorXd>(om.data(),
                                                static_cast<Eigen::Index>(om.size()));
    if ((p.gamma.array() < 0.0).any() || (p.omega.array() < 0.0).any() ||
        p.total_mass() > 1.0 + 1e-12)
      throw DataError("model file: coefficients violate the sieve constraints");
    SieveFit fit{std::move(p), std::move(tk), std::move(mk),
                 j.at("loglik").get<double>(), j.at("iterations").get<int>(),
                 j.value("stop_reason", std::string())};
    return fit;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model file is missing fields: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
}

void save_json(const SieveFit& fit, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << to_json(fit);
  if (!out) throw DataError("write failed for '" + path + "'");
}

SieveFit load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return fit_from_json(ss.str());
}

}  // namespace sieveroc
