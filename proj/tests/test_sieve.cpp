#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "sieveroc/errors.hpp"
#include "sieveroc/pipeline.hpp"
#include "sieveroc/rng.hpp"
#include "sieveroc/sieve.hpp"
#include "sieveroc/simcopula.hpp"

using namespace sieveroc;

namespace {

// Order-1 bases on [0,10] x [0,1]: I(t) = t/10, M(m) = 1, so the design rows
// can be written down by hand.
struct HandSetup {
  Dataset data;
  KnotVector time_knots{1, 0.0, 10.0, {}};
  KnotVector marker_knots{1, 0.0, 1.0, {}};
  DesignRows design;

  HandSetup() {
    data = dataset_from_observations({make_left(5.0, 0.3),
                                      make_interval(2.0, 6.0, 0.3),
                                      make_right(5.0, 0.3)});
    override_taus(data, 10.0, 1.0);
    design = build_design(data, time_knots, marker_knots);
  }
};

}  // namespace

TEST_CASE("design rows for the order-1 hand case") {
  HandSetup h;
  REQUIRE(h.design.size() == 3);
  REQUIRE(h.design.parameter_count() == 2);
  CHECK(h.design.rows(0, 0) == doctest::Approx(0.5).epsilon(1e-15));  // I(5)
  CHECK(h.design.rows(0, 1) == 0.0);
  CHECK(h.design.rows(1, 0) == doctest::Approx(0.4).epsilon(1e-14));  // I(6)-I(2)
  CHECK(h.design.rows(1, 1) == 0.0);
  CHECK(h.design.rows(2, 0) == doctest::Approx(0.5).epsilon(1e-15));  // 1-I(5)
  CHECK(h.design.rows(2, 1) == doctest::Approx(1.0).epsilon(1e-15));  // M(m)
}

TEST_CASE("log-likelihood and gradient on the hand case") {
  HandSetup h;
  Eigen::VectorXd theta(2);
  theta << 0.5, 0.25;
  const double expected =
      std::log(0.25) + std::log(0.2) + std::log(0.5);
  CHECK(loglik(theta, h.design) == doctest::Approx(expected).epsilon(1e-14));

  const Eigen::VectorXd g = grad_loglik(theta, h.design);
  CHECK(g[0] == doctest::Approx(5.0).epsilon(1e-13));  // 0.5/0.25+0.4/0.2+0.5/0.5
  CHECK(g[1] == doctest::Approx(2.0).epsilon(1e-13));  // 1/0.5
}

TEST_CASE("zero-mass rows produce the -infinity sentinel") {
  HandSetup h;
  Eigen::VectorXd theta(2);
  theta << 0.0, 1.0;  // first two rows get zero mass
  CHECK(loglik(theta, h.design) == -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(grad_loglik(theta, h.design), std::domain_error);

  Eigen::VectorXd wrong(3);
  wrong.setConstant(0.1);
  CHECK_THROWS_AS(loglik(wrong, h.design), std::invalid_argument);
  CHECK_THROWS_AS(grad_loglik(wrong, h.design), std::invalid_argument);
}

TEST_CASE("analytic gradient matches finite differences") {
  SimConfig cfg;
  cfg.n = 40;
  cfg.seed = 21;
  const Dataset data = gen_dataset(cfg);
  const KnotVector tk = make_knots(knot_anchors(data), 2, 2, 0.0, data.tau_t);
  const KnotVector mk = make_knots(marker_values(data), 2, 2, 0.0, data.tau_m);
  const DesignRows design = build_design(data, tk, mk);
  const Eigen::Index P = design.parameter_count();

  Rng rng(77);
  Eigen::VectorXd theta(P);
  for (Eigen::Index i = 0; i < P; ++i)
    theta[i] = rng.uniform(0.2, 0.8) / static_cast<double>(P);

  const Eigen::VectorXd g = grad_loglik(theta, design);
  const double h = 1e-7;
  for (Eigen::Index i = 0; i < P; ++i) {
    Eigen::VectorXd up = theta, dn = theta;
    up[i] += h;
    dn[i] -= h;
    const double fd = (loglik(up, design) - loglik(dn, design)) / (2.0 * h);
    CHECK(g[i] == doctest::Approx(fd).epsilon(1e-4));
  }
}

TEST_CASE("log-likelihood is concave along random segments") {
  SimConfig cfg;
  cfg.n = 30;
  cfg.seed = 22;
  const Dataset data = gen_dataset(cfg);
  const KnotVector tk = make_knots(knot_anchors(data), 2, 2, 0.0, data.tau_t);
  const KnotVector mk = make_knots(marker_values(data), 2, 2, 0.0, data.tau_m);
  const DesignRows design = build_design(data, tk, mk);
  const Eigen::Index P = design.parameter_count();

  Rng rng(78);
  for (int rep = 0; rep < 25; ++rep) {
    Eigen::VectorXd x(P), y(P);
    for (Eigen::Index i = 0; i < P; ++i) {
      x[i] = rng.uniform(0.1, 0.9) / static_cast<double>(P);
      y[i] = rng.uniform(0.1, 0.9) / static_cast<double>(P);
    }
    const double lam = rng.next_double();
    const Eigen::VectorXd mid = lam * x + (1.0 - lam) * y;
    CHECK(loglik(mid, design) >=
          lam * loglik(x, design) + (1.0 - lam) * loglik(y, design) - 1e-10);
  }
}

TEST_CASE("scaling the coefficients shifts the log-likelihood by n log c") {
  HandSetup h;
  Eigen::VectorXd theta(2);
  theta << 0.5, 0.25;
  const double c = 0.5;
  CHECK(loglik((c * theta).eval(), h.design) ==
        doctest::Approx(loglik(theta, h.design) + 3.0 * std::log(c)).epsilon(1e-12));
}

TEST_CASE("flatten/unflatten use a row-major gamma block then omega") {
  SieveParams p;
  p.gamma.resize(2, 3);
  p.gamma << 1, 2, 3, 4, 5, 6;
  p.omega.resize(3);
  p.omega << 7, 8, 9;
  const Eigen::VectorXd flat = p.flatten();
  REQUIRE(flat.size() == 9);
  for (int i = 0; i < 9; ++i) CHECK(flat[i] == i + 1);
  const SieveParams back = SieveParams::unflatten(flat, 2, 3);
  CHECK((back.gamma.array() == p.gamma.array()).all());
  CHECK((back.omega.array() == p.omega.array()).all());
  CHECK(back.total_mass() == doctest::Approx(45.0));
  CHECK_THROWS_AS(SieveParams::unflatten(flat, 2, 2), std::invalid_argument);
}

TEST_CASE("eval_cdfs on the order-1 model") {
  SieveFit fit{SieveParams{}, KnotVector(1, 0.0, 10.0, {}),
               KnotVector(1, 0.0, 1.0, {}), 0.0, 0, "none"};
  fit.params.gamma.resize(1, 1);
  fit.params.gamma << 0.6;
  fit.params.omega.resize(1);
  fit.params.omega << 0.3;
  const auto [joint, marginal] = eval_cdfs(fit, 5.0, 0.5);
  CHECK(joint == doctest::Approx(0.15).epsilon(1e-14));     // 0.6 * 0.5 * 0.5
  CHECK(marginal == doctest::Approx(0.45).epsilon(1e-14));  // (0.6+0.3) * 0.5
}

TEST_CASE("fitted CDF is monotone in both arguments on a 50x50 grid") {
  SimConfig cfg;
  cfg.n = 120;
  cfg.seed = 23;
  const Dataset data = gen_dataset(cfg);
  const SieveFit f = fit_dataset(data);

  const int G = 50;
  Eigen::MatrixXd joint(G, G);
  for (int a = 0; a < G; ++a)
    for (int b = 0; b < G; ++b) {
      const double t = data.tau_t * a / (G - 1);
      const double m = data.tau_m * b / (G - 1);
      const auto [jv, mv] = eval_cdfs(f, t, m);
      joint(a, b) = jv;
      CHECK(jv <= mv + 1e-12);  // joint never exceeds the marker marginal
      CHECK(jv >= -1e-15);
      CHECK(mv <= 1.0 + 1e-12);
    }
  for (int a = 1; a < G; ++a)
    for (int b = 0; b < G; ++b) CHECK(joint(a, b) >= joint(a - 1, b) - 1e-12);
  for (int a = 0; a < G; ++a)
    for (int b = 1; b < G; ++b) CHECK(joint(a, b) >= joint(a, b - 1) - 1e-12);
}

TEST_CASE("model JSON round-trips bit for bit") {
  SimConfig cfg;
  cfg.n = 50;
  cfg.seed = 24;
  const Dataset data = gen_dataset(cfg);
  const SieveFit f = fit_dataset(data);

  const std::string text = to_json(f);
  const SieveFit back = fit_from_json(text);
  CHECK(to_json(back) == text);
  CHECK((back.params.gamma.array() == f.params.gamma.array()).all());
  CHECK((back.params.omega.array() == f.params.omega.array()).all());
  CHECK(back.time_knots == f.time_knots);
  CHECK(back.marker_knots == f.marker_knots);
  CHECK(back.loglik == f.loglik);
  CHECK(back.iterations == f.iterations);
  CHECK(back.stop_reason == f.stop_reason);
}

TEST_CASE("model JSON rejects tampered content") {
  SimConfig cfg;
  cfg.n = 50;
  cfg.seed = 24;
  const SieveFit f = fit_dataset(gen_dataset(cfg));
  const std::string text = to_json(f);

  CHECK_THROWS_AS(fit_from_json("{ not json"), DataError);
  CHECK_THROWS_AS(fit_from_json("{}"), DataError);

  auto j = nlohmann::json::parse(text);
  j["gamma"]["data"][0] = -0.1;
  CHECK_THROWS_WITH_AS(fit_from_json(j.dump()),
                       doctest::Contains("constraints"), DataError);

  j = nlohmann::json::parse(text);
  j["gamma"]["rows"] = j["gamma"]["rows"].get<int>() + 1;
  CHECK_THROWS_WITH_AS(fit_from_json(j.dump()),
                       doctest::Contains("dimensions"), DataError);

  j = nlohmann::json::parse(text);
  j["omega"] = std::vector<double>{0.1};
  CHECK_THROWS_WITH_AS(fit_from_json(j.dump()),
                       doctest::Contains("omega"), DataError);

  j = nlohmann::json::parse(text);
  for (auto& g : j["gamma"]["data"]) g = 0.5;  // mass blows past 1
  CHECK_THROWS_AS(fit_from_json(j.dump()), DataError);

  j = nlohmann::json::parse(text);
  j["time_knots"]["interior"] = std::vector<double>{5.0, 2.0};
  CHECK_THROWS_AS(fit_from_json(j.dump()), DataError);

  j = nlohmann::json::parse(text);
  j.erase("order");
  CHECK_THROWS_WITH_AS(fit_from_json(j.dump()),
                       doctest::Contains("missing"), DataError);
}

TEST_CASE("build_design reports the offending observation") {
  Dataset d = dataset_from_observations({make_left(5.0, 2.0)});
  const KnotVector tk(2, 0.0, 10.0, {});
  const KnotVector mk(2, 0.0, 1.0, {});  // marker 2.0 falls outside
  CHECK_THROWS_WITH_AS(build_design(d, tk, mk),
                       doctest::Contains("observation 1"), DataError);
}
