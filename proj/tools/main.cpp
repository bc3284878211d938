#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sieveroc/bootstrap.hpp"
#include "sieveroc/data.hpp"
#include "sieveroc/errors.hpp"
#include "sieveroc/estimators.hpp"
#include "sieveroc/numerics.hpp"
#include "sieveroc/pipeline.hpp"
#include "sieveroc/simcopula.hpp"
#include "sieveroc/threads.hpp"

namespace {

using namespace sieveroc;

void add_pipeline_flags(CLI::App* cmd, PipelineOptions& pipe) {
  cmd->add_option("--order", pipe.order, "Spline order")->capture_default_str();
  cmd->add_option("--knots", pipe.interior_knots,
                  "Interior knots per axis (0 = cube-root-of-n rule)")
      ->capture_default_str();
}

void add_fit_flags(CLI::App* cmd, FitOptions& opt) {
  cmd->add_option("--max-iter", opt.max_iterations, "Optimizer iteration cap")
      ->capture_default_str();
  cmd->add_option("--ftol", opt.f_tol, "Log-likelihood improvement tolerance")
      ->capture_default_str();
  cmd->add_option("--pg-tol", opt.pg_tol, "Projected-gradient norm tolerance")
      ->capture_default_str();
  cmd->add_flag("--adaptive-step", opt.adaptive_step,
                "Carry the accepted step size between iterations");
}

Dataset load_data(const std::string& path, const std::optional<double>& tau_t,
                  const std::optional<double>& tau_m) {
  Dataset d = read_csv(path);
  override_taus(d, tau_t, tau_m);
  return d;
}

void write_table(const std::string& path, const std::string& header,
                 const std::vector<std::string>& rows) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << header << '\n';
  for (const auto& r : rows) out << r << '\n';
  if (!out) throw DataError("write failed for '" + path + "'");
}

// key=value file for `simulate`; values are applied only for flags not given
// on the command line.
void apply_sim_config(const std::string& path, const CLI::App& sim,
                      SimConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");

  const auto trim = [](const std::string& s) {
    const char* ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return std::string();
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
  };

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';' || s[0] == '[') continue;
    const auto where = path + ":" + std::to_string(lineno);
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw DataError(where + ": expected key=value, got '" + s + "'");
    const std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"') {
      const auto close = value.find('"', 1);
      if (close != std::string::npos) value = value.substr(1, close - 1);
    } else {
      const auto hash = value.find('#');
      if (hash != std::string::npos) value = trim(value.substr(0, hash));
    }

    const auto num = [&](double& slot) {
      try {
        std::size_t used = 0;
        const double x = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        slot = x;
      } catch (const std::exception&) {
        throw DataError(where + ": bad number '" + value + "'");
      }
    };
    // command-line flags win over the file
    const auto from_file = [&](const char* flag) { return sim.count(flag) == 0; };

    if (key == "tau") {
      if (from_file("--tau")) num(cfg.tau);
    } else if (key == "rho") {
      if (from_file("--rho")) num(cfg.rho);
    } else if (key == "lambda") {
      if (from_file("--lambda")) num(cfg.lambda);
    } else if (key == "alpha") {
      if (from_file("--alpha")) num(cfg.alpha);
    } else if (key == "beta") {
      if (from_file("--beta")) num(cfg.beta);
    } else if (key == "scale") {
      if (from_file("--scale")) num(cfg.scale);
    } else if (key == "lc") {
      if (from_file("--lc")) num(cfg.lc);
    } else if (key == "n") {
      if (from_file("--n")) {
        double x = 0.0;
        num(x);
        if (x < 0 || x != std::floor(x))
          throw DataError(where + ": n must be a non-negative integer");
        cfg.n = static_cast<int>(x);
      }
    } else if (key == "seed") {
      if (from_file("--seed")) {
        try {
          std::size_t used = 0;
          cfg.seed = std::stoull(value, &used);
          if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
          throw DataError(where + ": bad seed '" + value + "'");
        }
      }
    } else {
      throw DataError(where + ": unknown key '" + key + "'");
    }
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Time-dependent ROC/AUC estimation for interval-censored data"};
  app.require_subcommand(1);

  // --- simulate ---------------------------------------------------------
  SimConfig sim_cfg;
  std::string sim_out, sim_latent, sim_config;
  auto* sim = app.add_subcommand("simulate",
                                 "Generate an interval-censored dataset");
  sim->add_option("--tau", sim_cfg.tau, "Kendall's tau of the copula")
      ->capture_default_str();
  sim->add_option("--rho", sim_cfg.rho, "Target right-censoring rate")
      ->capture_default_str();
  sim->add_option("--n", sim_cfg.n, "Sample size")->capture_default_str();
  sim->add_option("--seed", sim_cfg.seed, "RNG seed")->capture_default_str();
  sim->add_option("--lambda", sim_cfg.lambda, "Event hazard")->capture_default_str();
  sim->add_option("--alpha", sim_cfg.alpha, "Marker beta shape 1")
      ->capture_default_str();
  sim->add_option("--beta", sim_cfg.beta, "Marker beta shape 2")
      ->capture_default_str();
  sim->add_option("--scale", sim_cfg.scale, "Marker scale")->capture_default_str();
  sim->add_option("--lc", sim_cfg.lc, "Inter-assessment gap")->capture_default_str();
  sim->add_option("--out", sim_out, "Output dataset CSV")->required();
  sim->add_option("--latent", sim_latent, "Optional latent-truth CSV (t_true,m)");
  sim->add_option("--config", sim_config,
                  "Key=value config file (flags take precedence)");

  // --- fit --------------------------------------------------------------
  std::string fit_data, fit_out;
  std::optional<double> fit_tau_t, fit_tau_m;
  PipelineOptions fit_pipe;
  FitOptions fit_opt;
  auto* fit_cmd = app.add_subcommand("fit", "Fit the CDF sieve to a dataset");
  fit_cmd->add_option("--data", fit_data, "Dataset CSV")->required();
  fit_cmd->add_option("--tau-t", fit_tau_t, "Time-domain bound override");
  fit_cmd->add_option("--tau-m", fit_tau_m, "Marker-domain bound override");
  add_pipeline_flags(fit_cmd, fit_pipe);
  add_fit_flags(fit_cmd, fit_opt);
  fit_cmd->add_option("--out", fit_out, "Output model JSON")->required();

  // --- roc --------------------------------------------------------------
  std::string roc_model, roc_out, roc_svg;
  double roc_t = 0.0;
  int roc_grid = 1001;
  auto* roc_cmd = app.add_subcommand("roc", "ROC curve from a fitted model");
  roc_cmd->add_option("--model", roc_model, "Model JSON from `fit`")->required();
  roc_cmd->add_option("--t", roc_t, "Time horizon")->required();
  roc_cmd->add_option("--grid", roc_grid, "Grid points on [0,1]")
      ->capture_default_str();
  roc_cmd->add_option("--out", roc_out, "Output curve CSV")->required();
  roc_cmd->add_option("--svg", roc_svg, "Optional SVG plot");

  // --- auc --------------------------------------------------------------
  std::string auc_model;
  double auc_t = 0.0;
  int auc_grid = 1001;
  auto* auc_cmd = app.add_subcommand("auc", "AUC at a horizon, printed as t,auc");
  auc_cmd->add_option("--model", auc_model, "Model JSON from `fit`")->required();
  auc_cmd->add_option("--t", auc_t, "Time horizon")->required();
  auc_cmd->add_option("--grid", auc_grid, "ROC grid points")->capture_default_str();

  // --- ci ---------------------------------------------------------------
  std::string ci_data, ci_accel = "jackknife";
  double ci_t = 0.0;
  std::optional<double> ci_tau_t, ci_tau_m;
  BootstrapOptions ci_opt;
  PipelineOptions ci_pipe;
  FitOptions ci_fit;
  auto* ci_cmd = app.add_subcommand("ci", "BCa bootstrap interval for AUC");
  ci_cmd->add_option("--data", ci_data, "Dataset CSV")->required();
  ci_cmd->add_option("--t", ci_t, "Time horizon")->required();
  ci_cmd->add_option("--B", ci_opt.B, "Bootstrap replicates")->capture_default_str();
  ci_cmd->add_option("--level", ci_opt.level, "Confidence level")
      ->capture_default_str();
  ci_cmd->add_option("--seed", ci_opt.seed, "RNG seed")->capture_default_str();
  ci_cmd->add_option("--accel", ci_accel, "Acceleration: jackknife or none")
      ->check(CLI::IsMember({"jackknife", "none"}))
      ->capture_default_str();
  ci_cmd->add_option("--grid", ci_opt.grid, "ROC grid points")->capture_default_str();
  ci_cmd->add_option("--tau-t", ci_tau_t, "Time-domain bound override");
  ci_cmd->add_option("--tau-m", ci_tau_m, "Marker-domain bound override");
  add_pipeline_flags(ci_cmd, ci_pipe);
  add_fit_flags(ci_cmd, ci_fit);

  // --- oracle -----------------------------------------------------------
  SimConfig oracle_cfg;
  double oracle_t = 0.0;
  auto* oracle_cmd =
      app.add_subcommand("oracle", "Analytic AUC under the simulation model");
  oracle_cmd->add_option("--tau", oracle_cfg.tau, "Kendall's tau")->required();
  oracle_cmd->add_option("--t", oracle_t, "Time horizon")->required();
  oracle_cmd->add_option("--lambda", oracle_cfg.lambda, "Event hazard")
      ->capture_default_str();
  oracle_cmd->add_option("--alpha", oracle_cfg.alpha, "Marker beta shape 1")
      ->capture_default_str();
  oracle_cmd->add_option("--beta", oracle_cfg.beta, "Marker beta shape 2")
      ->capture_default_str();
  oracle_cmd->add_option("--scale", oracle_cfg.scale, "Marker scale")
      ->capture_default_str();

  // --- replicate-table1 ---------------------------------------------------
  int rep_reps = 100, rep_n = 300, rep_B = 0;
  double rep_tau = 0.2, rep_rho = 0.5, rep_level = 0.95;
  std::uint64_t rep_seed = 1;
  std::vector<double> rep_ts;
  std::string rep_out;
  PipelineOptions rep_pipe;
  FitOptions rep_fit;
  auto* rep_cmd = app.add_subcommand(
      "replicate-table1", "Monte Carlo bias/std/coverage table for AUC");
  rep_cmd->add_option("--reps", rep_reps, "Monte Carlo replicates")
      ->capture_default_str();
  rep_cmd->add_option("--n", rep_n, "Sample size per replicate")
      ->capture_default_str();
  rep_cmd->add_option("--tau", rep_tau, "Kendall's tau")->capture_default_str();
  rep_cmd->add_option("--rho", rep_rho, "Right-censoring rate")
      ->capture_default_str();
  rep_cmd->add_option("--t", rep_ts, "Time horizons (repeatable)");
  rep_cmd->add_option("--seed", rep_seed, "RNG seed")->capture_default_str();
  rep_cmd->add_option("--B", rep_B,
                      "Bootstrap replicates for the coverage column (0 = skip)")
      ->capture_default_str();
  rep_cmd->add_option("--level", rep_level, "Confidence level for coverage")
      ->capture_default_str();
  add_pipeline_flags(rep_cmd, rep_pipe);
  add_fit_flags(rep_cmd, rep_fit);
  rep_cmd->add_option("--out", rep_out, "Output table CSV")->required();

  // --- histogram ----------------------------------------------------------
  std::string hist_data, hist_out;
  int hist_bins = 30;
  auto* hist_cmd =
      app.add_subcommand("histogram", "Equal-width histogram of the time anchors");
  hist_cmd->add_option("--data", hist_data, "Dataset CSV")->required();
  hist_cmd->add_option("--bins", hist_bins, "Bin count")->capture_default_str();
  hist_cmd->add_option("--out", hist_out, "Output histogram CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << '\n';
    return 2;
  }

  if (app.got_subcommand(sim)) {
    if (!sim_config.empty()) apply_sim_config(sim_config, *sim, sim_cfg);
    const SimulatedData out = gen_dataset_with_latent(sim_cfg);
    write_csv(out.data, sim_out);
    if (!sim_latent.empty()) {
      std::ofstream f(sim_latent);
      if (!f) throw DataError("cannot write '" + sim_latent + "'");
      f << "t_true,m\n";
      for (std::size_t i = 0; i < out.t_true.size(); ++i)
        f << format_double(out.t_true[i]) << ','
          << format_double(out.data.observations[i].marker) << '\n';
      if (!f) throw DataError("write failed for '" + sim_latent + "'");
    }
    return 0;
  }

  if (app.got_subcommand(fit_cmd)) {
    const Dataset d = load_data(fit_data, fit_tau_t, fit_tau_m);
    const SieveFit f = fit_dataset(d, fit_pipe, fit_opt);
    save_json(f, fit_out);
    return 0;
  }

  if (app.got_subcommand(roc_cmd)) {
    const SieveFit f = load_json(roc_model);
    const RocCurve curve = roc_curve(f, roc_t, roc_grid);
    write_csv(curve, roc_out);
    if (!roc_svg.empty()) write_svg(curve, roc_svg);
    return 0;
  }

  if (app.got_subcommand(auc_cmd)) {
    const SieveFit f = load_json(auc_model);
    const RocCurve curve = roc_curve(f, auc_t, auc_grid);
    std::cout << "t,auc\n"
              << format_double(auc_t) << ',' << format_double(curve.auc) << '\n';
    return 0;
  }

  if (app.got_subcommand(ci_cmd)) {
    const Dataset d = load_data(ci_data, ci_tau_t, ci_tau_m);
    ci_opt.jackknife = ci_accel == "jackknife";
    ci_opt.threads = thread_count_from_env();
    const BcaResult r = bca_auc(d, ci_t, ci_opt, ci_pipe, ci_fit);
    if (r.degenerate)
      std::cerr << "warning: degenerate bootstrap distribution; "
                   "interval collapsed to the point estimate\n";
    std::cout << "t,estimate,lower,upper,level,B,z0,a,failures\n"
              << format_double(r.t) << ',' << format_double(r.estimate) << ','
              << format_double(r.lower) << ',' << format_double(r.upper) << ','
              << format_double(r.level) << ',' << r.B << ','
              << format_double(r.z0) << ',' << format_double(r.accel) << ','
              << r.failures << '\n';
    return 0;
  }

  if (app.got_subcommand(oracle_cmd)) {
    const double value = true_auc_oracle(oracle_t, oracle_cfg);
    std::cout << "t,auc\n"
              << format_double(oracle_t) << ',' << format_double(value) << '\n';
    return 0;
  }

  if (app.got_subcommand(rep_cmd)) {
    if (rep_reps < 2) throw std::invalid_argument("replicate-table1: need --reps >= 2");
    if (rep_ts.empty()) rep_ts = {12.0};
    const int threads = thread_count_from_env();
    SimConfig base;
    base.tau = rep_tau;
    base.rho = rep_rho;
    base.n = rep_n;

    std::vector<double> truth(rep_ts.size());
    for (std::size_t i = 0; i < rep_ts.size(); ++i)
      truth[i] = true_auc_oracle(rep_ts[i], base);

    const auto nt = rep_ts.size();
    std::vector<std::vector<double>> aucs(
        static_cast<std::size_t>(rep_reps),
        std::vector<double>(nt, std::numeric_limits<double>::quiet_NaN()));
    std::vector<std::vector<int>> covered(
        static_cast<std::size_t>(rep_reps), std::vector<int>(nt, -1));

    parallel_for(rep_reps, threads, [&](int r) {
      SimConfig c = base;
      c.seed = Rng::derive(rep_seed, static_cast<std::uint64_t>(r));
      try {
        const Dataset data = gen_dataset(c);
        const SieveFit f = fit_dataset(data, rep_pipe, rep_fit);
        for (std::size_t i = 0; i < nt; ++i)
          aucs[static_cast<std::size_t>(r)][i] = roc_curve(f, rep_ts[i]).auc;
        if (rep_B > 0) {
          for (std::size_t i = 0; i < nt; ++i) {
            BootstrapOptions bo;
            bo.B = rep_B;
            bo.level = rep_level;
            bo.seed = Rng::derive(c.seed, 1000 + i);
            bo.threads = 1;  // replicates already fan out
            const BcaResult br = bca_auc(data, rep_ts[i], bo, rep_pipe, rep_fit);
            covered[static_cast<std::size_t>(r)][i] =
                (br.lower <= truth[i] && truth[i] <= br.upper) ? 1 : 0;
          }
        }
      } catch (const DataError&) {
      } catch (const ConvergenceError&) {
      }
    });

    std::vector<std::string> lines;
    for (std::size_t i = 0; i < nt; ++i) {
      std::vector<double> ok;
      for (int r = 0; r < rep_reps; ++r) {
        const double a = aucs[static_cast<std::size_t>(r)][i];
        if (!std::isnan(a)) ok.push_back(a);
      }
      const int failures = rep_reps - static_cast<int>(ok.size());
      if (failures * 10 > rep_reps)
        throw ConvergenceError("replicate-table1: " + std::to_string(failures) +
                               " of " + std::to_string(rep_reps) +
                               " replicate fits failed");
      double mean = 0.0;
      for (double a : ok) mean += a;
      mean /= static_cast<double>(ok.size());
      double ss = 0.0;
      for (double a : ok) ss += (a - mean) * (a - mean);
      const double sd = std::sqrt(ss / (static_cast<double>(ok.size()) - 1.0));
      const double rebias = (mean - truth[i]) / truth[i];

      std::string cov;
      if (rep_B > 0) {
        int hit = 0, tot = 0;
        for (int r = 0; r < rep_reps; ++r)
          if (covered[static_cast<std::size_t>(r)][i] >= 0) {
            ++tot;
            hit += covered[static_cast<std::size_t>(r)][i];
          }
        if (tot > 0) cov = format_double(static_cast<double>(hit) / tot);
      }
      lines.push_back(format_double(rep_ts[i]) + ',' + format_double(truth[i]) +
                      ',' + format_double(rep_rho) + ',' + std::to_string(rep_n) +
                      ',' + format_double(rebias) + ',' + format_double(sd) + ',' +
                      cov);
    }
    write_table(rep_out, "t,true_auc,rho,n,rebias,std,coverage", lines);
    return 0;
  }

  if (app.got_subcommand(hist_cmd)) {
    const Dataset d = read_csv(hist_data);
    write_histogram_csv(current_status_histogram(d, hist_bins), hist_out);
    return 0;
  }

  std::cerr << "error: usage: missing subcommand\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const DataError& e) {
    std::cerr << "error: data: " << e.what() << '\n';
    return 3;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: convergence: " << e.what() << '\n';
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: usage: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 1;
  }
}
