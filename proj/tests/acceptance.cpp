// End-to-end acceptance checks.  Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any criterion fails.  `--only <id>` (repeatable)
// restricts the run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sieveroc/bootstrap.hpp"
#include "sieveroc/data.hpp"
#include "sieveroc/errors.hpp"
#include "sieveroc/estimators.hpp"
#include "sieveroc/pipeline.hpp"
#include "sieveroc/rng.hpp"
#include "sieveroc/simcopula.hpp"
#include "sieveroc/threads.hpp"
#include "support/oracles.hpp"
#include "support/proc.hpp"

using namespace sieveroc;
using namespace testsupport;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream ss;
  ss << std::setprecision(precision) << v;
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double field_value(const std::string& line, std::size_t idx) {
  const auto f = fields_of(line);
  if (idx >= f.size()) throw std::runtime_error("missing field in: " + line);
  return std::strtod(f[idx].c_str(), nullptr);
}

// 1: the analytic AUC matches the published working values.
Outcome analytic_auc_values() {
  TempDir tmp;
  const std::string cli = cli_path();
  struct Case {
    double tau, t, expect;
  };
  const std::vector<Case> cases = {
      {0.2, 12.0, 0.6818}, {0.2, 28.0, 0.6397},
      {0.6, 12.0, 0.9473}, {0.6, 28.0, 0.8948}};
  const double t0 = now_seconds();
  std::string detail;
  bool ok = true;
  for (const auto& c : cases) {
    const auto r = run_command(cli + " oracle --tau " + fmt(c.tau) + " --t " +
                                   fmt(c.t),
                               tmp);
    if (r.exit_code != 0) return {false, "oracle exited " + std::to_string(r.exit_code)};
    const auto lines = lines_of(r.out);
    if (lines.size() != 2) return {false, "unexpected oracle output"};
    const double got = field_value(lines[1], 1);
    ok = ok && std::abs(got - c.expect) <= 0.005;
    if (!detail.empty()) detail += ", ";
    detail += fmt(got, 5) + " vs " + fmt(c.expect, 4);
  }
  const double elapsed = now_seconds() - t0;
  ok = ok && elapsed < 5.0;
  return {ok, detail + "; " + fmt(elapsed, 3) + "s"};
}

// 2: Monte Carlo bias and spread of the estimator at the reference design.
Outcome monte_carlo_bias_and_spread() {
  TempDir tmp;
  const std::string table = tmp.file("table.csv");
  const auto r = run_command(
      cli_path() +
          " replicate-table1 --reps 100 --n 300 --tau 0.2 --rho 0.5 --t 12 --out " +
          "\"" + table + "\"",
      tmp);
  if (r.exit_code != 0)
    return {false, "replicate-table1 exited " + std::to_string(r.exit_code)};
  const auto lines = lines_of(read_file(table));
  if (lines.size() != 2) return {false, "unexpected table shape"};
  const double rebias = field_value(lines[1], 4);
  const double sd = field_value(lines[1], 5);
  const bool ok = std::abs(rebias) <= 0.02 && sd >= 0.025 && sd <= 0.055;
  return {ok, "rel bias " + fmt(rebias, 3) + ", std " + fmt(sd, 3)};
}

// 3: the mean absolute AUC error shrinks when n grows from 100 to 300.
Outcome error_shrinks_with_sample_size() {
  const int reps = 50;
  const int threads = thread_count_from_env();
  std::string detail;
  bool ok = true;
  int config_index = 0;
  for (double tau : {0.2, 0.6}) {
    SimConfig base;
    base.tau = tau;
    const double truth = true_auc_oracle(12.0, base);
    double mean_err[2] = {0.0, 0.0};
    int which = 0;
    for (int n : {100, 300}) {
      std::vector<double> errs(reps, 0.0);
      std::vector<std::string> problems(reps);
      parallel_for(reps, threads, [&](int rep) {
        SimConfig c = base;
        c.n = n;
        c.seed = Rng::derive(1000 + static_cast<std::uint64_t>(config_index),
                             static_cast<std::uint64_t>(rep));
        try {
          const SieveFit f = fit_dataset(gen_dataset(c), {}, {});
          errs[static_cast<std::size_t>(rep)] =
              std::abs(roc_curve(f, 12.0).auc - truth);
        } catch (const std::exception& e) {
          problems[static_cast<std::size_t>(rep)] = e.what();
        }
      });
      for (const auto& p : problems)
        if (!p.empty()) return {false, "replicate failed: " + p};
      double s = 0.0;
      for (double e : errs) s += e;
      mean_err[which++] = s / reps;
      ++config_index;
    }
    ok = ok && mean_err[1] < mean_err[0];
    if (!detail.empty()) detail += "; ";
    detail += "tau " + fmt(tau, 2) + ": " + fmt(mean_err[0], 4) + " -> " +
              fmt(mean_err[1], 4);
  }
  return {ok, detail};
}

// 4: BCa interval coverage at the reference design.
Outcome bootstrap_coverage() {
  const int reps = 200;
  SimConfig base;
  base.tau = 0.2;
  base.rho = 0.5;
  base.n = 300;
  const double truth = true_auc_oracle(12.0, base);
  const int threads = thread_count_from_env();

  std::vector<int> covered(reps, -1);
  std::vector<std::string> problems(reps);
  parallel_for(reps, threads, [&](int rep) {
    SimConfig c = base;
    c.seed = Rng::derive(42, static_cast<std::uint64_t>(rep));
    BootstrapOptions bo;
    bo.B = 200;
    bo.level = 0.95;
    bo.seed = Rng::derive(43, static_cast<std::uint64_t>(rep));
    bo.threads = 1;
    try {
      const BcaResult r = bca_auc(gen_dataset(c), 12.0, bo);
      covered[static_cast<std::size_t>(rep)] =
          (r.lower <= truth && truth <= r.upper) ? 1 : 0;
    } catch (const std::exception& e) {
      problems[static_cast<std::size_t>(rep)] = e.what();
    }
  });

  int hits = 0, usable = 0, failed = 0;
  for (int rep = 0; rep < reps; ++rep) {
    if (covered[static_cast<std::size_t>(rep)] < 0) {
      ++failed;
      continue;
    }
    ++usable;
    hits += covered[static_cast<std::size_t>(rep)];
  }
  if (failed * 20 > reps) {
    std::string first;
    for (const auto& p : problems)
      if (!p.empty()) {
        first = p;
        break;
      }
    return {false, std::to_string(failed) + " of " + std::to_string(reps) +
                       " replicates failed: " + first};
  }
  const double coverage = static_cast<double>(hits) / usable;
  const bool ok = coverage >= 0.88 && coverage <= 0.98;
  std::string detail = "coverage " + fmt(coverage, 3) + " (" +
                       std::to_string(hits) + "/" + std::to_string(usable) + ")";
  if (failed > 0) detail += ", " + std::to_string(failed) + " failed";
  return {ok, detail};
}

// 5: the property/unit suite passes quickly.
Outcome property_suite_runtime() {
  const char* unit = std::getenv("SIEVE_ROC_UNIT");
  if (unit == nullptr || *unit == '\0')
    return {false, "SIEVE_ROC_UNIT is not set; run through ctest"};
  TempDir tmp;
  const double t0 = now_seconds();
  const auto r = run_command(std::string(unit), tmp);
  const double elapsed = now_seconds() - t0;
  const bool ok = r.exit_code == 0 && elapsed < 60.0;
  return {ok, "exit " + std::to_string(r.exit_code) + ", " + fmt(elapsed, 3) + "s"};
}

// 6: the generator hits its calibration targets.
Outcome generator_calibration() {
  bool ok = true;
  std::string detail;
  for (double rho : {0.3, 0.5}) {
    SimConfig c;
    c.rho = rho;
    c.n = 20000;
    c.seed = 7;
    const Dataset d = gen_dataset(c);
    int right = 0;
    for (const auto& obs : d.observations)
      if (obs.status == Status::Right) ++right;
    const double rate = static_cast<double>(right) / c.n;
    ok = ok && std::abs(rate - rho) <= 0.015;
    if (!detail.empty()) detail += ", ";
    detail += "rho " + fmt(rho, 2) + ": " + fmt(rate, 3);
  }
  for (double tau : {0.2, 0.6}) {
    const double mu = mu_from_tau(tau);
    Rng rng(8);
    std::vector<double> us, vs;
    const int pairs = 20000;
    us.reserve(pairs);
    vs.reserve(pairs);
    for (int i = 0; i < pairs; ++i) {
      const auto [u, v] = clayton_pair(mu, rng);
      us.push_back(u);
      vs.push_back(v);
    }
    const double got = kendall_tau(us, vs);
    ok = ok && std::abs(got - tau) <= 0.02;
    detail += ", tau " + fmt(tau, 2) + ": " + fmt(got, 3);
  }
  return {ok, detail};
}

// 7: every seeded command is byte-identical across runs and worker counts.
Outcome seeded_determinism() {
  TempDir tmp;
  const std::string cli = cli_path();
  const std::string data = tmp.file("d.csv");
  const std::string model = tmp.file("m.json");

  struct Step {
    std::string label;
    std::string cmd;                    // without the env prefix
    std::vector<std::string> outputs;   // files to snapshot (stdout always)
  };
  const std::vector<Step> steps = {
      {"simulate",
       cli + " simulate --n 120 --seed 31 --out \"" + data + "\"",
       {data}},
      {"fit",
       cli + " fit --data \"" + data + "\" --knots 2 --out \"" + model + "\"",
       {model}},
      {"roc",
       cli + " roc --model \"" + model + "\" --t 12 --grid 201 --out \"" +
           tmp.file("roc.csv") + "\" --svg \"" + tmp.file("roc.svg") + "\"",
       {tmp.file("roc.csv"), tmp.file("roc.svg")}},
      {"auc", cli + " auc --model \"" + model + "\" --t 12", {}},
      {"oracle", cli + " oracle --tau 0.2 --t 12", {}},
      {"ci",
       cli + " ci --data \"" + data + "\" --t 10 --B 100 --seed 5 --grid 201" +
           " --knots 1",
       {}},
      {"replicate-table1",
       cli + " replicate-table1 --reps 4 --n 60 --t 12 --seed 21 --knots 1" +
           " --out \"" + tmp.file("table.csv") + "\"",
       {tmp.file("table.csv")}},
      {"histogram",
       cli + " histogram --data \"" + data + "\" --bins 7 --out \"" +
           tmp.file("h.csv") + "\"",
       {tmp.file("h.csv")}},
  };

  for (const auto& step : steps) {
    std::vector<std::string> snapshots;
    for (const std::string& env :
         {std::string("SIEVE_ROC_THREADS=1 "), std::string("SIEVE_ROC_THREADS=1 "),
          std::string("SIEVE_ROC_THREADS=4 ")}) {
      const auto r = run_command(env + step.cmd, tmp);
      if (r.exit_code != 0)
        return {false, step.label + " exited " + std::to_string(r.exit_code)};
      std::string snap = r.out;
      for (const auto& f : step.outputs) snap += "\x1f" + read_file(f);
      snapshots.push_back(std::move(snap));
    }
    if (snapshots[0] != snapshots[1])
      return {false, step.label + " differs between identical runs"};
    if (snapshots[0] != snapshots[2])
      return {false, step.label + " differs between worker counts 1 and 4"};
  }
  return {true, std::to_string(steps.size()) + " commands stable"};
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only.push_back(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--only <id>]...\n";
      return 2;
    }
  }

  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "analytic-auc-values", analytic_auc_values},
      {2, "monte-carlo-bias-and-spread", monte_carlo_bias_and_spread},
      {3, "error-shrinks-with-sample-size", error_shrinks_with_sample_size},
      {4, "bootstrap-coverage", bootstrap_coverage},
      {5, "property-suite-runtime", property_suite_runtime},
      {6, "generator-calibration", generator_calibration},
      {7, "seeded-determinism", seeded_determinism},
  };

  int passed = 0, ran = 0;
  for (const auto& c : criteria) {
    if (!only.empty() &&
        std::find(only.begin(), only.end(), c.id) == only.end())
      continue;
    ++ran;
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    passed += out.ok ? 1 : 0;
    std::cout << (out.ok ? "PASS " : "FAIL ") << c.id << ' ' << c.name << " ("
              << out.detail << ")" << std::endl;
  }
  std::cout << "acceptance: " << passed << " of " << ran << " criteria passed"
            << std::endl;
  return passed == ran ? 0 : 1;
}
