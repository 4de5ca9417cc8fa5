// Copyright 2026 The shuffledp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line accountant for the shuffle model: exact RDP via the
// Neyman-Pearson trade-off machinery, closed-form and prior-work bounds,
// Monte Carlo validation, and the shuffled noisy SGD trainer with a budget
// planner.
//
// Exit codes: 0 success, 1 I/O failure, 2 argument error, 3 infeasible plan.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "shuffledp/bounds.hpp"
#include "shuffledp/mc.hpp"
#include "shuffledp/renyi.hpp"
#include "shuffledp/sgd.hpp"
#include "shuffledp/tradeoff.hpp"

using json = nlohmann::ordered_json;
using namespace shuffledp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitArgs = 2;
constexpr int kExitInfeasible = 3;

std::string format_double(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

// One row of accountant output; the CSV schema is stable:
// epsilon0,n,lambda,method,epsilon,error_bound,flags
struct OutputRecord {
  double epsilon0 = 0.0;
  std::int64_t n = 0;
  double lambda = 0.0;
  std::string method;
  double epsilon = 0.0;
  double error_bound = 0.0;
  std::vector<std::string> flags;
};

constexpr const char* kCsvHeader =
    "epsilon0,n,lambda,method,epsilon,error_bound,flags";

std::string record_to_csv(const OutputRecord& r) {
  std::string flags;
  for (std::size_t i = 0; i < r.flags.size(); ++i) {
    if (i > 0) flags += ';';
    flags += r.flags[i];
  }
  std::string row;
  row += format_double(r.epsilon0);
  row += ',';
  row += std::to_string(r.n);
  row += ',';
  row += format_double(r.lambda);
  row += ',';
  row += r.method;
  row += ',';
  row += format_double(r.epsilon);
  row += ',';
  row += format_double(r.error_bound);
  row += ',';
  row += flags;
  return row;
}

json record_to_json(const OutputRecord& r) {
  return json{{"epsilon0", r.epsilon0},   {"n", r.n},
              {"lambda", r.lambda},       {"method", r.method},
              {"epsilon", r.epsilon},     {"error_bound", r.error_bound},
              {"flags", r.flags}};
}

// Grid syntax: either a comma list "0.1,0.5,2" or a linspace "0.1:3:15".
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> values;
  if (text.find(':') != std::string::npos) {
    double start = 0.0;
    double stop = 0.0;
    long count = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%ld", &start, &stop, &count) != 3 ||
        count < 1) {
      throw std::domain_error("grid: expected start:stop:count");
    }
    for (long i = 0; i < count; ++i) {
      const double t =
          count == 1 ? 0.0
                     : static_cast<double>(i) / static_cast<double>(count - 1);
      values.push_back(start + t * (stop - start));
    }
    return values;
  }
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    values.push_back(std::stod(token));
  }
  if (values.empty()) {
    throw std::domain_error("grid: empty value list");
  }
  return values;
}

const std::set<std::string> kAllMethods = {
    "exact",        "corollary2",   "theorem2_gdp",
    "girgis_upper", "girgis_lower", "feldman_ref"};

// Rows for one (epsilon0, n) pair across the lambda grid; the exact pair is
// built once and reused for every order.
std::vector<OutputRecord> compute_rows(double epsilon0, std::int64_t n,
                                       const std::vector<double>& lambdas,
                                       const std::set<std::string>& methods,
                                       double tail_tol) {
  std::vector<OutputRecord> rows;
  const ShuffleParams params(epsilon0, n);

  std::optional<std::pair<PairPmf, PairPmf>> pair;
  if (methods.count("exact") != 0) {
    pair = build_pair(params, tail_tol);
  }

  for (double lambda : lambdas) {
    if (methods.count("exact") != 0) {
      const RdpPoint forward = renyi_direct(pair->first, pair->second, lambda);
      const RdpPoint backward = renyi_direct(pair->second, pair->first, lambda);
      rows.push_back({epsilon0, n, lambda, "exact",
                      std::max(forward.epsilon, backward.epsilon),
                      std::max(forward.error_bound, backward.error_bound),
                      {}});
    }
    if (methods.count("corollary2") != 0) {
      rows.push_back({epsilon0, n, lambda, "corollary2",
                      corollary2_rdp(params, lambda).epsilon, 0.0, {}});
    }
    if (methods.count("theorem2_gdp") != 0) {
      rows.push_back({epsilon0, n, lambda, "theorem2_gdp",
                      theorem2_gdp(params).mu, 0.0, {"gdp_mu"}});
    }
    if (methods.count("girgis_upper") != 0) {
      const double rounded = std::round(lambda);
      if (std::abs(lambda - rounded) > 1e-9 || rounded < 2.0) {
        std::cerr << "girgis_upper skipped at lambda = " << lambda
                  << " (stated for integer lambda >= 2)\n";
      } else {
        rows.push_back(
            {epsilon0, n, lambda, "girgis_upper",
             girgis_upper(params, static_cast<std::int64_t>(rounded)).epsilon,
             0.0,
             {}});
      }
    }
    if (methods.count("girgis_lower") != 0) {
      rows.push_back({epsilon0, n, lambda, "girgis_lower",
                      girgis_lower(params, lambda).epsilon, 0.0, {}});
    }
    if (methods.count("feldman_ref") != 0) {
      rows.push_back({epsilon0, n, lambda, "feldman_ref",
                      feldman_ref(params, lambda).epsilon, 0.0,
                      {"approximate_reference"}});
    }
  }
  return rows;
}

int write_lines(const std::string& path, const std::vector<std::string>& lines) {
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!path.empty()) {
    file.open(path);
    if (!file) {
      std::cerr << "cannot open output file: " << path << "\n";
      return kExitIo;
    }
    out = &file;
  }
  for (const std::string& line : lines) {
    *out << line << "\n";
  }
  if (!*out) {
    std::cerr << "write failure\n";
    return kExitIo;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Subcommand implementations
// ---------------------------------------------------------------------------

struct RdpArgs {
  double epsilon0 = 0.0;
  std::int64_t n = 0;
  double lambda = 0.0;
  double tail_tol = 1e-15;
  std::string format = "json";
};

int run_rdp(const RdpArgs& args) {
  const RdpPoint exact =
      shuffle_rdp_exact(ShuffleParams(args.epsilon0, args.n), args.lambda,
                        args.tail_tol);
  const OutputRecord record{args.epsilon0, args.n,       args.lambda,
                            "exact",       exact.epsilon, exact.error_bound,
                            {}};
  if (args.format == "csv") {
    std::cout << kCsvHeader << "\n" << record_to_csv(record) << "\n";
  } else {
    std::cout << record_to_json(record).dump(2) << "\n";
  }
  return kExitOk;
}

struct CompareArgs {
  std::string epsilon0_grid;
  std::string lambda_grid;
  std::int64_t n = 10000;
  std::vector<std::string> methods;
  std::string preset;
  double tail_tol = 1e-15;
  std::string output;
  int threads = 4;
};

int run_compare(CompareArgs args) {
  if (args.preset == "fig2") {
    args.epsilon0_grid = "0.1:3:15";
    args.lambda_grid = "4";
    args.n = 10000;
  } else if (args.preset == "fig3") {
    args.epsilon0_grid = "2";
    args.lambda_grid = "2:16:15";
    args.n = 10000;
  } else if (!args.preset.empty()) {
    std::cerr << "unknown preset: " << args.preset << "\n";
    return kExitArgs;
  }
  if (args.epsilon0_grid.empty() || args.lambda_grid.empty()) {
    std::cerr << "need --epsilon0 and --lambda grids (or a --preset)\n";
    return kExitArgs;
  }

  std::set<std::string> methods(args.methods.begin(), args.methods.end());
  if (methods.empty()) methods = kAllMethods;
  for (const std::string& m : methods) {
    if (kAllMethods.count(m) == 0) {
      std::cerr << "unknown method: " << m << "\n";
      return kExitArgs;
    }
  }

  const std::vector<double> epsilon0s = parse_grid(args.epsilon0_grid);
  const std::vector<double> lambdas = parse_grid(args.lambda_grid);

  // Fan the (epsilon0, n) groups across workers; assembly is sorted, so the
  // output is deterministic regardless of completion order.
  std::vector<std::future<std::vector<OutputRecord>>> futures;
  futures.reserve(epsilon0s.size());
  for (double epsilon0 : epsilon0s) {
    futures.push_back(std::async(std::launch::async, compute_rows, epsilon0,
                                 args.n, lambdas, methods, args.tail_tol));
  }
  std::vector<OutputRecord> rows;
  for (auto& future : futures) {
    const std::vector<OutputRecord> part = future.get();
    rows.insert(rows.end(), part.begin(), part.end());
  }
  std::sort(rows.begin(), rows.end(),
            [](const OutputRecord& x, const OutputRecord& y) {
              if (x.epsilon0 != y.epsilon0) return x.epsilon0 < y.epsilon0;
              if (x.lambda != y.lambda) return x.lambda < y.lambda;
              return x.method < y.method;
            });

  std::vector<std::string> lines = {kCsvHeader};
  for (const OutputRecord& row : rows) lines.push_back(record_to_csv(row));
  return write_lines(args.output, lines);
}

struct TradeoffArgs {
  double epsilon0 = 0.0;
  std::int64_t n = 0;
  double tail_tol = 1e-15;
  std::string output;
  std::string pmf_p;
  std::string pmf_q;
};

int run_tradeoff(const TradeoffArgs& args) {
  const ShuffleParams params(args.epsilon0, args.n);
  const auto pair = build_pair(params, args.tail_tol);

  const auto dump_pmf = [](const PairPmf& pmf, const std::string& path) {
    std::vector<std::string> lines = {"a,b,log_p"};
    pmf.for_each_atom([&](std::int64_t a, std::int64_t b, double log_mass) {
      lines.push_back(std::to_string(a) + "," + std::to_string(b) + "," +
                      format_double(log_mass));
    });
    return write_lines(path, lines);
  };
  if (!args.pmf_p.empty()) {
    if (const int rc = dump_pmf(pair.first, args.pmf_p); rc != kExitOk) {
      return rc;
    }
  }
  if (!args.pmf_q.empty()) {
    if (const int rc = dump_pmf(pair.second, args.pmf_q); rc != kExitOk) {
      return rc;
    }
  }

  const TradeoffCurve curve = np_curve(pair.first, pair.second);
  std::vector<std::string> lines = {"alpha,beta"};
  for (const CurvePoint& pt : curve.breakpoints()) {
    lines.push_back(format_double(pt.alpha) + "," + format_double(pt.beta));
  }
  return write_lines(args.output, lines);
}

struct SimulateArgs {
  double epsilon0 = 0.0;
  std::int64_t n = 0;
  std::vector<double> alphas;
  std::optional<double> plugin_lambda;
  bool clt = false;
  std::int64_t samples = 100000;
  std::uint64_t seed = 1;
  std::string output;
};

int run_simulate(const SimulateArgs& args) {
  const ShuffleParams params(args.epsilon0, args.n);
  json result;
  result["epsilon0"] = args.epsilon0;
  result["n"] = args.n;
  result["samples"] = args.samples;
  result["seed"] = args.seed;

  if (!args.alphas.empty()) {
    json estimates = json::array();
    std::vector<std::string> csv_lines = {"alpha,beta_hat,stderr"};
    for (double alpha : args.alphas) {
      const McEstimate est =
          estimate_beta_at_alpha(params, alpha, args.samples, args.seed);
      estimates.push_back(json{{"alpha", alpha},
                               {"beta_hat", est.value},
                               {"stderr", est.stderror}});
      csv_lines.push_back(format_double(alpha) + "," +
                          format_double(est.value) + "," +
                          format_double(est.stderror));
    }
    result["beta_estimates"] = estimates;
    if (!args.output.empty()) {
      if (const int rc = write_lines(args.output, csv_lines); rc != kExitOk) {
        return rc;
      }
    }
  }
  if (args.plugin_lambda.has_value()) {
    const McEstimate est = estimate_renyi_plugin(params, *args.plugin_lambda,
                                                 args.samples, args.seed);
    result["renyi_plugin"] = json{{"lambda", *args.plugin_lambda},
                                  {"value", est.value},
                                  {"stderr", est.stderror}};
  }
  if (args.clt) {
    const CltReport report = clt_diagnostic(params, args.samples, args.seed);
    result["clt"] = json{{"max_abs_mean", report.max_abs_mean},
                         {"max_abs_cov_dev", report.max_abs_cov_dev},
                         {"skewness_distance", report.skewness_distance}};
  }
  std::cout << result.dump(2) << "\n";
  return kExitOk;
}

struct SgdArgs {
  double epsilon0 = 1.0;
  std::int64_t epochs = 10;
  std::int64_t blocks = 10;
  double clip = 1.0;
  double eta = 0.05;
  std::int64_t dim = 2;
  double lambda = 2.0;
  std::uint64_t seed = 0;
  std::uint64_t perm_seed = 1;
  std::int64_t examples = 1000;
  double separation = 3.0;
  std::string loss = "logistic";
  bool no_noise = false;
  std::string output;
  std::string loss_csv;
};

json report_to_json(const SgdReport& report) {
  json config{{"eta", report.config.eta},
              {"epochs", report.config.epochs},
              {"blocks", report.config.blocks},
              {"clip", report.config.clip},
              {"epsilon0", report.config.epsilon0},
              {"dim", report.config.dim},
              {"seed", report.config.seed},
              {"perm_seed", report.config.perm_seed},
              {"noise_free", report.config.noise_free}};
  json trace = json::array();
  for (const auto& [epoch, loss] : report.loss_trace) {
    trace.push_back(json{{"epoch", epoch}, {"loss", loss}});
  }
  json privacy{{"lambda", report.privacy.rdp.lambda},
               {"rdp_epsilon", report.privacy.rdp.epsilon},
               {"gdp_mu", report.privacy.gdp.mu}};
  return json{{"config", config},
              {"privacy", privacy},
              {"loss_trace", trace},
              {"final_params", report.final_params}};
}

int run_sgd(const SgdArgs& args) {
  SgdConfig cfg;
  cfg.eta = args.eta;
  cfg.epochs = args.epochs;
  cfg.blocks = args.blocks;
  cfg.clip = args.clip;
  cfg.epsilon0 = args.epsilon0;
  cfg.dim = args.dim;
  cfg.seed = args.seed;
  cfg.perm_seed = args.perm_seed;
  cfg.noise_free = args.no_noise;

  const auto data =
      make_two_blobs(args.examples, args.dim, args.separation, args.seed);
  SgdReport report;
  if (args.loss == "logistic") {
    report = run_shuffled_sgd(data, LogisticLoss{}, cfg, args.lambda);
  } else if (args.loss == "squared") {
    report = run_shuffled_sgd(data, SquaredErrorLoss{}, cfg, args.lambda);
  } else {
    std::cerr << "unknown loss: " << args.loss << "\n";
    return kExitArgs;
  }

  const json out = report_to_json(report);
  if (!args.loss_csv.empty()) {
    std::vector<std::string> lines = {"epoch,loss"};
    for (const auto& [epoch, loss] : report.loss_trace) {
      lines.push_back(std::to_string(epoch) + "," + format_double(loss));
    }
    if (const int rc = write_lines(args.loss_csv, lines); rc != kExitOk) {
      return rc;
    }
  }
  if (!args.output.empty()) {
    std::ofstream file(args.output);
    if (!file) {
      std::cerr << "cannot open output file: " << args.output << "\n";
      return kExitIo;
    }
    file << out.dump(2) << "\n";
  }
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

struct PlanArgs {
  std::optional<double> rdp_slope;
  std::optional<double> target_rdp;
  double lambda = 2.0;
  std::optional<double> target_gdp;
  std::int64_t epochs = 0;
  std::int64_t blocks = 0;
};

int run_plan(const PlanArgs& args) {
  PlanResult plan;
  json target;
  if (args.rdp_slope.has_value()) {
    // epsilon(lambda) = slope * lambda; the inversion is lambda-free.
    plan = plan_epsilon0(
        RdpPoint{args.lambda, *args.rdp_slope * args.lambda, 0.0, false},
        args.epochs, args.blocks);
    target = json{{"rdp_slope", *args.rdp_slope}, {"lambda", args.lambda}};
  } else if (args.target_rdp.has_value()) {
    plan = plan_epsilon0(RdpPoint{args.lambda, *args.target_rdp, 0.0, false},
                         args.epochs, args.blocks);
    target = json{{"rdp_epsilon", *args.target_rdp}, {"lambda", args.lambda}};
  } else if (args.target_gdp.has_value()) {
    plan = plan_epsilon0(GdpParam{*args.target_gdp}, args.epochs, args.blocks);
    target = json{{"gdp_mu", *args.target_gdp}};
  } else {
    std::cerr << "need one of --rdp-slope, --target-rdp, --target-gdp\n";
    return kExitArgs;
  }

  json out;
  out["target"] = target;
  out["epochs"] = args.epochs;
  out["blocks"] = args.blocks;
  out["feasible"] = plan.feasible;
  if (plan.feasible) {
    out["epsilon0"] = plan.epsilon0;
  } else {
    out["reason"] = "infeasible";
    out["min_achievable"] = plan.min_achievable;
  }
  std::cout << out.dump(2) << "\n";
  return plan.feasible ? kExitOk : kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Privacy accountant for the shuffle model of differential "
               "privacy"};
  app.require_subcommand(1);

  RdpArgs rdp_args;
  CLI::App* rdp = app.add_subcommand(
      "rdp", "Exact RDP of the shuffled epsilon0-LDP process");
  rdp->add_option("--epsilon0", rdp_args.epsilon0, "local budget (nats)")
      ->required();
  rdp->add_option("--n", rdp_args.n, "number of users")->required();
  rdp->add_option("--lambda", rdp_args.lambda, "Renyi order (> 1)")
      ->required();
  rdp->add_option("--tail-tol", rdp_args.tail_tol,
                  "truncation budget in (0, 1e-6]");
  rdp->add_option("--format", rdp_args.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  CompareArgs compare_args;
  CLI::App* compare = app.add_subcommand(
      "compare", "Sweep the exact accountant against the published bounds");
  compare->add_option("--epsilon0", compare_args.epsilon0_grid,
                      "grid: list a,b,c or start:stop:count");
  compare->add_option("--lambda", compare_args.lambda_grid,
                      "grid: list a,b,c or start:stop:count");
  compare->add_option("--n", compare_args.n, "number of users");
  compare->add_option("--methods", compare_args.methods,
                      "subset of: exact corollary2 theorem2_gdp girgis_upper "
                      "girgis_lower feldman_ref");
  compare->add_option("--preset", compare_args.preset,
                      "fig2 (epsilon0 sweep) or fig3 (lambda sweep)");
  compare->add_option("--tail-tol", compare_args.tail_tol,
                      "truncation budget for the exact method");
  compare->add_option("-o,--output", compare_args.output,
                      "CSV path (stdout if omitted)");

  TradeoffArgs tradeoff_args;
  CLI::App* tradeoff = app.add_subcommand(
      "tradeoff", "Export the exact trade-off curve as CSV");
  tradeoff->add_option("--epsilon0", tradeoff_args.epsilon0)->required();
  tradeoff->add_option("--n", tradeoff_args.n)->required();
  tradeoff->add_option("--tail-tol", tradeoff_args.tail_tol);
  tradeoff->add_option("-o,--output", tradeoff_args.output,
                       "curve CSV path (stdout if omitted)");
  tradeoff->add_option("--pmf-p", tradeoff_args.pmf_p,
                       "debug dump of the P-side PMF (a,b,log_p)");
  tradeoff->add_option("--pmf-q", tradeoff_args.pmf_q,
                       "debug dump of the Q-side PMF (a,b,log_p)");

  SimulateArgs simulate_args;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte Carlo validation of the exact machinery");
  simulate->add_option("--epsilon0", simulate_args.epsilon0)->required();
  simulate->add_option("--n", simulate_args.n)->required();
  simulate->add_option("--alpha", simulate_args.alphas,
                       "type-I errors for empirical beta estimates");
  simulate->add_option("--plugin-lambda", simulate_args.plugin_lambda,
                       "order for the plug-in Renyi estimate");
  simulate->add_flag("--clt", simulate_args.clt,
                     "report the multinomial CLT diagnostic");
  simulate->add_option("--samples", simulate_args.samples);
  simulate->add_option("--seed", simulate_args.seed);
  simulate->add_option("-o,--output", simulate_args.output,
                       "CSV path for beta estimates");

  SgdArgs sgd_args;
  CLI::App* sgd = app.add_subcommand(
      "sgd", "Train shuffled noisy SGD on synthetic two-blob data");
  sgd->add_option("--epsilon0", sgd_args.epsilon0)->required();
  sgd->add_option("--epochs", sgd_args.epochs);
  sgd->add_option("--blocks", sgd_args.blocks);
  sgd->add_option("--clip", sgd_args.clip);
  sgd->add_option("--eta", sgd_args.eta);
  sgd->add_option("--dim", sgd_args.dim);
  sgd->add_option("--lambda", sgd_args.lambda, "Renyi order for the report");
  sgd->add_option("--seed", sgd_args.seed, "noise stream seed");
  sgd->add_option("--perm-seed", sgd_args.perm_seed,
                  "block permutation stream seed");
  sgd->add_option("--examples", sgd_args.examples, "synthetic dataset size");
  sgd->add_option("--separation", sgd_args.separation, "blob separation");
  sgd->add_option("--loss", sgd_args.loss, "logistic or squared")
      ->check(CLI::IsMember({"logistic", "squared"}));
  sgd->add_flag("--no-noise", sgd_args.no_noise,
                "sanity mode: disable the Laplace noise (no privacy)");
  sgd->add_option("-o,--output", sgd_args.output, "report JSON path");
  sgd->add_option("--loss-csv", sgd_args.loss_csv, "loss trace CSV path");

  PlanArgs plan_args;
  CLI::App* plan = app.add_subcommand(
      "plan", "Invert the accountant: find epsilon0 for a target budget");
  plan->add_option("--rdp-slope", plan_args.rdp_slope,
                   "target epsilon(lambda) = slope * lambda");
  plan->add_option("--target-rdp", plan_args.target_rdp,
                   "target epsilon at --lambda");
  plan->add_option("--lambda", plan_args.lambda);
  plan->add_option("--target-gdp", plan_args.target_gdp, "target GDP mu");
  plan->add_option("--epochs", plan_args.epochs)->required();
  plan->add_option("--blocks", plan_args.blocks)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitArgs;
  }

  try {
    if (rdp->parsed()) return run_rdp(rdp_args);
    if (compare->parsed()) return run_compare(compare_args);
    if (tradeoff->parsed()) return run_tradeoff(tradeoff_args);
    if (simulate->parsed()) return run_simulate(simulate_args);
    if (sgd->parsed()) return run_sgd(sgd_args);
    if (plan->parsed()) return run_plan(plan_args);
  } catch (const std::domain_error& e) {
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return kExitArgs;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return kExitArgs;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitArgs;
}
