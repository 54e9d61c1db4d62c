/*
 * Copyright 2026 the gridbeam authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "gridbeam/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "gridbeam/baselines.hpp"
#include "gridbeam/config.hpp"
#include "gridbeam/duality_solver.hpp"
#include "gridbeam/feasibility.hpp"
#include "gridbeam/oracle.hpp"
#include "gridbeam/scenario.hpp"
#include "gridbeam/zf_solver.hpp"

namespace gridbeam {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void apply_solver_overrides(const CliOverrides& overrides, AppConfig* config) {
  if (overrides.tol) config->solver.ellipsoid_tol = *overrides.tol;
  if (overrides.max_iter) config->solver.ellipsoid_max_iter = *overrides.max_iter;
}

int status_exit_code(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return kExitOk;
    case SolveStatus::Infeasible: return kExitInfeasible;
    case SolveStatus::NotConverged: return kExitNotConverged;
  }
  return kExitUsage;
}

SolveOutcome dispatch(Scheme scheme, const ProblemInstance& instance,
                      const SolveOptions& options) {
  switch (scheme) {
    case Scheme::Optimal: return solve_joint(instance, options);
    case Scheme::Zf: return solve_zf(instance, options);
    case Scheme::ConvOptimal: return conventional_optimal(instance, options);
    case Scheme::ConvZf: return conventional_zf(instance, options);
  }
  throw std::logic_error("unhandled scheme");
}

}  // namespace

int cmd_solve(const std::string& config_path, const std::string& scheme_name,
              const CliOverrides& overrides, std::ostream& out,
              std::ostream& err) {
  AppConfig config;
  Scheme scheme;
  ProblemInstance instance;
  try {
    config = parse_config_file(config_path);
    apply_solver_overrides(overrides, &config);
    if (overrides.seed) config.channel_seed = *overrides.seed;
    scheme = scheme_from_string(scheme_name);
    instance = make_instance(config);
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitUsage;
  }

  const SolveOutcome outcome = dispatch(scheme, instance, config.solver);
  out << "scheme: " << to_string(scheme) << "\n";
  out << "status: " << to_string(outcome.status);
  if (!outcome.detail.empty()) out << " (" << outcome.detail << ")";
  out << "\n";
  if (outcome.status == SolveStatus::Converged) {
    out << "cost: " << num(outcome.cost) << "\n";
    out << "dual_value: " << num(outcome.dual_value) << "\n";
    out << "duality_gap: " << num(outcome.duality_gap) << "\n";
    out << "iterations: " << outcome.iterations
        << " oracle_calls: " << outcome.oracle_calls << "\n";
    const Eigen::VectorXd tx = per_bs_tx_power(instance.cluster, outcome.beams);
    const Eigen::VectorXd draw = consumption(instance.cluster, outcome.beams);
    out << "bs tx_power consumption harvest buy sell mu nu\n";
    for (int i = 0; i < instance.cluster.n_bs; ++i) {
      out << i << ' ' << num(tx[i]) << ' ' << num(draw[i]) << ' '
          << num(instance.energy.harvest[i]) << ' '
          << num(outcome.schedule.buy[i]) << ' '
          << num(outcome.schedule.sell[i]) << ' ' << num(outcome.dual_mu[i])
          << ' ' << num(outcome.dual_nu[i]) << "\n";
    }
    const Eigen::VectorXd achieved =
        sinr(instance.channels, instance.qos, outcome.beams);
    out << "mt sinr target\n";
    for (int k = 0; k < instance.cluster.n_mt; ++k) {
      out << k << ' ' << num(achieved[k]) << ' '
          << num(instance.qos.sinr_min[k]) << "\n";
    }
  } else {
    err << "error: solve " << to_string(outcome.status);
    if (!outcome.detail.empty()) err << ": " << outcome.detail;
    err << "\n";
  }
  return status_exit_code(outcome.status);
}

int cmd_feasibility(const std::string& config_path,
                    const CliOverrides& overrides, std::ostream& out,
                    std::ostream& err) {
  AppConfig config;
  ProblemInstance instance;
  try {
    config = parse_config_file(config_path);
    apply_solver_overrides(overrides, &config);
    if (overrides.seed) config.channel_seed = *overrides.seed;
    instance = make_instance(config);
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitUsage;
  }

  const FeasibilityReport general = check_feasible(instance, config.solver);
  const FeasibilityReport zf = check_zf_feasible(instance, config.solver);
  out << "general: " << to_string(general.verdict) << " margin "
      << num(general.margin) << " (" << general.detail << ")\n";
  out << "zero-forcing: " << to_string(zf.verdict) << " margin "
      << num(zf.margin) << " (" << zf.detail << ")\n";

  switch (general.verdict) {
    case FeasibilityVerdict::Feasible: return kExitOk;
    case FeasibilityVerdict::NotConverged: return kExitNotConverged;
    default: return kExitInfeasible;
  }
}

int cmd_verify(const std::string& config_path, const CliOverrides& overrides,
               std::ostream& out, std::ostream& err) {
  AppConfig config;
  ProblemInstance instance;
  try {
    config = parse_config_file(config_path);
    apply_solver_overrides(overrides, &config);
    if (overrides.seed) config.channel_seed = *overrides.seed;
    instance = make_instance(config);
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitUsage;
  }

  if (instance.cluster.n_mt != 1) {
    err << "error: verify needs a single-terminal instance (n_mt == 1), got "
        << instance.cluster.n_mt << "\n";
    return kExitUsage;
  }

  bool all_ok = true;
  const auto report = [&](const std::string& name, double delta,
                          double bound) {
    const bool ok = delta <= bound;
    all_ok = all_ok && ok;
    out << (ok ? "ok  " : "FAIL") << " " << name << ": delta " << num(delta)
        << " bound " << num(bound) << "\n";
  };

  // Probe the inner machinery at a dual point strictly inside the box.
  const int n = instance.cluster.n_bs;
  const Eigen::VectorXd mu =
      0.5 * (instance.energy.price_sell + instance.energy.price_buy);
  const Eigen::VectorXd nu = Eigen::VectorXd::Constant(n, 0.05);
  const SingleUserSolution reference =
      single_user_closed_forms(instance, mu, nu);
  const DualEvaluation evaluated = dual_oracle(instance, mu, nu, config.solver);
  if (!evaluated.uplink.converged) {
    err << "error: inner power iteration did not converge at the probe point\n";
    return kExitNotConverged;
  }
  report("uplink power vs closed form",
         std::abs(evaluated.uplink.lambda[0] - reference.lambda) /
             std::max(1.0, std::abs(reference.lambda)),
         1e-8);
  report("dual value vs closed form",
         std::abs(evaluated.value - reference.dual_value) /
             std::max(1.0, std::abs(reference.dual_value)),
         1e-8);
  report("per-BS power vs closed form",
         (evaluated.tx_power - reference.tx_power).cwiseAbs().maxCoeff(), 1e-8);

  const auto dual_value = [&](const Eigen::VectorXd& z) {
    return dual_oracle(instance, z.head(n), z.tail(n), config.solver).value;
  };
  Eigen::VectorXd probe(2 * n);
  probe << mu, nu;
  Eigen::VectorXd analytic(2 * n);
  analytic << evaluated.subgradient_mu, evaluated.subgradient_nu;
  report("dual subgradient vs central differences",
         finite_diff_subgradient_check(dual_value, analytic, probe, 1e-5),
         1e-4);

  const SolveOutcome solved = solve_joint(instance, config.solver);
  if (solved.status != SolveStatus::Converged) {
    err << "error: joint solve " << to_string(solved.status) << ": "
        << solved.detail << "\n";
    return status_exit_code(solved.status);
  }
  if (instance.cluster.n_bs == 2 && instance.cluster.n_ant == 1) {
    const GridSearchResult grid = grid_search_two_bs(instance, 1e-3);
    if (!grid.feasible) {
      err << "error: grid scan found no feasible point\n";
      return kExitInfeasible;
    }
    report("joint cost vs grid scan",
           std::abs(solved.cost - grid.cost) / std::max(1.0, std::abs(grid.cost)),
           5e-3);
    const Eigen::VectorXd tx = per_bs_tx_power(instance.cluster, solved.beams);
    report("per-BS powers vs grid scan",
           (tx - grid.tx_power).cwiseAbs().maxCoeff(), 5e-3);
  } else {
    out << "note: grid scan skipped (needs n_bs == 2, n_ant == 1)\n";
  }
  out << (all_ok ? "verification passed" : "verification FAILED") << "\n";
  return all_ok ? kExitOk : kExitUsage;
}

int cmd_simulate(const std::string& config_path,
                 const std::string& renewables_csv, const std::string& out_dir,
                 const CliOverrides& overrides, std::ostream& out,
                 std::ostream& err) {
  AppConfig config;
  ScenarioSpec spec;
  RenewableSeries series;
  try {
    config = parse_config_file(config_path);
    apply_solver_overrides(overrides, &config);
    if (overrides.seed) config.simulation.seed = *overrides.seed;
    spec = make_scenario(config);
    if (renewables_csv.empty()) {
      series = synthetic_renewables(
          config.cluster.n_bs, config.simulation.blocks,
          mix_seed(config.simulation.seed, 0x5EED), config.simulation.renewable_scale);
    } else {
      series = load_renewable_csv(renewables_csv);
    }
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitUsage;
  }

  TimelineOptions options;
  options.schemes = config.simulation.schemes;
  options.channel_mode = config.simulation.channel_mode;
  options.policy = config.simulation.policy;
  options.seed = config.simulation.seed;
  options.solve = config.solver;

  TimelineReport report;
  try {
    report = run_timeline(spec, series, options);
  } catch (const std::invalid_argument& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const std::runtime_error& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitInfeasible;
  }

  try {
    std::filesystem::create_directories(out_dir);
    std::ofstream report_file(out_dir + "/report.csv");
    std::ofstream summary_file(out_dir + "/summary.csv");
    if (!report_file || !summary_file) {
      throw std::runtime_error("cannot write into '" + out_dir + "'");
    }
    write_report_csv(report, report_file);
    write_summary_csv(report, summary_file);
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitUsage;
  }

  out << "blocks: " << series.n_blocks() << " comparable: "
      << report.comparable_blocks << " dropped: " << report.dropped_blocks.size()
      << "\n";
  out << "scheme mean_cost blocks_feasible\n";
  for (const auto& [scheme, mean] : report.mean_cost) {
    out << to_string(scheme) << ' ' << num(mean) << ' '
        << report.blocks_solved.at(scheme) << "\n";
  }
  if (report.comparable_blocks == 0) {
    err << "error: no block was solvable by every requested scheme\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Joint downlink beamforming and two-way energy trading for a "
               "cooperating base-station cluster"};
  app.require_subcommand(1);

  std::string config_path;
  std::string scheme = "optimal";
  std::string renewables;
  std::string out_dir = ".";
  CliOverrides overrides;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-c,--config", config_path, "JSON config file")
        ->required();
    cmd->add_option("--seed", overrides.seed, "override the random seed");
    cmd->add_option("--tol", overrides.tol,
                    "override the dual localization tolerance");
    cmd->add_option("--max-iter", overrides.max_iter,
                    "override the dual iteration budget");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve a single block");
  add_common(solve);
  solve->add_option("--scheme", scheme,
                    "optimal|zf|conv-optimal|conv-zf (default optimal)");

  CLI::App* simulate =
      app.add_subcommand("simulate", "run a multi-block timeline");
  add_common(simulate);
  simulate->add_option("--renewables", renewables,
                       "renewable series CSV (default: synthetic)");
  simulate->add_option("--out-dir", out_dir,
                       "directory for report.csv and summary.csv");

  CLI::App* verify = app.add_subcommand(
      "verify", "cross-check the solver against reference computations");
  add_common(verify);

  CLI::App* feasibility =
      app.add_subcommand("feasibility", "report per-family feasibility");
  add_common(feasibility);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Collapse the library's many parse-error codes onto the stable
    // contract: 0 for --help and friends, 1 for every usage error.
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve->parsed()) {
      return cmd_solve(config_path, scheme, overrides, std::cout, std::cerr);
    }
    if (simulate->parsed()) {
      return cmd_simulate(config_path, renewables, out_dir, overrides,
                          std::cout, std::cerr);
    }
    if (verify->parsed()) {
      return cmd_verify(config_path, overrides, std::cout, std::cerr);
    }
    return cmd_feasibility(config_path, overrides, std::cout, std::cerr);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace gridbeam
