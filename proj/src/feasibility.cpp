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

#include "gridbeam/feasibility.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <utility>

#include "gridbeam/ellipsoid.hpp"
#include "gridbeam/zf_solver.hpp"

namespace gridbeam {

const char* to_string(FeasibilityVerdict verdict) {
  switch (verdict) {
    case FeasibilityVerdict::Feasible: return "feasible";
    case FeasibilityVerdict::Infeasible: return "infeasible";
    case FeasibilityVerdict::NotConverged: return "not-converged";
    case FeasibilityVerdict::StructurallyInfeasible:
      return "structurally-infeasible";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Upper edge of the cap-multiplier box.  Certificates usually fire long
/// before the search gets here; the bound only keeps the ellipsoid finite.
constexpr double kNuCap = 1e8;

struct AbortCheck {
  FeasibilityVerdict verdict;
  std::string detail;
};

/// SINR-tight beams and their per-BS powers at one multiplier point.
using CapInner = std::function<std::pair<BeamformingSolution, Eigen::VectorXd>(
    const Eigen::VectorXd& nu)>;

/// Dual search over the cap multipliers for min-sum-power beamforming,
/// shared by the general and ZF checks.
FeasibilityReport run_cap_search(const ProblemInstance& instance,
                                 const SolveOptions& options,
                                 const CapInner& inner) {
  const int n = instance.cluster.n_bs;
  const Eigen::VectorXd& p_max = instance.cluster.p_max;
  const double budget = p_max.sum();
  const Eigen::VectorXd cap_tol =
      options.cap_slack * p_max.array() + 1e-12;
  // A strictly positive worst-case slack ends the search immediately.
  const double comfortable_margin = 1e-6 * p_max.minCoeff();

  FeasibilityReport report;
  report.margin = -kInf;
  double best_valid_margin = -kInf;
  BeamformingSolution witness;
  bool has_witness = false;

  const SubgradientOracle oracle =
      [&](const Eigen::VectorXd& nu) -> SubgradientOracleResult {
    auto [beams, tx] = inner(nu);
    const double margin = (p_max - tx).minCoeff();
    report.margin = std::max(report.margin, margin);
    if (((tx - p_max - cap_tol).array() <= 0.0).all() &&
        margin > best_valid_margin) {
      best_valid_margin = margin;
      witness = std::move(beams);
      has_witness = true;
    }
    const double value =
        (nu.array() + 1.0).matrix().dot(tx) - nu.dot(p_max);
    if (value > budget * (1.0 + 1e-9) + 1e-12) {
      std::ostringstream oss;
      oss << "dual value " << value << " exceeds the total power budget "
          << budget << ", certifying cap infeasibility";
      throw AbortCheck{FeasibilityVerdict::Infeasible, oss.str()};
    }
    SubgradientOracleResult res;
    res.value = value;
    res.subgradient = tx - p_max;
    return res;
  };

  EllipsoidOptions eopt;
  eopt.tol = options.ellipsoid_tol * std::max(1.0, budget);
  eopt.max_iter = options.ellipsoid_max_iter;
  eopt.early_stop = [&](double, const Eigen::VectorXd&) {
    return best_valid_margin >= comfortable_margin;
  };

  MaximizeResult res;
  try {
    res = maximize(oracle, Eigen::VectorXd::Zero(n),
                   Eigen::VectorXd::Constant(n, kNuCap), eopt);
  } catch (const AbortCheck& abort) {
    report.verdict = abort.verdict;
    report.detail = abort.detail;
    return report;
  }
  report.iterations = res.iterations;

  if (has_witness) {
    report.verdict = FeasibilityVerdict::Feasible;
    report.witness = std::move(witness);
    std::ostringstream oss;
    oss << "witness with worst cap slack " << best_valid_margin;
    report.detail = oss.str();
  } else if ((res.best_point.array() >= 0.99 * kNuCap).any()) {
    report.verdict = FeasibilityVerdict::Infeasible;
    report.detail =
        "a cap multiplier ran to its bound without any cap-respecting beams";
  } else {
    report.verdict = FeasibilityVerdict::NotConverged;
    report.detail =
        "search ended without a witness or an infeasibility certificate";
  }
  return report;
}

}  // namespace

FeasibilityReport check_feasible(const ProblemInstance& instance,
                                 const SolveOptions& options) {
  instance.validate();
  const CapInner inner = [&](const Eigen::VectorXd& nu) {
    const WeightedNoise noise = make_uniform_noise(instance.cluster, nu);
    const UplinkSolution up =
        uplink_fixed_point(instance.channels, instance.qos, noise,
                           options.inner_tol, options.inner_max_iter);
    if (up.diverging) {
      throw AbortCheck{
          FeasibilityVerdict::Infeasible,
          "SINR targets are unreachable even without power caps"};
    }
    if (!up.converged) {
      throw AbortCheck{FeasibilityVerdict::NotConverged,
                       "uplink power iteration exceeded its budget"};
    }
    const Eigen::MatrixXcd dirs =
        mmse_receivers(instance.channels, noise, up.lambda);
    BeamformingSolution beams =
        downlink_scaling(instance.channels, instance.qos, dirs);
    Eigen::VectorXd tx = per_bs_tx_power(instance.cluster, beams);
    return std::make_pair(std::move(beams), std::move(tx));
  };
  return run_cap_search(instance, options, inner);
}

FeasibilityReport check_zf_feasible(const ProblemInstance& instance,
                                    const SolveOptions& options) {
  instance.validate();
  const int dim = instance.cluster.stacked_dim();
  const int k_mt = instance.cluster.n_mt;
  if (k_mt > dim) {
    FeasibilityReport report;
    report.verdict = FeasibilityVerdict::StructurallyInfeasible;
    report.margin = -kInf;
    std::ostringstream oss;
    oss << "n_mt (" << k_mt << ") exceeds the stacked antenna dimension ("
        << dim << "): no zero-forcing beams exist";
    report.detail = oss.str();
    return report;
  }

  std::vector<NullSpaceBasis> bases;
  try {
    bases = all_null_space_bases(instance.channels);
  } catch (const std::runtime_error& err) {
    FeasibilityReport report;
    report.verdict = FeasibilityVerdict::StructurallyInfeasible;
    report.margin = -kInf;
    report.detail = err.what();
    return report;
  }

  const CapInner inner = [&](const Eigen::VectorXd& nu) {
    const WeightedNoise noise = make_uniform_noise(instance.cluster, nu);
    BeamformingSolution beams =
        zf_closed_form(instance.channels, instance.qos, noise, bases);
    Eigen::VectorXd tx = per_bs_tx_power(instance.cluster, beams);
    return std::make_pair(std::move(beams), std::move(tx));
  };
  return run_cap_search(instance, options, inner);
}

}  // namespace gridbeam
