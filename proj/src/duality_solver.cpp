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

#include "gridbeam/duality_solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dual_search.hpp"
#include "gridbeam/feasibility.hpp"

namespace gridbeam {

namespace {

/// Uplink covariance Z = diag(noise) + sum_k lambda_k h_k h_k^H.
/// Only the lower triangle is filled; consumers factorize with LLT,
/// which reads exactly that part.
Eigen::MatrixXcd uplink_covariance(const ChannelSet& channels,
                                   const WeightedNoise& noise,
                                   const Eigen::VectorXd& lambda) {
  const int dim = static_cast<int>(channels.h.rows());
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < channels.n_mt(); ++k) {
    if (lambda[k] != 0.0) {
      z.selfadjointView<Eigen::Lower>().rankUpdate(channels.h.col(k),
                                                   lambda[k]);
    }
  }
  z.diagonal() += noise.antenna_diagonal().cast<Complex>();
  return z;
}

Eigen::LLT<Eigen::MatrixXcd> factorize(const ChannelSet& channels,
                                       const WeightedNoise& noise,
                                       const Eigen::VectorXd& lambda) {
  Eigen::LLT<Eigen::MatrixXcd> llt(uplink_covariance(channels, noise, lambda));
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error(
        "uplink covariance factorization failed; weights must be positive");
  }
  return llt;
}

}  // namespace

Eigen::VectorXd WeightedNoise::antenna_diagonal() const {
  Eigen::VectorXd diag(bs_weight.size() * n_ant);
  for (int i = 0; i < bs_weight.size(); ++i) {
    diag.segment(i * n_ant, n_ant).setConstant(bs_weight[i]);
  }
  return diag;
}

void WeightedNoise::validate() const {
  if (n_ant < 1) throw std::invalid_argument("WeightedNoise: n_ant must be >= 1");
  if (bs_weight.size() < 1 || !bs_weight.allFinite() ||
      (bs_weight.array() <= 0.0).any()) {
    throw std::invalid_argument(
        "WeightedNoise: weights must be finite and strictly positive");
  }
}

WeightedNoise make_weighted_noise(const ClusterConfig& cluster,
                                  const Eigen::VectorXd& mu,
                                  const Eigen::VectorXd& nu) {
  if (mu.size() != cluster.n_bs || nu.size() != cluster.n_bs) {
    throw std::invalid_argument("make_weighted_noise: multiplier length mismatch");
  }
  WeightedNoise noise;
  noise.n_ant = cluster.n_ant;
  noise.bs_weight = mu / cluster.pa_efficiency + nu;
  noise.validate();
  return noise;
}

WeightedNoise make_uniform_noise(const ClusterConfig& cluster,
                                 const Eigen::VectorXd& nu) {
  if (nu.size() != cluster.n_bs) {
    throw std::invalid_argument("make_uniform_noise: multiplier length mismatch");
  }
  WeightedNoise noise;
  noise.n_ant = cluster.n_ant;
  noise.bs_weight = nu.array() + 1.0;
  noise.validate();
  return noise;
}

Eigen::VectorXd uplink_fixed_point_step(const ChannelSet& channels,
                                        const QosTargets& qos,
                                        const WeightedNoise& noise,
                                        const Eigen::VectorXd& lambda) {
  const auto llt = factorize(channels, noise, lambda);
  const Eigen::MatrixXcd x = llt.solve(channels.h);
  const int k_mt = channels.n_mt();
  Eigen::VectorXd next(k_mt);
  for (int k = 0; k < k_mt; ++k) {
    const double q = std::real(channels.h.col(k).dot(x.col(k)));
    if (!(q > 0.0)) {
      throw std::runtime_error(
          "uplink step: a terminal's channel is numerically zero");
    }
    next[k] = 1.0 / ((1.0 + 1.0 / qos.sinr_min[k]) * q);
  }
  return next;
}

UplinkSolution uplink_fixed_point(const ChannelSet& channels,
                                  const QosTargets& qos,
                                  const WeightedNoise& noise, double rel_tol,
                                  long max_iter) {
  noise.validate();
  UplinkSolution sol;
  sol.lambda = Eigen::VectorXd::Zero(channels.n_mt());
  double divergence_cap = -1.0;
  for (long it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd next =
        uplink_fixed_point_step(channels, qos, noise, sol.lambda);
    sol.iterations = it + 1;
    if (!next.allFinite()) {
      sol.diverging = true;
      return sol;
    }
    // From lambda = 0 the iterates grow monotonically; a cap far above
    // the first iterate's scale separates slow convergence from the
    // unbounded growth of an unreachable SINR profile.
    if (divergence_cap < 0.0) divergence_cap = 1e12 * (1.0 + next.maxCoeff());
    double step = 0.0;
    for (int k = 0; k < next.size(); ++k) {
      step = std::max(step, std::abs(next[k] - sol.lambda[k]) /
                                std::max(next[k], 1e-300));
    }
    sol.lambda = next;
    if (next.maxCoeff() > divergence_cap) {
      sol.diverging = true;
      return sol;
    }
    if (step <= rel_tol) {
      sol.converged = true;
      return sol;
    }
  }
  return sol;
}

Eigen::MatrixXcd mmse_receivers(const ChannelSet& channels,
                                const WeightedNoise& noise,
                                const Eigen::VectorXd& lambda) {
  const auto llt = factorize(channels, noise, lambda);
  Eigen::MatrixXcd dirs = llt.solve(channels.h);
  for (int k = 0; k < dirs.cols(); ++k) {
    const double nrm = dirs.col(k).norm();
    if (!(nrm > 0.0)) {
      throw std::runtime_error("mmse_receivers: zero filter direction");
    }
    dirs.col(k) /= nrm;
  }
  return dirs;
}

BeamformingSolution downlink_scaling(const ChannelSet& channels,
                                     const QosTargets& qos,
                                     const Eigen::MatrixXcd& directions) {
  const int k_mt = channels.n_mt();
  const Eigen::MatrixXcd gains = channels.h.adjoint() * directions;
  Eigen::MatrixXd coupling = Eigen::MatrixXd::Zero(k_mt, k_mt);
  Eigen::VectorXd rhs(k_mt);
  for (int k = 0; k < k_mt; ++k) {
    const double own = std::norm(gains(k, k));
    if (!(own > 0.0)) {
      throw std::runtime_error(
          "downlink_scaling: a direction is orthogonal to its own channel");
    }
    rhs[k] = qos.sinr_min[k] * qos.noise_power[k] / own;
    for (int l = 0; l < k_mt; ++l) {
      if (l != k) {
        coupling(k, l) = qos.sinr_min[k] * std::norm(gains(k, l)) / own;
      }
    }
  }
  const Eigen::MatrixXd system =
      Eigen::MatrixXd::Identity(k_mt, k_mt) - coupling;
  Eigen::VectorXd p = Eigen::PartialPivLU<Eigen::MatrixXd>(system).solve(rhs);
  const double residual = (system * p - rhs).norm();
  if (!p.allFinite() || residual > 1e-8 * std::max(1.0, rhs.norm())) {
    throw std::runtime_error(
        "downlink_scaling: power coupling system is singular; the "
        "directions cannot support the SINR targets");
  }
  const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
  for (int k = 0; k < k_mt; ++k) {
    if (p[k] < -1e-9 * scale) {
      throw std::runtime_error(
          "downlink_scaling: negative power in the coupling solution");
    }
    p[k] = std::max(p[k], 0.0);
  }
  BeamformingSolution beams;
  beams.w = directions * p.cwiseSqrt().asDiagonal();
  return beams;
}

DualEvaluation dual_oracle(const ProblemInstance& instance,
                           const Eigen::VectorXd& mu,
                           const Eigen::VectorXd& nu,
                           const SolveOptions& options) {
  const ClusterConfig& cluster = instance.cluster;
  DualEvaluation ev;
  const WeightedNoise noise = make_weighted_noise(cluster, mu, nu);
  ev.uplink = uplink_fixed_point(instance.channels, instance.qos, noise,
                                 options.inner_tol, options.inner_max_iter);
  if (!ev.uplink.converged) {
    ev.value = std::numeric_limits<double>::quiet_NaN();
    return ev;
  }
  const Eigen::MatrixXcd dirs =
      mmse_receivers(instance.channels, noise, ev.uplink.lambda);
  ev.beams = downlink_scaling(instance.channels, instance.qos, dirs);
  ev.tx_power = per_bs_tx_power(cluster, ev.beams);

  ev.value = noise.bs_weight.dot(ev.tx_power) +
             mu.dot(cluster.p_circuit - instance.energy.harvest) -
             nu.dot(cluster.p_max);
  ev.subgradient_mu = ev.tx_power / cluster.pa_efficiency + cluster.p_circuit -
                      instance.energy.harvest;
  ev.subgradient_nu = ev.tx_power - cluster.p_max;
  return ev;
}

EnergySchedule recover_schedule(const ClusterConfig& cluster,
                                const EnergyInputs& energy,
                                const BeamformingSolution& beams) {
  const Eigen::VectorXd draw = consumption(cluster, beams);
  EnergySchedule sched;
  sched.buy = (draw - energy.harvest).cwiseMax(0.0);
  sched.sell = (energy.harvest - draw).cwiseMax(0.0);
  return sched;
}

SolveOutcome solve_joint(const ProblemInstance& instance,
                         const SolveOptions& options) {
  instance.validate();
  if (options.feasibility_precheck) {
    const FeasibilityReport feas = check_feasible(instance, options);
    if (feas.verdict != FeasibilityVerdict::Feasible) {
      SolveOutcome out;
      out.status = feas.verdict == FeasibilityVerdict::Infeasible
                       ? SolveStatus::Infeasible
                       : SolveStatus::NotConverged;
      out.detail = "feasibility pre-pass: " + feas.detail;
      return out;
    }
  }

  const detail::InnerSolver inner =
      [&](const Eigen::VectorXd& mu,
          const Eigen::VectorXd& nu) -> detail::InnerEval {
    const DualEvaluation ev = dual_oracle(instance, mu, nu, options);
    if (!ev.uplink.converged) {
      if (ev.uplink.diverging) {
        throw detail::AbortSolve{
            SolveStatus::Infeasible,
            "uplink power iteration diverged: SINR targets unreachable"};
      }
      throw detail::AbortSolve{
          SolveStatus::NotConverged,
          "uplink power iteration exceeded its iteration budget"};
    }
    return {ev.value, ev.subgradient_mu, ev.subgradient_nu, ev.beams,
            ev.tx_power};
  };
  return detail::run_dual_search(instance, options, inner);
}

}  // namespace gridbeam
