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

/// \file duality_solver.hpp
/// Joint beamforming and energy-trading solver.
///
/// The electricity bill is minimized in two nested loops.  The outer loop
/// searches the dual box of per-BS supply-balance multipliers mu (bracketed
/// by the sell and buy tariffs) and power-cap multipliers nu >= 0 with the
/// ellipsoid method.  For fixed (mu, nu) the inner problem is a weighted
/// minimum-power beamforming problem under SINR targets, solved exactly via
/// its virtual uplink: a monotone power iteration yields uplink powers, the
/// MMSE receive filters give the beam directions, and a linear system
/// scales them so every target holds with equality.

#pragma once

#include "gridbeam/model.hpp"

#include <Eigen/Dense>

namespace gridbeam {

/// Per-BS weights of the quadratic form priced by the dual point: base
/// station i's radiated power is weighted by mu_i / pa_efficiency + nu_i.
/// All weights must stay strictly positive, which the tariff floor
/// guarantees over the dual box.
struct WeightedNoise {
  Eigen::VectorXd bs_weight;
  int n_ant = 0;

  /// Weights expanded per antenna, the diagonal of the stacked form.
  Eigen::VectorXd antenna_diagonal() const;

  void validate() const;
};

WeightedNoise make_weighted_noise(const ClusterConfig& cluster,
                                  const Eigen::VectorXd& mu,
                                  const Eigen::VectorXd& nu);

/// Uniformly weighted form (weight 1 + nu_i per BS), used when the raw
/// radiated sum power is the quantity being priced.
WeightedNoise make_uniform_noise(const ClusterConfig& cluster,
                                 const Eigen::VectorXd& nu);

struct UplinkSolution {
  Eigen::VectorXd lambda;  ///< virtual-uplink powers
  long iterations = 0;
  bool converged = false;
  bool diverging = false;  ///< unbounded growth: SINR targets unreachable
};

/// One sweep of the uplink power-control map at the given iterate.
Eigen::VectorXd uplink_fixed_point_step(const ChannelSet& channels,
                                        const QosTargets& qos,
                                        const WeightedNoise& noise,
                                        const Eigen::VectorXd& lambda);

/// Iterate the map from lambda = 0 until the relative step falls below
/// rel_tol.  From zero the iterates are componentwise nondecreasing and
/// converge to the unique fixed point whenever the targets are reachable
/// at all; unbounded growth is flagged as diverging.
UplinkSolution uplink_fixed_point(const ChannelSet& channels,
                                  const QosTargets& qos,
                                  const WeightedNoise& noise,
                                  double rel_tol = 1e-10,
                                  long max_iter = 10000);

/// Unit-norm MMSE receive filters of the virtual uplink at the given
/// uplink powers; these are the optimal downlink beam directions.
Eigen::MatrixXcd mmse_receivers(const ChannelSet& channels,
                                const WeightedNoise& noise,
                                const Eigen::VectorXd& lambda);

/// Scale unit-norm directions so every terminal's SINR equals its target.
/// Throws std::runtime_error if the coupling system is singular or yields
/// negative powers, which means the directions cannot support the targets.
BeamformingSolution downlink_scaling(const ChannelSet& channels,
                                     const QosTargets& qos,
                                     const Eigen::MatrixXcd& directions);

/// Shared solver knobs.
struct SolveOptions {
  double inner_tol = 1e-10;    ///< uplink fixed-point relative tolerance
  long inner_max_iter = 10000;

  double ellipsoid_tol = 1e-9;  ///< dual localization target
  long ellipsoid_max_iter = 0;  ///< 0 picks the ellipsoid default

  /// The cap-multiplier box is [0, nu_cap_scale * price_cap / pa_efficiency].
  double nu_cap_scale = 10.0;

  /// Accept once |best primal - best dual| <= gap_tol * max(1, |dual|).
  double gap_tol = 1e-5;

  /// Run the feasibility pre-pass before the dual search.
  bool feasibility_precheck = true;

  /// Relative slack when deciding whether a dual iterate's beams respect
  /// the power caps and may serve as a primal candidate.
  double cap_slack = 1e-7;
};

/// Dual function value and supporting data at one (mu, nu).
struct DualEvaluation {
  double value = 0.0;
  Eigen::VectorXd subgradient_mu;  ///< per-BS supply imbalance
  Eigen::VectorXd subgradient_nu;  ///< per-BS cap slack violation
  BeamformingSolution beams;       ///< SINR-tight inner minimizer
  Eigen::VectorXd tx_power;        ///< its per-BS radiated power
  UplinkSolution uplink;
};

/// Evaluate the dual function at (mu, nu).  When the uplink iteration
/// fails, the returned uplink flags say so and value/beams are unusable.
DualEvaluation dual_oracle(const ProblemInstance& instance,
                           const Eigen::VectorXd& mu,
                           const Eigen::VectorXd& nu,
                           const SolveOptions& options = {});

/// Settle each BS's bill for the given beams: buy the supply shortfall,
/// sell the surplus.  Exactly one of buy[i], sell[i] is nonzero and
/// harvest + buy - sell matches consumption exactly.
EnergySchedule recover_schedule(const ClusterConfig& cluster,
                                const EnergyInputs& energy,
                                const BeamformingSolution& beams);

/// Full joint solve.  Never throws on infeasible or slow instances; the
/// outcome's status carries the verdict.
SolveOutcome solve_joint(const ProblemInstance& instance,
                         const SolveOptions& options = {});

}  // namespace gridbeam
