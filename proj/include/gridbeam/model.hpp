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

/// \file model.hpp
/// Problem data for one scheduling block of a cooperatively beamforming
/// base-station cluster that trades energy with the grid, plus the
/// evaluators shared by every solver and test.

#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>

namespace gridbeam {

using Complex = std::complex<double>;

/// Cluster geometry and hardware limits.
struct ClusterConfig {
  int n_bs = 0;   ///< cooperating base stations
  int n_ant = 0;  ///< antennas per base station
  int n_mt = 0;   ///< mobile terminals served jointly

  /// Power-amplifier drain efficiency in (0, 1]: radiating P watts
  /// draws P / pa_efficiency from the supply.
  double pa_efficiency = 1.0;

  Eigen::VectorXd p_max;      ///< per-BS radiated power cap [W]
  Eigen::VectorXd p_circuit;  ///< per-BS constant circuit draw [W]

  /// Length of the stacked cluster-wide beamforming vectors.
  int stacked_dim() const { return n_bs * n_ant; }

  void validate() const;
};

/// Grid tariffs and renewable harvests for one block.
///
/// Prices satisfy 0 < price_floor <= price_sell[i] <= price_buy[i]
/// <= price_cap for every base station; a unit of energy is never
/// worth more sold than bought.
struct EnergyInputs {
  Eigen::VectorXd harvest;     ///< locally harvested energy E_i [W]
  Eigen::VectorXd price_buy;   ///< per-BS purchase tariff
  Eigen::VectorXd price_sell;  ///< per-BS feed-in tariff
  double price_floor = 0.0;    ///< market lower bound on tariffs
  double price_cap = 0.0;      ///< market upper bound on tariffs

  void validate(int n_bs) const;
};

/// Stacked downlink channels, one column per terminal.
///
/// Column k holds terminal k's channel from every BS antenna; rows
/// [i*n_ant, (i+1)*n_ant) belong to base station i.
struct ChannelSet {
  Eigen::MatrixXcd h;  ///< (n_bs * n_ant) x n_mt
  int n_ant = 0;       ///< antennas per BS, fixes the block layout

  int n_bs() const { return n_ant > 0 ? static_cast<int>(h.rows()) / n_ant : 0; }
  int n_mt() const { return static_cast<int>(h.cols()); }

  void validate(const ClusterConfig& cluster) const;
};

/// Per-terminal service requirements.
struct QosTargets {
  Eigen::VectorXd sinr_min;     ///< SINR targets, linear scale
  Eigen::VectorXd noise_power;  ///< receiver noise power [W]

  void validate(int n_mt) const;
};

/// Everything a solver needs for one block.
struct ProblemInstance {
  ClusterConfig cluster;
  EnergyInputs energy;
  ChannelSet channels;
  QosTargets qos;

  void validate() const;
};

/// Transmit beamformers, one column per terminal, stacked across BSs.
struct BeamformingSolution {
  Eigen::MatrixXcd w;  ///< (n_bs * n_ant) x n_mt
};

/// Per-BS energy bought from and sold to the grid [W].
///
/// At most one of buy[i], sell[i] is nonzero and both are nonnegative.
struct EnergySchedule {
  Eigen::VectorXd buy;
  Eigen::VectorXd sell;
};

enum class SolveStatus {
  Converged,     ///< certified by a small duality gap
  NotConverged,  ///< iteration budget exhausted without a certificate
  Infeasible,    ///< QoS targets unreachable under the power caps
};

const char* to_string(SolveStatus status);

/// Result of a full joint beamforming / energy-trading solve.
struct SolveOutcome {
  SolveStatus status = SolveStatus::NotConverged;
  bool converged = false;  ///< status == Converged

  BeamformingSolution beams;
  EnergySchedule schedule;
  double cost = 0.0;  ///< net electricity bill at (beams, schedule)

  Eigen::VectorXd dual_mu;  ///< supply-balance multipliers
  Eigen::VectorXd dual_nu;  ///< power-cap multipliers
  double dual_value = 0.0;  ///< best certified lower bound on the cost
  double duality_gap = 0.0; ///< cost - dual_value (>= 0 up to solve noise)

  long iterations = 0;    ///< outer dual-update iterations
  long oracle_calls = 0;  ///< inner minimum-power evaluations
  std::string detail;     ///< one-line diagnostic for logs
};

/// Radiated power per base station: P_i = sum_k ||w_k restricted to BS i||^2.
Eigen::VectorXd per_bs_tx_power(const ClusterConfig& cluster,
                                const BeamformingSolution& beams);

/// Supply-side draw per base station: P_i / pa_efficiency + p_circuit[i].
Eigen::VectorXd consumption(const ClusterConfig& cluster,
                            const BeamformingSolution& beams);

/// Received SINR per terminal under the given beams.
Eigen::VectorXd sinr(const ChannelSet& channels, const QosTargets& qos,
                     const BeamformingSolution& beams);

/// Net electricity bill: sum_i price_buy[i] * buy[i] - price_sell[i] * sell[i].
double total_cost(const EnergyInputs& energy, const EnergySchedule& schedule);

}  // namespace gridbeam
