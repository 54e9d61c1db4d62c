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

#include "gridbeam/model.hpp"

#include <sstream>
#include <stdexcept>

namespace gridbeam {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  std::ostringstream oss;
  oss << where << ": " << what;
  throw std::invalid_argument(oss.str());
}

void require_size(const std::string& where, const std::string& name,
                  const Eigen::VectorXd& v, int n) {
  if (v.size() != n) {
    std::ostringstream oss;
    oss << name << " has length " << v.size() << ", expected " << n;
    fail(where, oss.str());
  }
}

void require_finite(const std::string& where, const std::string& name,
                    const Eigen::VectorXd& v) {
  if (!v.allFinite()) fail(where, name + " contains a non-finite entry");
}

}  // namespace

void ClusterConfig::validate() const {
  if (n_bs < 1) fail("ClusterConfig", "n_bs must be >= 1");
  if (n_ant < 1) fail("ClusterConfig", "n_ant must be >= 1");
  if (n_mt < 1) fail("ClusterConfig", "n_mt must be >= 1");
  if (!(pa_efficiency > 0.0) || pa_efficiency > 1.0) {
    std::ostringstream oss;
    oss << "pa_efficiency must lie in (0, 1], got " << pa_efficiency;
    fail("ClusterConfig", oss.str());
  }
  require_size("ClusterConfig", "p_max", p_max, n_bs);
  require_size("ClusterConfig", "p_circuit", p_circuit, n_bs);
  require_finite("ClusterConfig", "p_max", p_max);
  require_finite("ClusterConfig", "p_circuit", p_circuit);
  if ((p_max.array() <= 0.0).any()) fail("ClusterConfig", "p_max must be positive");
  if ((p_circuit.array() < 0.0).any()) fail("ClusterConfig", "p_circuit must be nonnegative");
}

void EnergyInputs::validate(int n_bs) const {
  require_size("EnergyInputs", "harvest", harvest, n_bs);
  require_size("EnergyInputs", "price_buy", price_buy, n_bs);
  require_size("EnergyInputs", "price_sell", price_sell, n_bs);
  require_finite("EnergyInputs", "harvest", harvest);
  require_finite("EnergyInputs", "price_buy", price_buy);
  require_finite("EnergyInputs", "price_sell", price_sell);
  if ((harvest.array() < 0.0).any()) fail("EnergyInputs", "harvest must be nonnegative");
  if (!(price_floor > 0.0)) fail("EnergyInputs", "price_floor must be positive");
  if (price_cap < price_floor) fail("EnergyInputs", "price_cap must be >= price_floor");
  for (int i = 0; i < n_bs; ++i) {
    if (price_sell[i] < price_floor || price_buy[i] > price_cap ||
        price_sell[i] > price_buy[i]) {
      std::ostringstream oss;
      oss << "tariffs at BS " << i << " must satisfy price_floor <= sell <= buy"
          << " <= price_cap, got sell=" << price_sell[i] << " buy=" << price_buy[i]
          << " floor=" << price_floor << " cap=" << price_cap;
      fail("EnergyInputs", oss.str());
    }
  }
}

void ChannelSet::validate(const ClusterConfig& cluster) const {
  if (n_ant != cluster.n_ant) fail("ChannelSet", "n_ant disagrees with the cluster");
  if (h.rows() != cluster.stacked_dim()) {
    std::ostringstream oss;
    oss << "h has " << h.rows() << " rows, expected " << cluster.stacked_dim();
    fail("ChannelSet", oss.str());
  }
  if (h.cols() != cluster.n_mt) {
    std::ostringstream oss;
    oss << "h has " << h.cols() << " columns, expected " << cluster.n_mt;
    fail("ChannelSet", oss.str());
  }
  if (!h.allFinite()) fail("ChannelSet", "h contains a non-finite entry");
}

void QosTargets::validate(int n_mt) const {
  require_size("QosTargets", "sinr_min", sinr_min, n_mt);
  require_size("QosTargets", "noise_power", noise_power, n_mt);
  require_finite("QosTargets", "sinr_min", sinr_min);
  require_finite("QosTargets", "noise_power", noise_power);
  if ((sinr_min.array() <= 0.0).any()) fail("QosTargets", "sinr_min must be positive");
  if ((noise_power.array() <= 0.0).any()) fail("QosTargets", "noise_power must be positive");
}

void ProblemInstance::validate() const {
  cluster.validate();
  energy.validate(cluster.n_bs);
  channels.validate(cluster);
  qos.validate(cluster.n_mt);
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::NotConverged: return "not-converged";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

Eigen::VectorXd per_bs_tx_power(const ClusterConfig& cluster,
                                const BeamformingSolution& beams) {
  Eigen::VectorXd p(cluster.n_bs);
  for (int i = 0; i < cluster.n_bs; ++i) {
    p[i] = beams.w.middleRows(i * cluster.n_ant, cluster.n_ant).squaredNorm();
  }
  return p;
}

Eigen::VectorXd consumption(const ClusterConfig& cluster,
                            const BeamformingSolution& beams) {
  return per_bs_tx_power(cluster, beams) / cluster.pa_efficiency +
         cluster.p_circuit;
}

Eigen::VectorXd sinr(const ChannelSet& channels, const QosTargets& qos,
                     const BeamformingSolution& beams) {
  const int k_mt = channels.n_mt();
  // gains(k, l) = h_k^H w_l
  const Eigen::MatrixXcd gains = channels.h.adjoint() * beams.w;
  Eigen::VectorXd out(k_mt);
  for (int k = 0; k < k_mt; ++k) {
    const double wanted = std::norm(gains(k, k));
    double interference = 0.0;
    for (int l = 0; l < k_mt; ++l) {
      if (l != k) interference += std::norm(gains(k, l));
    }
    out[k] = wanted / (interference + qos.noise_power[k]);
  }
  return out;
}

double total_cost(const EnergyInputs& energy, const EnergySchedule& schedule) {
  return energy.price_buy.dot(schedule.buy) - energy.price_sell.dot(schedule.sell);
}

}  // namespace gridbeam
