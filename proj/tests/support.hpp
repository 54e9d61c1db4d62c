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

/// \file support.hpp
/// Shared fixtures for the test binaries: the two-BS golden instance,
/// random instance generation, and helpers to cap instances so they stay
/// feasible by construction.

#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "gridbeam/baselines.hpp"
#include "gridbeam/duality_solver.hpp"
#include "gridbeam/model.hpp"
#include "gridbeam/zf_solver.hpp"

#include <Eigen/Dense>

namespace testsupport {

/// Two single-antenna base stations, one terminal, real channel (1, 0.5),
/// unit SINR target and noise, harvests (0.2, 1.0), tariffs buy 1 / sell
/// 0.1.  Known optimum: per-BS powers (0.25, 1.0) at cost 0.05; the
/// minimum-sum-power alternative radiates (0.64, 0.16) and costs 0.356.
inline gridbeam::ProblemInstance make_toy() {
  gridbeam::ProblemInstance instance;
  instance.cluster.n_bs = 2;
  instance.cluster.n_ant = 1;
  instance.cluster.n_mt = 1;
  instance.cluster.pa_efficiency = 1.0;
  instance.cluster.p_max = Eigen::Vector2d(10.0, 10.0);
  instance.cluster.p_circuit = Eigen::Vector2d(0.0, 0.0);
  instance.energy.harvest = Eigen::Vector2d(0.2, 1.0);
  instance.energy.price_buy = Eigen::Vector2d(1.0, 1.0);
  instance.energy.price_sell = Eigen::Vector2d(0.1, 0.1);
  instance.energy.price_floor = 0.05;
  instance.energy.price_cap = 2.0;
  instance.channels.n_ant = 1;
  instance.channels.h = Eigen::MatrixXcd(2, 1);
  instance.channels.h << gridbeam::Complex(1.0, 0.0),
      gridbeam::Complex(0.5, 0.0);
  instance.qos.sinr_min = Eigen::VectorXd::Constant(1, 1.0);
  instance.qos.noise_power = Eigen::VectorXd::Constant(1, 1.0);
  return instance;
}

inline gridbeam::ChannelSet random_channels(std::mt19937_64& rng, int n_bs,
                                            int n_ant, int n_mt) {
  std::normal_distribution<double> normal(0.0, 1.0);
  gridbeam::ChannelSet channels;
  channels.n_ant = n_ant;
  channels.h.resize(n_bs * n_ant, n_mt);
  for (int k = 0; k < n_mt; ++k) {
    for (int j = 0; j < n_bs * n_ant; ++j) {
      channels.h(j, k) = gridbeam::Complex(normal(rng) / std::numbers::sqrt2,
                                           normal(rng) / std::numbers::sqrt2);
    }
  }
  return channels;
}

/// Random instance with unit-variance channels, tariffs spread inside a
/// fixed market band, and caps generous enough to never bind.
inline gridbeam::ProblemInstance random_instance(std::mt19937_64& rng,
                                                 int n_bs, int n_ant,
                                                 int n_mt) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  gridbeam::ProblemInstance instance;
  instance.cluster.n_bs = n_bs;
  instance.cluster.n_ant = n_ant;
  instance.cluster.n_mt = n_mt;
  instance.cluster.pa_efficiency = 0.3 + 0.7 * uniform(rng);
  instance.cluster.p_max = Eigen::VectorXd::Constant(n_bs, 1e6);
  instance.cluster.p_circuit = Eigen::VectorXd::Zero(n_bs);
  for (int i = 0; i < n_bs; ++i) {
    instance.cluster.p_circuit[i] = 0.5 * uniform(rng);
  }
  instance.energy.price_floor = 0.05;
  instance.energy.price_cap = 4.0;
  instance.energy.harvest = Eigen::VectorXd::Zero(n_bs);
  instance.energy.price_buy = Eigen::VectorXd::Zero(n_bs);
  instance.energy.price_sell = Eigen::VectorXd::Zero(n_bs);
  for (int i = 0; i < n_bs; ++i) {
    instance.energy.harvest[i] = 2.0 * uniform(rng);
    const double sell = 0.1 + 0.6 * uniform(rng);
    instance.energy.price_sell[i] = sell;
    instance.energy.price_buy[i] = sell + 0.2 + (3.0 - sell) * uniform(rng) * 0.5;
  }
  instance.channels = random_channels(rng, n_bs, n_ant, n_mt);
  instance.qos.sinr_min = Eigen::VectorXd::Zero(n_mt);
  instance.qos.noise_power = Eigen::VectorXd::Zero(n_mt);
  for (int k = 0; k < n_mt; ++k) {
    instance.qos.sinr_min[k] = 0.5 + 2.5 * uniform(rng);
    instance.qos.noise_power[k] = 0.5 + uniform(rng);
  }
  instance.validate();
  return instance;
}

/// Replace the tariffs with one common price on both sides of the meter
/// across every BS (the mean buying price).  In that regime the bill is an
/// affine function of total consumption, so cost minimization collapses to
/// minimum-power beamforming and trading direction stops mattering.
inline void equalize_prices(gridbeam::ProblemInstance* instance) {
  const double common = instance->energy.price_buy.mean();
  instance->energy.price_buy.setConstant(common);
  instance->energy.price_sell.setConstant(common);
}

/// Shrink the caps to margin times the larger of the unconstrained
/// general and zero-forcing per-BS powers, so both solvers stay feasible
/// by construction while the caps are close enough to matter.  Returns
/// false when either unconstrained solve fails (callers skip the draw).
inline bool cap_with_margin(gridbeam::ProblemInstance* instance,
                            double margin,
                            const gridbeam::SolveOptions& options = {}) {
  const gridbeam::SolveOutcome base = gridbeam::solve_joint(*instance, options);
  if (base.status != gridbeam::SolveStatus::Converged) return false;
  const gridbeam::SolveOutcome zf = gridbeam::solve_zf(*instance, options);
  if (zf.status != gridbeam::SolveStatus::Converged) return false;
  const Eigen::VectorXd joint_power =
      per_bs_tx_power(instance->cluster, base.beams);
  const Eigen::VectorXd zf_power = per_bs_tx_power(instance->cluster, zf.beams);
  instance->cluster.p_max =
      margin * joint_power.cwiseMax(zf_power).cwiseMax(1e-9);
  return true;
}

}  // namespace testsupport
