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

#include "gridbeam/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace gridbeam {

namespace {

/// Bill contribution of one BS radiating p watts.
double bs_cost(const ProblemInstance& instance, int i, double p) {
  const double draw = p / instance.cluster.pa_efficiency +
                      instance.cluster.p_circuit[i];
  const double imbalance = draw - instance.energy.harvest[i];
  return imbalance >= 0.0 ? instance.energy.price_buy[i] * imbalance
                          : instance.energy.price_sell[i] * imbalance;
}

}  // namespace

GridSearchResult grid_search_two_bs(const ProblemInstance& instance,
                                    double grid_step) {
  instance.validate();
  if (instance.cluster.n_bs != 2 || instance.cluster.n_ant != 1 ||
      instance.cluster.n_mt != 1) {
    throw std::invalid_argument(
        "grid_search_two_bs: requires n_bs == 2, n_ant == 1, n_mt == 1");
  }
  if (!(grid_step > 0.0)) {
    throw std::invalid_argument("grid_search_two_bs: grid_step must be positive");
  }

  const double gamma = instance.qos.sinr_min[0];
  const double noise = instance.qos.noise_power[0];
  const double threshold = std::sqrt(gamma * noise);

  GridSearchResult result;
  result.grid_step = grid_step;
  result.cost = std::numeric_limits<double>::infinity();

  // Per-axis tables: amplitude contribution and bill at each grid power.
  std::vector<std::vector<double>> amp(2), cost(2);
  for (int i = 0; i < 2; ++i) {
    const double mag = std::abs(instance.channels.h(i, 0));
    double axis_max = instance.cluster.p_max[i];
    if (mag > 0.0) {
      const double solo = gamma * noise / (mag * mag);
      axis_max = std::min(axis_max, solo + grid_step);
    }
    const int count = static_cast<int>(std::floor(axis_max / grid_step)) + 1;
    amp[i].resize(count);
    cost[i].resize(count);
    for (int j = 0; j < count; ++j) {
      const double p = j * grid_step;
      amp[i][j] = mag * std::sqrt(p);
      cost[i][j] = bs_cost(instance, i, p);
    }
  }

  // The bill is nondecreasing along each axis, so for every p1 the best
  // feasible p2 is the smallest one, found by binary search in the sorted
  // amplitude table.
  for (int j1 = 0; j1 < static_cast<int>(amp[0].size()); ++j1) {
    const double need = threshold - amp[0][j1] - 1e-12;
    int j2 = 0;
    if (need > 0.0) {
      const auto it =
          std::lower_bound(amp[1].begin(), amp[1].end(), need);
      if (it == amp[1].end()) continue;
      j2 = static_cast<int>(it - amp[1].begin());
    }
    const double total = cost[0][j1] + cost[1][j2];
    if (total < result.cost) {
      result.cost = total;
      result.tx_power << j1 * grid_step, j2 * grid_step;
      result.feasible = true;
    }
  }
  return result;
}

SingleUserSolution single_user_closed_forms(const ProblemInstance& instance,
                                            const Eigen::VectorXd& mu,
                                            const Eigen::VectorXd& nu) {
  instance.validate();
  if (instance.cluster.n_mt != 1) {
    throw std::invalid_argument("single_user_closed_forms: requires n_mt == 1");
  }
  const ClusterConfig& cluster = instance.cluster;
  const double gamma = instance.qos.sinr_min[0];
  const double noise = instance.qos.noise_power[0];
  const Eigen::VectorXcd h = instance.channels.h.col(0);

  // Per-antenna weights of the diagonal form.
  Eigen::VectorXd diag(cluster.stacked_dim());
  for (int i = 0; i < cluster.n_bs; ++i) {
    diag.segment(i * cluster.n_ant, cluster.n_ant)
        .setConstant(mu[i] / cluster.pa_efficiency + nu[i]);
  }
  if ((diag.array() <= 0.0).any()) {
    throw std::invalid_argument(
        "single_user_closed_forms: weights must be strictly positive");
  }

  const Eigen::VectorXcd solved = h.array() / diag.array().cast<Complex>();
  const double quad = std::real(h.dot(solved));  // h^H diag^{-1} h

  SingleUserSolution out;
  out.lambda = gamma / quad;
  out.direction = solved / solved.norm();
  const double own = std::norm(h.dot(out.direction));
  out.power = gamma * noise / own;
  out.beams.w = std::sqrt(out.power) * out.direction;
  out.tx_power = per_bs_tx_power(cluster, out.beams);

  const Eigen::VectorXd weights = mu / cluster.pa_efficiency + nu;
  out.dual_value = weights.dot(out.tx_power) +
                   mu.dot(cluster.p_circuit - instance.energy.harvest) -
                   nu.dot(cluster.p_max);
  out.subgradient_mu = out.tx_power / cluster.pa_efficiency +
                       cluster.p_circuit - instance.energy.harvest;
  out.subgradient_nu = out.tx_power - cluster.p_max;
  return out;
}

double finite_diff_subgradient_check(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& analytic_subgradient, const Eigen::VectorXd& point,
    double step) {
  if (analytic_subgradient.size() != point.size()) {
    throw std::invalid_argument(
        "finite_diff_subgradient_check: length mismatch");
  }
  if (!(step > 0.0)) {
    throw std::invalid_argument("finite_diff_subgradient_check: step must be positive");
  }
  double worst = 0.0;
  for (int j = 0; j < point.size(); ++j) {
    Eigen::VectorXd plus = point, minus = point;
    plus[j] += step;
    minus[j] -= step;
    const double fd = (f(plus) - f(minus)) / (2.0 * step);
    const double err = std::abs(fd - analytic_subgradient[j]) /
                       std::max(1.0, std::abs(analytic_subgradient[j]));
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace gridbeam
