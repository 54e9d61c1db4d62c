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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gridbeam/baselines.hpp"
#include "gridbeam/model.hpp"
#include "support.hpp"

using namespace gridbeam;

TEST_CASE("minimum-power baseline on the two-BS golden instance") {
  const ProblemInstance toy = testsupport::make_toy();
  const SolveOutcome outcome = conventional_optimal(toy);
  REQUIRE(outcome.status == SolveStatus::Converged);
  // Minimum sum power aligns the beam with the channel: powers
  // (0.64, 0.16); billed at the true tariffs that costs
  // 1 * (0.64 - 0.2) - 0.1 * (1 - 0.16) = 0.356.
  const Eigen::VectorXd tx = per_bs_tx_power(toy.cluster, outcome.beams);
  CHECK(tx[0] == doctest::Approx(0.64).epsilon(1e-3));
  CHECK(tx[1] == doctest::Approx(0.16).epsilon(1e-3));
  CHECK(outcome.cost == doctest::Approx(0.356).epsilon(1e-3));
  CHECK(outcome.cost ==
        doctest::Approx(total_cost(toy.energy, outcome.schedule))
            .epsilon(1e-12));
}

TEST_CASE("trading-aware solve never costs more than the baseline") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 2 + trial % 2;
    const int m = 1 + trial % 2;
    const int k = 1 + trial % (n * m);
    const ProblemInstance instance =
        testsupport::random_instance(rng, n, m, k);
    const SolveOutcome joint = solve_joint(instance);
    const SolveOutcome conv = conventional_optimal(instance);
    REQUIRE(joint.status == SolveStatus::Converged);
    REQUIRE(conv.status == SolveStatus::Converged);
    CHECK(joint.cost <=
          conv.cost + 1e-6 * std::max(1.0, std::abs(conv.cost)));
  }
}

TEST_CASE("with equal tariffs the baseline is already optimal") {
  std::mt19937_64 rng(2025);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 2 + trial % 2;
    ProblemInstance instance = testsupport::random_instance(rng, n, 2, 2);
    testsupport::equalize_prices(&instance);
    const SolveOutcome joint = solve_joint(instance);
    const SolveOutcome conv = conventional_optimal(instance);
    REQUIRE(joint.status == SolveStatus::Converged);
    REQUIRE(conv.status == SolveStatus::Converged);
    CHECK(std::abs(joint.cost - conv.cost) <=
          1e-6 * std::max(1.0, std::abs(joint.cost)));
    const SolveOutcome zf_joint = solve_zf(instance);
    const SolveOutcome zf_conv = conventional_zf(instance);
    REQUIRE(zf_joint.status == SolveStatus::Converged);
    REQUIRE(zf_conv.status == SolveStatus::Converged);
    CHECK(std::abs(zf_joint.cost - zf_conv.cost) <=
          1e-6 * std::max(1.0, std::abs(zf_joint.cost)));
  }
}

TEST_CASE("baseline powers ignore tariffs and harvests") {
  std::mt19937_64 rng(2026);
  ProblemInstance instance = testsupport::random_instance(rng, 3, 2, 3);
  const SolveOutcome a = conventional_optimal(instance);
  REQUIRE(a.status == SolveStatus::Converged);

  // Rewrite the price/harvest landscape completely; the radiated powers
  // must not move, only the bill.
  instance.energy.harvest = Eigen::Vector3d(0.0, 5.0, 1.0);
  instance.energy.price_buy = Eigen::Vector3d(2.0, 1.5, 3.0);
  instance.energy.price_sell = Eigen::Vector3d(0.2, 0.3, 0.1);
  const SolveOutcome b = conventional_optimal(instance);
  REQUIRE(b.status == SolveStatus::Converged);

  const Eigen::VectorXd tx_a = per_bs_tx_power(instance.cluster, a.beams);
  const Eigen::VectorXd tx_b = per_bs_tx_power(instance.cluster, b.beams);
  CHECK((tx_a - tx_b).cwiseAbs().maxCoeff() < 1e-6 * (1.0 + tx_a.maxCoeff()));
  CHECK(b.cost ==
        doctest::Approx(total_cost(instance.energy, b.schedule)).epsilon(1e-12));
}

TEST_CASE("baseline respects caps and targets like any solve") {
  std::mt19937_64 rng(2027);
  ProblemInstance instance = testsupport::random_instance(rng, 2, 2, 3);
  REQUIRE(testsupport::cap_with_margin(&instance, 1.4));
  const SolveOutcome conv = conventional_optimal(instance);
  REQUIRE(conv.status == SolveStatus::Converged);
  const Eigen::VectorXd achieved =
      sinr(instance.channels, instance.qos, conv.beams);
  CHECK(((achieved - instance.qos.sinr_min).array() >
         -1e-6 * instance.qos.sinr_min.array())
            .all());
  const Eigen::VectorXd tx = per_bs_tx_power(instance.cluster, conv.beams);
  CHECK((tx.array() <= instance.cluster.p_max.array() * (1.0 + 1e-5)).all());
}
